#include <doctest.h>

#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "core/markup.hpp"

using namespace docground;

TEST_CASE("parse a single grounded span with spaced coordinates") {
    ParseResult r = parse("<ocr>Hello</ocr><bbox>100, 200, 300, 400</bbox>");
    REQUIRE(r.ok());
    REQUIRE(r.doc.segments.size() == 1);
    CHECK(r.doc.segments[0] == GroundedText::span("Hello", {100, 200, 300, 400}));
    CHECK(serialize(r.doc) == "<ocr>Hello</ocr><bbox>100,200,300,400</bbox>");
}

TEST_CASE("plain text passes through") {
    ParseResult r = parse("just text");
    REQUIRE(r.ok());
    REQUIRE(r.doc.segments.size() == 1);
    CHECK(r.doc.segments[0] == GroundedText::plain("just text"));
    CHECK(parse("").doc.segments.empty());
}

TEST_CASE("mixed plain and grounded content") {
    ParseResult r = parse("The value is <ocr>42</ocr><bbox>10,20,30,40</bbox> exactly.");
    REQUIRE(r.ok());
    REQUIRE(r.doc.segments.size() == 3);
    CHECK(r.doc.segments[0] == GroundedText::plain("The value is "));
    CHECK(r.doc.segments[1] == GroundedText::span("42", {10, 20, 30, 40}));
    CHECK(r.doc.segments[2] == GroundedText::plain(" exactly."));
    CHECK(strip_grounding(r.doc) == "The value is 42 exactly.");
}

TEST_CASE("whitespace between the tag pair is tolerated") {
    ParseResult r = parse("<ocr>A</ocr> \n <bbox>1,2,3,4</bbox>");
    REQUIRE(r.ok());
    REQUIRE(r.doc.segments.size() == 1);
    CHECK(r.doc.segments[0] == GroundedText::span("A", {1, 2, 3, 4}));
}

TEST_CASE("span text is preserved verbatim including whitespace") {
    ParseResult r = parse("<ocr>  padded  </ocr><bbox>1,2,3,4</bbox>");
    REQUIRE(r.ok());
    CHECK(r.doc.segments[0].text == "  padded  ");
}

TEST_CASE("null box group gives a boxless span") {
    ParseResult r = parse("<ocr>masked</ocr><bbox>null</bbox>");
    REQUIRE(r.ok());
    REQUIRE(r.doc.segments.size() == 1);
    CHECK(r.doc.segments[0].kind == SegmentKind::Grounded);
    CHECK(r.doc.segments[0].boxes.empty());
    CHECK_FALSE(r.doc.has_box());
}

TEST_CASE("strict mode rejects boxless spans") {
    ParseResult missing = parse("<ocr>A</ocr>", {.strict_boxes = true});
    REQUIRE(missing.defects.size() == 1);
    CHECK(missing.defects[0] == FormatDefect{DefectKind::NullBBox, 0});

    ParseResult literal = parse("x <ocr>A</ocr><bbox>null</bbox>", {.strict_boxes = true});
    REQUIRE(literal.defects.size() == 1);
    CHECK(literal.defects[0].kind == DefectKind::NullBBox);
    CHECK(literal.defects[0].position == 14); // at the group, not the span

    CHECK(parse("<ocr>A</ocr>").ok()); // lenient default
}

TEST_CASE("bad arity reported at the group") {
    ParseResult r = parse("<ocr>A</ocr><bbox>1,2,3</bbox>");
    REQUIRE(r.defects.size() == 1);
    CHECK(r.defects[0] == FormatDefect{DefectKind::BadArity, 12});

    ParseResult r5 = parse("<ocr>A</ocr><bbox>1,2,3,4,5</bbox>");
    REQUIRE(r5.defects.size() == 1);
    CHECK(r5.defects[0] == FormatDefect{DefectKind::BadArity, 12});
}

TEST_CASE("non numeric coordinate reported at the token") {
    ParseResult r = parse("<ocr>A</ocr><bbox>1,2,x,4</bbox>");
    REQUIRE(r.defects.size() == 1);
    CHECK(r.defects[0].kind == DefectKind::NonNumeric);
    CHECK(r.defects[0].position == 22);

    ParseResult spaced = parse("<ocr>A</ocr><bbox>1, 2.5, 3, 4</bbox>");
    REQUIRE(spaced.defects.size() == 1);
    CHECK(spaced.defects[0].kind == DefectKind::NonNumeric);
    CHECK(spaced.defects[0].position == 21); // offset of "2.5", past the space
}

TEST_CASE("out of range coordinates") {
    ParseResult big = parse("<ocr>A</ocr><bbox>0,0,1000,5</bbox>");
    REQUIRE(big.defects.size() == 1);
    CHECK(big.defects[0].kind == DefectKind::OutOfRange);
    CHECK(big.defects[0].position == 22);

    ParseResult neg = parse("<ocr>A</ocr><bbox>-1,0,10,5</bbox>");
    REQUIRE(neg.defects.size() == 1);
    CHECK(neg.defects[0].kind == DefectKind::OutOfRange);
    CHECK(neg.defects[0].position == 18);

    // Inverted corners are flagged at the group.
    ParseResult inv = parse("<ocr>A</ocr><bbox>30,0,10,5</bbox>");
    REQUIRE(inv.defects.size() == 1);
    CHECK(inv.defects[0] == FormatDefect{DefectKind::OutOfRange, 12});
}

TEST_CASE("unclosed ocr tag") {
    ParseResult r = parse("<ocr>abc");
    REQUIRE(r.defects.size() == 1);
    CHECK(r.defects[0] == FormatDefect{DefectKind::UnclosedTag, 0});
    REQUIRE(r.doc.segments.size() == 1);
    CHECK(r.doc.segments[0] == GroundedText::plain("abc")); // content survives

    ParseResult stray = parse("abc </ocr> def");
    REQUIRE(stray.defects.size() == 1);
    CHECK(stray.defects[0] == FormatDefect{DefectKind::UnclosedTag, 4});
}

TEST_CASE("unclosed bbox group spills its payload") {
    ParseResult r = parse("<ocr>A</ocr><bbox>1,2,");
    REQUIRE(r.defects.size() == 1);
    CHECK(r.defects[0] == FormatDefect{DefectKind::UnclosedTag, 12});
    CHECK(strip_grounding(r.doc) == "A1,2,");
}

TEST_CASE("orphan bbox group") {
    ParseResult r = parse("text <bbox>1,2,3,4</bbox>");
    REQUIRE(r.defects.size() == 1);
    CHECK(r.defects[0] == FormatDefect{DefectKind::OrphanBBox, 5});
    REQUIRE(r.doc.segments.size() == 1);
    CHECK(r.doc.segments[0] == GroundedText::plain("text "));

    ParseResult stray = parse("x </bbox>");
    REQUIRE(stray.defects.size() == 1);
    CHECK(stray.defects[0] == FormatDefect{DefectKind::OrphanBBox, 2});
}

TEST_CASE("nested ocr tags") {
    ParseResult r = parse("<ocr>a<ocr>b</ocr>");
    REQUIRE(!r.defects.empty());
    CHECK(r.defects[0] == FormatDefect{DefectKind::NestedTag, 6});
    // The inner span is parsed on its own after the restart.
    bool found = false;
    for (const Segment& s : r.doc.segments) {
        if (s.kind == SegmentKind::Grounded && s.text == "b") found = true;
    }
    CHECK(found);
}

TEST_CASE("bbox tag interrupting a span") {
    ParseResult r = parse("<ocr>a<bbox>1,2,3,4</bbox>");
    REQUIRE(r.defects.size() == 2);
    CHECK(r.defects[0] == FormatDefect{DefectKind::UnclosedTag, 0});
    CHECK(r.defects[1] == FormatDefect{DefectKind::OrphanBBox, 6});
}

TEST_CASE("defects are sorted by position") {
    ParseResult r = parse("</bbox> <ocr>A</ocr><bbox>1,2</bbox> </ocr>");
    REQUIRE(r.defects.size() == 3);
    CHECK(r.defects[0].position <= r.defects[1].position);
    CHECK(r.defects[1].position <= r.defects[2].position);
}

TEST_CASE("serialize requires exactly one box per grounded span") {
    GroundedText boxless{{GroundedText::span("A")}};
    CHECK_THROWS_AS(serialize(boxless), std::invalid_argument);
    CHECK(serialize(degrade_null(boxless)) == "A");

    Segment two = GroundedText::span("A", {1, 2, 3, 4});
    two.boxes.push_back({5, 6, 7, 8});
    CHECK_THROWS_AS(serialize(GroundedText{{two}}), std::invalid_argument);
}

TEST_CASE("serialize_box canonical form") {
    CHECK(serialize_box({0, 0, 999, 999}) == "<bbox>0,0,999,999</bbox>");
}

TEST_CASE("degrade_null turns boxless spans into plain text and coalesces") {
    ParseResult r = parse("a <ocr>b</ocr><bbox>null</bbox> c");
    REQUIRE(r.ok());
    GroundedText d = degrade_null(r.doc);
    REQUIRE(d.segments.size() == 1);
    CHECK(d.segments[0] == GroundedText::plain("a b c"));
    CHECK(strip_grounding(d) == strip_grounding(r.doc));
}

TEST_CASE("degrade keeps real boxes") {
    ParseResult r = parse("<ocr>x</ocr><bbox>null</bbox><ocr>y</ocr><bbox>1,2,3,4</bbox>");
    REQUIRE(r.ok());
    GroundedText d = degrade_null(r.doc);
    REQUIRE(d.segments.size() == 2);
    CHECK(d.segments[0] == GroundedText::plain("x"));
    CHECK(d.segments[1] == GroundedText::span("y", {1, 2, 3, 4}));
}

TEST_CASE("degrade with two null spans around a real one keeps order") {
    ParseResult r = parse(
        "<ocr>a</ocr><bbox>null</bbox> mid "
        "<ocr>b</ocr><bbox>5,6,7,8</bbox>"
        "<ocr>c</ocr><bbox>null</bbox>");
    REQUIRE(r.ok());
    GroundedText d = degrade_null(r.doc);
    REQUIRE(d.segments.size() == 3);
    CHECK(d.segments[0] == GroundedText::plain("a mid "));
    CHECK(d.segments[1] == GroundedText::span("b", {5, 6, 7, 8}));
    CHECK(d.segments[2] == GroundedText::plain("c"));
}

TEST_CASE("coalesce merges and drops empties") {
    GroundedText g{{GroundedText::plain("a"), GroundedText::plain(""), GroundedText::plain("b"),
                    GroundedText::span("s", {1, 2, 3, 4}), GroundedText::plain("c")}};
    GroundedText c = coalesce(g);
    REQUIRE(c.segments.size() == 3);
    CHECK(c.segments[0] == GroundedText::plain("ab"));
    CHECK(c.segments[2] == GroundedText::plain("c"));
}

TEST_CASE("extract_spans dequantizes") {
    ParseResult r = parse("<ocr>a</ocr><bbox>100,200,300,400</bbox> and <ocr>b</ocr><bbox>null</bbox>");
    REQUIRE(r.ok());
    auto spans = extract_spans(r.doc);
    REQUIRE(spans.size() == 1);
    CHECK(spans[0].first == "a");
    CHECK(spans[0].second.x1 == doctest::Approx(0.1005));
    CHECK(spans[0].second.y2 == doctest::Approx(0.4005));
}

TEST_CASE("round trip holds for randomly built documents") {
    std::mt19937_64 rng(42);
    std::uniform_int_distribution<int> coord(0, 999);
    std::uniform_int_distribution<int> seg_count(0, 6);
    std::uniform_int_distribution<int> kind(0, 2);
    std::uniform_int_distribution<int> len(0, 8);
    const std::string alphabet = "abc XYZ09.,:;!?()[]{}|/\\'\"-_=+*&^%$#@~`\n\t";
    std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);

    for (int iter = 0; iter < 500; ++iter) {
        GroundedText doc;
        bool last_plain = false;
        int n = seg_count(rng);
        for (int s = 0; s < n; ++s) {
            std::string text;
            int L = len(rng);
            for (int i = 0; i < L; ++i) text += alphabet[pick(rng)];
            if (!last_plain && kind(rng) == 0) {
                if (!text.empty()) {
                    doc.segments.push_back(GroundedText::plain(text));
                    last_plain = true;
                }
            } else {
                int x1 = coord(rng), y1 = coord(rng), x2 = coord(rng), y2 = coord(rng);
                if (x1 > x2) std::swap(x1, x2);
                if (y1 > y2) std::swap(y1, y2);
                doc.segments.push_back(GroundedText::span(text, {x1, y1, x2, y2}));
                last_plain = false;
            }
        }
        std::string wire = serialize(doc);
        ParseResult back = parse(wire);
        REQUIRE(back.ok());
        CHECK(back.doc == doc);
        CHECK(serialize(back.doc) == wire);
    }
}
