#include <doctest.h>

#include <set>
#include <string>
#include <vector>

#include "core/annotate.hpp"
#include "core/error.hpp"
#include "support/tempdir.hpp"

using namespace docground;
using testsupport::TempDir;
using testsupport::write_file;

namespace {

TextIndex duplicate_text_index() {
    PosterPage p;
    p.id = "p";
    p.entries.push_back({"Overview", {50, 20, 300, 60}});
    p.entries.push_back({"Total Revenue", {100, 100, 400, 150}});
    p.entries.push_back({"Total Revenue", {100, 500, 400, 550}});
    return TextIndex::build(p);
}

std::vector<const Segment*> grounded_of(const GroundedText& doc) {
    std::vector<const Segment*> out;
    for (const Segment& s : doc.segments) {
        if (s.kind == SegmentKind::Grounded) out.push_back(&s);
    }
    return out;
}

} // namespace

TEST_CASE("boxless spans get boxes from the page index") {
    TextIndex idx = duplicate_text_index();
    OccurrenceSet used;
    std::string generated = "The <ocr>Overview</ocr> mentions <ocr>Total Revenue</ocr>.";
    GroundingResult res = locate_and_ground(generated, idx, used);
    REQUIRE(res.ok());
    CHECK(res.outcome.located == 2);
    CHECK(res.outcome.kept == 0);
    CHECK(res.outcome.degraded == 0);
    CHECK(res.outcome.multiline == 0);

    auto spans = grounded_of(res.outcome.doc);
    REQUIRE(spans.size() == 2);
    CHECK(spans[0]->boxes == std::vector<QuantBox>{{50, 20, 300, 60}});
    CHECK(spans[1]->boxes == std::vector<QuantBox>{{100, 100, 400, 150}});

    // Markup placement never rewrites what the reader sees.
    CHECK(strip_grounding(res.outcome.doc) == "The Overview mentions Total Revenue.");
    // The grounded result is serializable and round-trips.
    std::string wire = serialize(res.outcome.doc);
    CHECK(parse(wire).ok());
    CHECK(parse(wire).doc == res.outcome.doc);
}

TEST_CASE("repeated span text consumes distinct page occurrences") {
    TextIndex idx = duplicate_text_index();
    OccurrenceSet used;
    GroundingResult res =
        locate_and_ground("<ocr>Total Revenue</ocr> up; <ocr>Total Revenue</ocr> shown twice.", idx, used);
    REQUIRE(res.ok());
    CHECK(res.outcome.located == 2);

    auto spans = grounded_of(res.outcome.doc);
    REQUIRE(spans.size() == 2);
    CHECK(spans[0]->boxes == std::vector<QuantBox>{{100, 100, 400, 150}});
    CHECK(spans[1]->boxes == std::vector<QuantBox>{{100, 500, 400, 550}});
    CHECK_FALSE(spans[0]->boxes == spans[1]->boxes);

    // The set persists across calls: a third mention finds nothing left.
    GroundingResult third = locate_and_ground("<ocr>Total Revenue</ocr> again.", idx, used);
    REQUIRE(third.ok());
    CHECK(third.outcome.located == 0);
    CHECK(third.outcome.degraded == 1);
    CHECK(grounded_of(third.outcome.doc).empty());
    CHECK(strip_grounding(third.outcome.doc) == "Total Revenue again.");

    used.clear();
    GroundingResult fresh = locate_and_ground("<ocr>Total Revenue</ocr> again.", idx, used);
    CHECK(fresh.outcome.located == 1);
}

TEST_CASE("spans that already carry boxes are kept verbatim and consume nothing") {
    TextIndex idx = duplicate_text_index();
    OccurrenceSet used;
    GroundingResult res = locate_and_ground("<ocr>Overview</ocr><bbox>1,2,3,4</bbox> intro.", idx, used);
    REQUIRE(res.ok());
    CHECK(res.outcome.kept == 1);
    CHECK(res.outcome.located == 0);
    auto spans = grounded_of(res.outcome.doc);
    REQUIRE(spans.size() == 1);
    CHECK(spans[0]->boxes == std::vector<QuantBox>{{1, 2, 3, 4}});

    // The page occurrence is still free for a later boxless span.
    GroundingResult next = locate_and_ground("<ocr>Overview</ocr> again.", idx, used);
    CHECK(next.outcome.located == 1);
    CHECK(grounded_of(next.outcome.doc)[0]->boxes == std::vector<QuantBox>{{50, 20, 300, 60}});
}

TEST_CASE("unplaceable spans degrade to plain text and coalesce") {
    TextIndex idx = duplicate_text_index();
    OccurrenceSet used;
    GroundingResult res = locate_and_ground("before <ocr>missing stuff</ocr> after", idx, used);
    REQUIRE(res.ok());
    CHECK(res.outcome.degraded == 1);
    REQUIRE(res.outcome.doc.segments.size() == 1);
    CHECK(res.outcome.doc.segments[0].kind == SegmentKind::Plain);
    CHECK(res.outcome.doc.segments[0].text == "before missing stuff after");
}

TEST_CASE("spans that union several page lines are counted as multiline") {
    PdfPage page;
    page.id = "d";
    page.width = 800;
    page.height = 1000;
    Block b;
    b.id = "b0";
    b.text = "alpha beta\ngamma delta";
    b.bbox = {0.0, 0.0, 0.5, 0.5};
    b.source = BlockSource::Ordered;
    TextIndex idx = [&] {
        page.blocks.push_back(b);
        return TextIndex::build(page);
    }();

    OccurrenceSet used;
    GroundingResult res = locate_and_ground("see <ocr>beta gamma</ocr> here", idx, used);
    REQUIRE(res.ok());
    CHECK(res.outcome.located == 1);
    CHECK(res.outcome.multiline == 1);
    auto spans = grounded_of(res.outcome.doc);
    REQUIRE(spans.size() == 1);
    CHECK(spans[0]->boxes == std::vector<QuantBox>{quantize(BBox{0.0, 0.0, 0.5, 0.5})});
}

TEST_CASE("defective generated text is reported, not grounded") {
    TextIndex idx = duplicate_text_index();
    OccurrenceSet used;
    GroundingResult res = locate_and_ground("<ocr>broken", idx, used);
    CHECK_FALSE(res.ok());
    REQUIRE(res.defects.size() == 1);
    CHECK(res.defects[0].kind == DefectKind::UnclosedTag);
    CHECK(res.defects[0].position == 0);
    CHECK(res.outcome.located == 0);
    CHECK(res.outcome.doc.segments.empty());
}

TEST_CASE("occurrence set remembers taken keys until cleared") {
    OccurrenceSet used;
    CHECK_FALSE(used.taken(42));
    used.take(42);
    CHECK(used.taken(42));
    CHECK_FALSE(used.taken(43));
    used.clear();
    CHECK_FALSE(used.taken(42));
}

namespace {

FormatPromptTemplates tiny_templates() {
    FormatPromptTemplates t;
    t.grounded_answer = {"Answer briefly and box every fact you cite."};
    t.reasoning_opening = {"Think step by step, boxing evidence as you go."};
    t.reasoning_closing = {"End with \"Answer:\" and the final short answer."};
    return t;
}

} // namespace

TEST_CASE("format prompt templates load and refuse markup tags") {
    TempDir tmp;
    std::string good = tmp.file("prompts.json");
    write_file(good, R"({
      "grounded_answer": ["Box every fact.", "Cite with boxes."],
      "reasoning_opening": ["Reason first."],
      "reasoning_closing": ["Finish with Answer: and the result."]
    })");
    FormatPromptTemplates t = FormatPromptTemplates::load(good);
    CHECK(t.grounded_answer.size() == 2);
    CHECK(t.reasoning_opening.size() == 1);

    std::string bad = tmp.file("bad.json");
    SUBCASE("literal tag in a template") {
        write_file(bad, R"({
          "grounded_answer": ["Wrap it in <bbox> tags."],
          "reasoning_opening": ["a"], "reasoning_closing": ["a"]
        })");
        CHECK_THROWS_WITH_AS(FormatPromptTemplates::load(bad),
                             doctest::Contains("templates must not contain markup tags"), SchemaError);
    }
    SUBCASE("empty pool") {
        write_file(bad, R"({"grounded_answer": [], "reasoning_opening": ["a"], "reasoning_closing": ["a"]})");
        CHECK_THROWS_WITH_AS(FormatPromptTemplates::load(bad), doctest::Contains("non-empty array"), SchemaError);
    }
    SUBCASE("non-string entry") {
        write_file(bad, R"({"grounded_answer": [3], "reasoning_opening": ["a"], "reasoning_closing": ["a"]})");
        CHECK_THROWS_WITH_AS(FormatPromptTemplates::load(bad), doctest::Contains("non-empty strings"), SchemaError);
    }
    SUBCASE("missing file or invalid json") {
        CHECK_THROWS_AS(FormatPromptTemplates::load(tmp.file("absent.json")), IoError);
        write_file(bad, "{");
        CHECK_THROWS_AS(FormatPromptTemplates::load(bad), SchemaError);
    }
}

TEST_CASE("format prompts append per answer class") {
    FormatPromptTemplates t = tiny_templates();
    std::string q = "What is the total?";

    PromptChoice pa = attach_format_prompt(q, AnswerClass::PA, t, "s1", 7);
    CHECK(pa.question == q);
    CHECK(pa.indices.empty());

    PromptChoice ga = attach_format_prompt(q, AnswerClass::GA, t, "s1", 7);
    CHECK(ga.question == q + " " + t.grounded_answer[0]);
    CHECK(ga.indices == std::vector<int>{0});

    PromptChoice gr = attach_format_prompt(q, AnswerClass::GR, t, "s1", 7);
    CHECK(gr.question == q + " " + t.reasoning_opening[0] + " " + t.reasoning_closing[0]);
    CHECK(gr.indices == std::vector<int>{0, 0});

    PromptChoice go = attach_format_prompt(q, AnswerClass::GO, t, "s1", 7);
    CHECK(go.question == q + " " + t.reasoning_opening[0]);
    CHECK(go.indices == std::vector<int>{0});

    // Suffixes never change how the question classifies.
    std::string grounded_q = "Explain <ocr>this</ocr><bbox>1,2,3,4</bbox>.";
    PromptChoice gq = attach_format_prompt(grounded_q, AnswerClass::GA, t, "s1", 7);
    CHECK(parse(gq.question).ok());
    CHECK(parse(gq.question).doc.has_box());
    CHECK(parse(pa.question).doc.has_box() == false);
}

TEST_CASE("format prompt choice is a pure function of id, class, and seed") {
    FormatPromptTemplates t = tiny_templates();
    t.grounded_answer = {"Variant one.", "Variant two.", "Variant three."};

    PromptChoice a = attach_format_prompt("Q?", AnswerClass::GA, t, "sample-9", 123);
    PromptChoice b = attach_format_prompt("Q?", AnswerClass::GA, t, "sample-9", 123);
    CHECK(a.question == b.question);
    CHECK(a.indices == b.indices);
    REQUIRE(a.indices.size() == 1);
    CHECK(a.indices[0] >= 0);
    CHECK(a.indices[0] < 3);

    // Different ids spread across the pool; a fixed seed pins the whole corpus.
    std::set<int> seen;
    for (int i = 0; i < 60; ++i) {
        PromptChoice c = attach_format_prompt("Q?", AnswerClass::GA, t, "sample-" + std::to_string(i), 123);
        seen.insert(c.indices[0]);
    }
    CHECK(seen.size() > 1);

    bool seed_moves_some_pick = false;
    for (int i = 0; i < 60 && !seed_moves_some_pick; ++i) {
        std::string id = "sample-" + std::to_string(i);
        PromptChoice s1 = attach_format_prompt("Q?", AnswerClass::GA, t, id, 123);
        PromptChoice s2 = attach_format_prompt("Q?", AnswerClass::GA, t, id, 124);
        seed_moves_some_pick = s1.indices != s2.indices;
    }
    CHECK(seed_moves_some_pick);
}
