#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "core/geometry.hpp"

namespace docground {

// Grounded text is a sequence of plain-text runs and grounded spans. A span
// is rendered as <ocr>text</ocr><bbox>x1,y1,x2,y2</bbox>. A span may carry no
// box at all ("<bbox>null</bbox>" or a missing group), which is how masked
// chart values and not-yet-annotated spans travel.
enum class SegmentKind { Plain, Grounded };

struct Segment {
    SegmentKind kind = SegmentKind::Plain;
    std::string text;
    std::vector<QuantBox> boxes; // empty for Plain and for boxless spans

    bool operator==(const Segment&) const = default;
};

struct GroundedText {
    std::vector<Segment> segments;

    bool has_box() const;
    bool operator==(const GroundedText&) const = default;

    static Segment plain(std::string text) { return {SegmentKind::Plain, std::move(text), {}}; }
    static Segment span(std::string text, QuantBox box) { return {SegmentKind::Grounded, std::move(text), {box}}; }
    static Segment span(std::string text) { return {SegmentKind::Grounded, std::move(text), {}}; }
};

enum class DefectKind {
    UnclosedTag,  // opening tag without its closer, or a stray </ocr>
    BadArity,     // box group with a coordinate count != 4
    NonNumeric,   // box coordinate that is not a plain integer
    OutOfRange,   // coordinate outside [0, 999], or x1 > x2 / y1 > y2
    OrphanBBox,   // <bbox> group (or stray </bbox>) with no preceding <ocr> span
    NullBBox,     // boxless span where a box is required (strict mode only)
    NestedTag,    // <ocr> opened inside another <ocr>
};

const char* defect_kind_name(DefectKind k);
std::optional<DefectKind> defect_kind_from_name(std::string_view name);

struct FormatDefect {
    DefectKind kind;
    std::size_t position; // byte offset into the input

    bool operator==(const FormatDefect&) const = default;
};

struct ParseOptions {
    // Reject boxless spans (literal null groups and spans with no group).
    bool strict_boxes = false;
};

struct ParseResult {
    GroundedText doc;
    std::vector<FormatDefect> defects; // sorted by position
    bool ok() const { return defects.empty(); }
};

// Never throws. A defect-free parse keeps every input character: serializing
// the result differs from the input only in whitespace inside and between the
// tag pair. Defective constructs are reported with the byte offset of the
// triggering tag or coordinate; their tag bytes leave the stream but the
// surrounding text survives as plain runs.
ParseResult parse(std::string_view raw, const ParseOptions& opts = {});

// Canonical wire form: no spaces inside <bbox> groups, no separator between
// </ocr> and <bbox>. parse(serialize(doc)) reproduces doc exactly. Throws
// std::invalid_argument if a grounded segment has zero or multiple boxes;
// degrade boxless spans first.
std::string serialize(const GroundedText& doc);

std::string serialize_box(const QuantBox& b); // "<bbox>x1,y1,x2,y2</bbox>"

// Visible text only, markup removed. Concatenation of all segment texts.
std::string strip_grounding(const GroundedText& doc);

// Turns boxless grounded spans into plain text and re-coalesces neighbours.
GroundedText degrade_null(const GroundedText& doc);

// Merges adjacent plain runs and drops empty plain runs.
GroundedText coalesce(const GroundedText& doc);

// One (text, box) pair per box of every grounded segment, boxes dequantized.
std::vector<std::pair<std::string, BBox>> extract_spans(const GroundedText& doc);

} // namespace docground
