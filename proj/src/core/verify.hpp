#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "core/dataset.hpp"
#include "core/markup.hpp"
#include "core/taxonomy.hpp"

namespace docground {

enum class ContentErrorKind {
    NotInAnnotations, // span text does not occur anywhere on the page
    BoxMismatch,      // text occurs, but not at (or near) the claimed box
};
const char* content_error_kind_name(ContentErrorKind k);

enum class SampleField { Question, Answer };
const char* sample_field_name(SampleField f);

struct FieldDefect {
    SampleField field;
    FormatDefect defect;
};

struct ContentError {
    ContentErrorKind kind;
    SampleField field;
    std::string span_text;
};

struct Verdict {
    std::vector<FieldDefect> defects;
    std::vector<ContentError> content_errors;
    bool accepted() const { return defects.empty() && content_errors.empty(); }
    std::string describe() const; // one line, empty for accepted verdicts
};

struct VerifyOptions {
    bool strict_pdf = false;   // run content checks on pdf samples too
    double box_min_iou = 0.99; // claimed box must hit a candidate this hard
};

// Stage 1: both fields must parse defect-free; box payloads are mandatory
// except on charts, where null boxes mark masked values. Stage 2 (skipped
// when index is null, and for pdf samples unless strict_pdf): every boxed
// span's text must occur on the page, and some occurrence's box must match
// the claimed one with IoU >= box_min_iou. Empty-text spans (pure box
// references in questions) skip the content check.
Verdict validate_sample(std::string_view question, std::string_view answer, DocType doc_type,
                        const TextIndex* index, const VerifyOptions& opts = {});

// Taxonomy cell for a parsed question and declared answer class.
TaskKind classify_task(const GroundedText& question, AnswerClass cls);

// Ga sample -> its ungrounded twin: markup stripped from the answer, class
// PA, task PlainQA, id suffixed. Throws std::invalid_argument on other tasks.
Sample derive_plain_qa(const Sample& s);

} // namespace docground
