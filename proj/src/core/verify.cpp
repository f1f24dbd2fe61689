#include "core/verify.hpp"

#include <stdexcept>

#include "core/geometry.hpp"

namespace docground {

const char* content_error_kind_name(ContentErrorKind k) {
    switch (k) {
        case ContentErrorKind::NotInAnnotations: return "NotInAnnotations";
        case ContentErrorKind::BoxMismatch: return "BoxMismatch";
    }
    return "NotInAnnotations";
}

const char* sample_field_name(SampleField f) {
    return f == SampleField::Question ? "question" : "answer";
}

std::string Verdict::describe() const {
    std::string s;
    for (const FieldDefect& d : defects) {
        if (!s.empty()) s += "; ";
        s += std::string(defect_kind_name(d.defect.kind)) + " in " + sample_field_name(d.field) + " at byte " +
             std::to_string(d.defect.position);
    }
    for (const ContentError& e : content_errors) {
        if (!s.empty()) s += "; ";
        s += std::string(content_error_kind_name(e.kind)) + " in " + sample_field_name(e.field) + " for \"" +
             e.span_text + "\"";
    }
    return s;
}

namespace {

void check_content(const GroundedText& doc, SampleField field, const TextIndex& index, const VerifyOptions& opts,
                   Verdict& v) {
    for (const Segment& seg : doc.segments) {
        if (seg.kind != SegmentKind::Grounded || seg.boxes.empty()) continue;
        if (seg.text.empty()) continue; // pure box reference, nothing to look up
        auto candidates = index.query(seg.text);
        if (candidates.empty()) {
            v.content_errors.push_back({ContentErrorKind::NotInAnnotations, field, seg.text});
            continue;
        }
        for (const QuantBox& qb : seg.boxes) {
            BBox claimed = dequantize(qb);
            double best = 0.0;
            for (const auto& c : candidates) best = std::max(best, iou(claimed, c.box));
            if (best < opts.box_min_iou) {
                v.content_errors.push_back({ContentErrorKind::BoxMismatch, field, seg.text});
            }
        }
    }
}

} // namespace

Verdict validate_sample(std::string_view question, std::string_view answer, DocType doc_type,
                        const TextIndex* index, const VerifyOptions& opts) {
    Verdict v;
    ParseOptions popts;
    popts.strict_boxes = doc_type != DocType::Chart; // charts may mask values with null boxes
    ParseResult q = parse(question, popts);
    ParseResult a = parse(answer, popts);
    for (const FormatDefect& d : q.defects) v.defects.push_back({SampleField::Question, d});
    for (const FormatDefect& d : a.defects) v.defects.push_back({SampleField::Answer, d});
    if (!v.defects.empty()) return v; // formats broken; content checks would double-report

    bool content_checked = index && (doc_type != DocType::Pdf || opts.strict_pdf);
    if (content_checked) {
        check_content(q.doc, SampleField::Question, *index, opts, v);
        check_content(a.doc, SampleField::Answer, *index, opts, v);
    }
    return v;
}

TaskKind classify_task(const GroundedText& question, AnswerClass cls) {
    return task_for(question.has_box(), cls);
}

Sample derive_plain_qa(const Sample& s) {
    if (s.task != TaskKind::Ga) {
        throw std::invalid_argument("derive_plain_qa: only Ga samples have a plain twin");
    }
    ParseResult a = parse(s.answer);
    if (!a.ok()) throw std::invalid_argument("derive_plain_qa: answer does not parse");
    Sample out = s;
    out.id = s.id + "_plain";
    out.answer = strip_grounding(a.doc);
    out.answer_class = AnswerClass::PA;
    out.task = TaskKind::PlainQA;
    nlohmann::ordered_json meta = s.meta.is_object() ? s.meta : nlohmann::ordered_json::object();
    meta["derived_from"] = s.id;
    out.meta = std::move(meta);
    return out;
}

} // namespace docground
