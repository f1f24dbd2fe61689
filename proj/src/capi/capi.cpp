#include "docground.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>
#include <vector>

#include "core/error.hpp"
#include "core/eval.hpp"
#include "core/geometry.hpp"
#include "core/markup.hpp"
#include "core/pipeline.hpp"
#include "core/textnorm.hpp"
#include "core/version.hpp"

using namespace docground;

struct dg_doc {
    GroundedText doc;
};

struct dg_defects {
    std::vector<FormatDefect> defects;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) {
    g_last_error = msg;
}

dg_status to_status(std::exception_ptr ep) {
    try {
        std::rethrow_exception(ep);
    } catch (const SchemaError& e) {
        set_error(e.what());
        return DG_ERR_SCHEMA;
    } catch (const IoError& e) {
        set_error(e.what());
        return DG_ERR_IO;
    } catch (const std::invalid_argument& e) {
        set_error(e.what());
        return DG_ERR_INVALID_ARGUMENT;
    } catch (const std::exception& e) {
        set_error(e.what());
        return DG_ERR_INTERNAL;
    } catch (...) {
        set_error("unknown error");
        return DG_ERR_INTERNAL;
    }
}

template <typename Fn>
dg_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (...) {
        return to_status(std::current_exception());
    }
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(::operator new(s.size() + 1, std::nothrow));
    if (!out) return nullptr;
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

dg_status give_string(const std::string& s, char** out) {
    if (!out) return DG_OK;
    *out = dup_string(s);
    if (!*out) {
        set_error("out of memory");
        return DG_ERR_INTERNAL;
    }
    return DG_OK;
}

std::string opt(const char* s) {
    return s ? std::string(s) : std::string();
}

dg_status require(const char* s, const char* name) {
    if (s && *s) return DG_OK;
    set_error(std::string(name) + " is required");
    return DG_ERR_INVALID_ARGUMENT;
}

BBox to_bbox(dg_box b) {
    return {b.x1, b.y1, b.x2, b.y2};
}

// Shared body for the file commands: run, then hand the summary out.
template <typename Fn>
dg_status run_command(char** out_payload, Fn&& fn) {
    return guarded([&]() -> dg_status {
        std::string payload = fn();
        return give_string(payload, out_payload);
    });
}

} // namespace

extern "C" {

const char* dg_version(void) {
    return kVersion;
}

const char* dg_last_error(void) {
    return g_last_error.c_str();
}

void dg_string_free(char* s) {
    ::operator delete(static_cast<void*>(s), std::nothrow);
}

double dg_box_iou(dg_box a, dg_box b) {
    return iou(to_bbox(a), to_bbox(b));
}

dg_quant_box dg_box_quantize(dg_box b) {
    QuantBox q = quantize(to_bbox(b));
    return {q.x1, q.y1, q.x2, q.y2};
}

dg_box dg_quant_box_dequantize(dg_quant_box q) {
    BBox b = dequantize(QuantBox{q.x1, q.y1, q.x2, q.y2});
    return {b.x1, b.y1, b.x2, b.y2};
}

dg_status dg_parse(const char* text, int strict_boxes, dg_doc** out_doc, dg_defects** out_defects) {
    if (out_doc) *out_doc = nullptr;
    if (out_defects) *out_defects = nullptr;
    if (!text) {
        set_error("text is required");
        return DG_ERR_INVALID_ARGUMENT;
    }
    return guarded([&]() -> dg_status {
        ParseOptions opts;
        opts.strict_boxes = strict_boxes != 0;
        ParseResult r = parse(text, opts);
        if (out_doc) *out_doc = new dg_doc{std::move(r.doc)};
        if (out_defects) *out_defects = new dg_defects{std::move(r.defects)};
        return DG_OK;
    });
}

void dg_doc_free(dg_doc* doc) {
    delete doc;
}

dg_status dg_doc_serialize(const dg_doc* doc, char** out_text) {
    if (!doc || !out_text) {
        set_error("doc and out_text are required");
        return DG_ERR_INVALID_ARGUMENT;
    }
    return guarded([&]() -> dg_status { return give_string(serialize(doc->doc), out_text); });
}

dg_status dg_doc_strip_grounding(const dg_doc* doc, char** out_text) {
    if (!doc || !out_text) {
        set_error("doc and out_text are required");
        return DG_ERR_INVALID_ARGUMENT;
    }
    return guarded([&]() -> dg_status { return give_string(strip_grounding(doc->doc), out_text); });
}

dg_status dg_doc_degrade_null(const dg_doc* doc, dg_doc** out_doc) {
    if (!doc || !out_doc) {
        set_error("doc and out_doc are required");
        return DG_ERR_INVALID_ARGUMENT;
    }
    *out_doc = nullptr;
    return guarded([&]() -> dg_status {
        *out_doc = new dg_doc{degrade_null(doc->doc)};
        return DG_OK;
    });
}

size_t dg_doc_segment_count(const dg_doc* doc) {
    return doc ? doc->doc.segments.size() : 0;
}

int dg_doc_segment_grounded(const dg_doc* doc, size_t i) {
    if (!doc || i >= doc->doc.segments.size()) return -1;
    return doc->doc.segments[i].kind == SegmentKind::Grounded ? 1 : 0;
}

const char* dg_doc_segment_text(const dg_doc* doc, size_t i) {
    if (!doc || i >= doc->doc.segments.size()) return nullptr;
    return doc->doc.segments[i].text.c_str();
}

size_t dg_doc_segment_box_count(const dg_doc* doc, size_t i) {
    if (!doc || i >= doc->doc.segments.size()) return 0;
    return doc->doc.segments[i].boxes.size();
}

dg_status dg_doc_segment_box(const dg_doc* doc, size_t i, size_t j, dg_quant_box* out) {
    if (!doc || !out || i >= doc->doc.segments.size() || j >= doc->doc.segments[i].boxes.size()) {
        set_error("segment or box index out of range");
        return DG_ERR_INVALID_ARGUMENT;
    }
    const QuantBox& b = doc->doc.segments[i].boxes[j];
    *out = {b.x1, b.y1, b.x2, b.y2};
    return DG_OK;
}

size_t dg_defects_count(const dg_defects* d) {
    return d ? d->defects.size() : 0;
}

int dg_defects_kind(const dg_defects* d, size_t i) {
    if (!d || i >= d->defects.size()) return -1;
    return static_cast<int>(d->defects[i].kind);
}

long long dg_defects_position(const dg_defects* d, size_t i) {
    if (!d || i >= d->defects.size()) return -1;
    return static_cast<long long>(d->defects[i].position);
}

void dg_defects_free(dg_defects* d) {
    delete d;
}

const char* dg_defect_kind_name(int kind) {
    if (kind < 0 || kind > static_cast<int>(DefectKind::NestedTag)) return "Unknown";
    return defect_kind_name(static_cast<DefectKind>(kind));
}

dg_status dg_f1_all(const dg_span* pred, size_t pred_count, const dg_span* gt, size_t gt_count,
                    double iou_threshold, double* precision, double* recall, double* f1) {
    if ((pred_count > 0 && !pred) || (gt_count > 0 && !gt)) {
        set_error("span arrays required when counts are non-zero");
        return DG_ERR_INVALID_ARGUMENT;
    }
    return guarded([&]() -> dg_status {
        auto convert = [](const dg_span* arr, size_t n) {
            std::vector<Span> out;
            out.reserve(n);
            for (size_t i = 0; i < n; ++i) {
                out.push_back({arr[i].text ? arr[i].text : "", to_bbox(arr[i].box)});
            }
            return out;
        };
        F1Scores s = f1_all(convert(pred, pred_count), convert(gt, gt_count), iou_threshold);
        if (precision) *precision = s.precision;
        if (recall) *recall = s.recall;
        if (f1) *f1 = s.f1;
        return DG_OK;
    });
}

dg_status dg_bleu4(const char* candidate, const char* const* references, size_t reference_count, double* out) {
    if (!candidate || !out || (reference_count > 0 && !references)) {
        set_error("candidate, references and out are required");
        return DG_ERR_INVALID_ARGUMENT;
    }
    return guarded([&]() -> dg_status {
        std::vector<std::string> refs;
        refs.reserve(reference_count);
        for (size_t i = 0; i < reference_count; ++i) refs.push_back(references[i] ? references[i] : "");
        *out = bleu4(candidate, refs);
        return DG_OK;
    });
}

int dg_exact_match(const char* a, const char* b) {
    if (!a || !b) return 0;
    return exact_match(a, b) ? 1 : 0;
}

dg_status dg_normalize_text(const char* text, char** out_text) {
    if (!text || !out_text) {
        set_error("text and out_text are required");
        return DG_ERR_INVALID_ARGUMENT;
    }
    return guarded([&]() -> dg_status { return give_string(normalize_text(text), out_text); });
}

dg_status dg_cmd_render_scene(const char* scene_json, const char* out_png) {
    if (dg_status s = require(scene_json, "scene_json"); s != DG_OK) return s;
    if (dg_status s = require(out_png, "out_png"); s != DG_OK) return s;
    return run_command(nullptr, [&] { return pipeline::render_scene_file(scene_json, out_png); });
}

dg_status dg_cmd_generate_scene(uint64_t seed, int width, int height, int layers, const char* out_json,
                                char** out_payload) {
    return run_command(out_payload,
                       [&] { return pipeline::generate_scene_file(seed, width, height, layers, opt(out_json)); });
}

dg_status dg_cmd_extract_boxes(const char* scene_json, int tol, const char* toggle, const char* out_json,
                               char** out_payload) {
    if (dg_status s = require(scene_json, "scene_json"); s != DG_OK) return s;
    std::string mode = (toggle && *toggle) ? toggle : "opacity";
    return run_command(out_payload,
                       [&] { return pipeline::extract_boxes_file(scene_json, tol, mode, opt(out_json)); });
}

dg_status dg_cmd_diff_box(const char* base_png, const char* variant_png, int tol, const char* out_json,
                          char** out_payload) {
    if (dg_status s = require(base_png, "base_png"); s != DG_OK) return s;
    if (dg_status s = require(variant_png, "variant_png"); s != DG_OK) return s;
    return run_command(out_payload,
                       [&] { return pipeline::diff_box_file(base_png, variant_png, tol, opt(out_json)); });
}

dg_status dg_cmd_merge_layout(const char* ordered_jsonl, const char* unordered_jsonl, const char* config_json,
                              const char* out_jsonl, char** out_payload) {
    if (dg_status s = require(ordered_jsonl, "ordered_jsonl"); s != DG_OK) return s;
    if (dg_status s = require(unordered_jsonl, "unordered_jsonl"); s != DG_OK) return s;
    return run_command(out_payload, [&] {
        return pipeline::merge_layout_file(ordered_jsonl, unordered_jsonl, opt(config_json), opt(out_jsonl));
    });
}

dg_status dg_cmd_gen_parsing_tasks(const char* pages_jsonl, const char* granularity, const char* templates_json,
                                   const char* out_jsonl, char** out_payload) {
    if (dg_status s = require(pages_jsonl, "pages_jsonl"); s != DG_OK) return s;
    if (dg_status s = require(granularity, "granularity"); s != DG_OK) return s;
    if (dg_status s = require(templates_json, "templates_json"); s != DG_OK) return s;
    return run_command(out_payload, [&] {
        return pipeline::gen_parsing_tasks_file(pages_jsonl, granularity, templates_json, opt(out_jsonl));
    });
}

dg_status dg_cmd_post_annotate(const char* generated_jsonl, const char* pages_jsonl, const char* templates_json,
                               uint64_t seed, const char* out_samples_jsonl, const char* out_stats_json,
                               char** out_summary) {
    if (dg_status s = require(generated_jsonl, "generated_jsonl"); s != DG_OK) return s;
    if (dg_status s = require(pages_jsonl, "pages_jsonl"); s != DG_OK) return s;
    if (dg_status s = require(templates_json, "templates_json"); s != DG_OK) return s;
    return run_command(out_summary, [&] {
        return pipeline::post_annotate_file(generated_jsonl, pages_jsonl, templates_json, seed,
                                            opt(out_samples_jsonl), opt(out_stats_json));
    });
}

dg_status dg_cmd_verify(const char* samples_jsonl, const char* pages_jsonl, int strict_pdf,
                        const char* out_accepted_jsonl, const char* out_rejected_jsonl, char** out_summary) {
    if (dg_status s = require(samples_jsonl, "samples_jsonl"); s != DG_OK) return s;
    if (dg_status s = require(out_accepted_jsonl, "out_accepted_jsonl"); s != DG_OK) return s;
    if (dg_status s = require(out_rejected_jsonl, "out_rejected_jsonl"); s != DG_OK) return s;
    return run_command(out_summary, [&] {
        return pipeline::verify_file(samples_jsonl, opt(pages_jsonl), strict_pdf != 0, out_accepted_jsonl,
                                     out_rejected_jsonl);
    });
}

dg_status dg_cmd_classify(const char* samples_jsonl, const char* out_jsonl, char** out_payload) {
    if (dg_status s = require(samples_jsonl, "samples_jsonl"); s != DG_OK) return s;
    return run_command(out_payload, [&] { return pipeline::classify_file(samples_jsonl, opt(out_jsonl)); });
}

dg_status dg_cmd_evaluate(const char* predictions_jsonl, const char* gt_jsonl, double iou_threshold,
                          const char* sweep_csv, const char* out_report_json, char** out_table) {
    if (dg_status s = require(predictions_jsonl, "predictions_jsonl"); s != DG_OK) return s;
    if (dg_status s = require(gt_jsonl, "gt_jsonl"); s != DG_OK) return s;
    return run_command(out_table, [&] {
        std::vector<double> sweep;
        std::string csv = opt(sweep_csv);
        std::size_t start = 0;
        while (start < csv.size()) {
            std::size_t comma = csv.find(',', start);
            if (comma == std::string::npos) comma = csv.size();
            std::string tok = csv.substr(start, comma - start);
            if (!tok.empty()) {
                std::size_t used = 0;
                double v = std::stod(tok, &used);
                if (used != tok.size()) throw std::invalid_argument("bad sweep threshold '" + tok + "'");
                sweep.push_back(v);
            }
            start = comma + 1;
        }
        return pipeline::evaluate_file(predictions_jsonl, gt_jsonl, iou_threshold, sweep, opt(out_report_json));
    });
}

dg_status dg_cmd_report(const char* corpus_jsonl, const char* out_json, char** out_table) {
    if (dg_status s = require(corpus_jsonl, "corpus_jsonl"); s != DG_OK) return s;
    return run_command(out_table, [&] { return pipeline::report_file(corpus_jsonl, opt(out_json)); });
}

} // extern "C"

static_assert(DG_DEFECT_UNCLOSED_TAG == static_cast<int>(DefectKind::UnclosedTag));
static_assert(DG_DEFECT_BAD_ARITY == static_cast<int>(DefectKind::BadArity));
static_assert(DG_DEFECT_NON_NUMERIC == static_cast<int>(DefectKind::NonNumeric));
static_assert(DG_DEFECT_OUT_OF_RANGE == static_cast<int>(DefectKind::OutOfRange));
static_assert(DG_DEFECT_ORPHAN_BBOX == static_cast<int>(DefectKind::OrphanBBox));
static_assert(DG_DEFECT_NULL_BBOX == static_cast<int>(DefectKind::NullBBox));
static_assert(DG_DEFECT_NESTED_TAG == static_cast<int>(DefectKind::NestedTag));
