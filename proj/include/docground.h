/* C interface to the document grounding toolkit.
 *
 * All functions returning dg_status set a thread-local error message on
 * failure, readable via dg_last_error(). Strings handed out through char**
 * parameters are owned by the caller and released with dg_string_free().
 * Opaque handles are released with their matching *_free function.
 */
#ifndef DOCGROUND_H
#define DOCGROUND_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dg_status {
    DG_OK = 0,
    DG_ERR_INVALID_ARGUMENT = 1,
    DG_ERR_PARSE = 2,
    DG_ERR_IO = 3,
    DG_ERR_SCHEMA = 4,
    DG_ERR_INTERNAL = 5
} dg_status;

const char* dg_version(void);

/* Message for the most recent failure on this thread; never NULL. */
const char* dg_last_error(void);

void dg_string_free(char* s);

/* ---- geometry ---- */

typedef struct dg_box {
    double x1, y1, x2, y2;
} dg_box;

typedef struct dg_quant_box {
    int x1, y1, x2, y2;
} dg_quant_box;

double dg_box_iou(dg_box a, dg_box b);
dg_quant_box dg_box_quantize(dg_box b);
dg_box dg_quant_box_dequantize(dg_quant_box q);

/* ---- grounded markup ---- */

typedef struct dg_doc dg_doc;
typedef struct dg_defects dg_defects;

enum {
    DG_DEFECT_UNCLOSED_TAG = 0,
    DG_DEFECT_BAD_ARITY = 1,
    DG_DEFECT_NON_NUMERIC = 2,
    DG_DEFECT_OUT_OF_RANGE = 3,
    DG_DEFECT_ORPHAN_BBOX = 4,
    DG_DEFECT_NULL_BBOX = 5,
    DG_DEFECT_NESTED_TAG = 6
};

/* Parses markup. Always succeeds structurally: *out_doc receives the
 * recovered document and *out_defects the defect list (possibly empty).
 * Either out pointer may be NULL if the caller only wants the other.
 * strict_boxes != 0 makes boxless spans a defect. */
dg_status dg_parse(const char* text, int strict_boxes, dg_doc** out_doc, dg_defects** out_defects);

void dg_doc_free(dg_doc* doc);

/* Fails with DG_ERR_INVALID_ARGUMENT if a grounded segment does not carry
 * exactly one box; use dg_doc_degrade_null first. */
dg_status dg_doc_serialize(const dg_doc* doc, char** out_text);
dg_status dg_doc_strip_grounding(const dg_doc* doc, char** out_text);
dg_status dg_doc_degrade_null(const dg_doc* doc, dg_doc** out_doc);

size_t dg_doc_segment_count(const dg_doc* doc);
int dg_doc_segment_grounded(const dg_doc* doc, size_t i); /* 1 grounded, 0 plain, -1 bad index */
const char* dg_doc_segment_text(const dg_doc* doc, size_t i); /* NULL on bad index */
size_t dg_doc_segment_box_count(const dg_doc* doc, size_t i);
dg_status dg_doc_segment_box(const dg_doc* doc, size_t i, size_t j, dg_quant_box* out);

size_t dg_defects_count(const dg_defects* d);
int dg_defects_kind(const dg_defects* d, size_t i);         /* -1 on bad index */
long long dg_defects_position(const dg_defects* d, size_t i); /* -1 on bad index */
void dg_defects_free(dg_defects* d);
const char* dg_defect_kind_name(int kind);

/* ---- metrics ---- */

typedef struct dg_span {
    const char* text;
    dg_box box;
} dg_span;

/* Span-set F1 under text equality (normalized) and IoU strictly above the
 * threshold, maximum bipartite matching. Any out pointer may be NULL. */
dg_status dg_f1_all(const dg_span* pred, size_t pred_count, const dg_span* gt, size_t gt_count,
                    double iou_threshold, double* precision, double* recall, double* f1);

dg_status dg_bleu4(const char* candidate, const char* const* references, size_t reference_count, double* out);

/* 1 if the normalized texts are equal. */
int dg_exact_match(const char* a, const char* b);

dg_status dg_normalize_text(const char* text, char** out_text);

/* ---- file-level commands ----
 *
 * These mirror the CLI one to one. Passing NULL (or "") for an optional
 * output path skips that file; commands that can print their payload accept
 * an out_payload pointer (pass NULL to discard). Every primary output file
 * gets a <path>.manifest.json sidecar describing the run. */

dg_status dg_cmd_render_scene(const char* scene_json, const char* out_png);
dg_status dg_cmd_generate_scene(uint64_t seed, int width, int height, int layers, const char* out_json,
                                char** out_payload);
/* toggle: "opacity" (default when NULL or "") re-renders each probed layer at
 * opacity 0; "color" re-renders it with its fill RGB inverted instead. */
dg_status dg_cmd_extract_boxes(const char* scene_json, int tol, const char* toggle, const char* out_json,
                               char** out_payload);
dg_status dg_cmd_diff_box(const char* base_png, const char* variant_png, int tol, const char* out_json,
                          char** out_payload);
dg_status dg_cmd_merge_layout(const char* ordered_jsonl, const char* unordered_jsonl, const char* config_json,
                              const char* out_jsonl, char** out_payload);
dg_status dg_cmd_gen_parsing_tasks(const char* pages_jsonl, const char* granularity, const char* templates_json,
                                   const char* out_jsonl, char** out_payload);
dg_status dg_cmd_post_annotate(const char* generated_jsonl, const char* pages_jsonl, const char* templates_json,
                               uint64_t seed, const char* out_samples_jsonl, const char* out_stats_json,
                               char** out_summary);
dg_status dg_cmd_verify(const char* samples_jsonl, const char* pages_jsonl, int strict_pdf,
                        const char* out_accepted_jsonl, const char* out_rejected_jsonl, char** out_summary);
dg_status dg_cmd_classify(const char* samples_jsonl, const char* out_jsonl, char** out_payload);

/* sweep_csv: comma-separated strictly increasing thresholds, or NULL. The
 * returned payload is the human-readable score table. */
dg_status dg_cmd_evaluate(const char* predictions_jsonl, const char* gt_jsonl, double iou_threshold,
                          const char* sweep_csv, const char* out_report_json, char** out_table);
dg_status dg_cmd_report(const char* corpus_jsonl, const char* out_json, char** out_table);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* DOCGROUND_H */
