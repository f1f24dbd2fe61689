#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/dataset.hpp"
#include "core/eval.hpp"

namespace docground::pipeline {

// File-level commands behind the CLI and the C API. Empty output paths mean
// "return the payload instead of writing a file"; a manifest sidecar is
// written next to every primary output file. All return a printable string:
// either the payload itself or a short summary.

std::string render_scene_file(const std::string& scene_json, const std::string& out_png);

std::string generate_scene_file(std::uint64_t seed, int width, int height, int layers,
                                const std::string& out_json);

std::string extract_boxes_file(const std::string& scene_json, int tol, const std::string& toggle,
                               const std::string& out_json);

std::string diff_box_file(const std::string& base_png, const std::string& variant_png, int tol,
                          const std::string& out_json);

std::string merge_layout_file(const std::string& ordered_jsonl, const std::string& unordered_jsonl,
                              const std::string& config_json, const std::string& out_jsonl);

std::string gen_parsing_tasks_file(const std::string& pages_jsonl, const std::string& granularity,
                                   const std::string& templates_json, const std::string& out_jsonl);

std::string post_annotate_file(const std::string& generated_jsonl, const std::string& pages_jsonl,
                               const std::string& templates_json, std::uint64_t seed,
                               const std::string& out_samples_jsonl, const std::string& out_stats_json);

std::string verify_file(const std::string& samples_jsonl, const std::string& pages_jsonl, bool strict_pdf,
                        const std::string& out_accepted_jsonl, const std::string& out_rejected_jsonl);

std::string classify_file(const std::string& samples_jsonl, const std::string& out_jsonl);

std::string evaluate_file(const std::string& predictions_jsonl, const std::string& gt_jsonl, double iou_threshold,
                          const std::vector<double>& sweep, const std::string& out_report_json);

std::string report_file(const std::string& corpus_jsonl, const std::string& out_json);

// Lenient sample reader for verify/classify: JSON structure and enums are
// checked, markup and task consistency are not (that is what verification
// is for). A missing task field defaults to PlainQA.
std::vector<Sample> load_samples_lenient(const std::string& path);

MergeConfig merge_config_from_file(const std::string& path); // {} -> defaults

} // namespace docground::pipeline
