#include "core/pipeline.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "core/annotate.hpp"
#include "core/error.hpp"
#include "core/manifest.hpp"
#include "core/markup.hpp"
#include "core/raster.hpp"
#include "core/verify.hpp"

namespace docground::pipeline {

using ojson = nlohmann::ordered_json;

namespace {

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << text;
    if (!out) throw IoError("write failed: " + path);
}

ojson bbox_arr(const BBox& b) {
    return ojson::array({b.x1, b.y1, b.x2, b.y2});
}

ojson quant_arr(const QuantBox& b) {
    return ojson::array({b.x1, b.y1, b.x2, b.y2});
}

std::string corpus_text(const Corpus& c) {
    std::string out;
    for (const CorpusItem& item : c.items) {
        out += corpus_item_to_json(item).dump();
        out += '\n';
    }
    return out;
}

} // namespace

std::string render_scene_file(const std::string& scene_json, const std::string& out_png) {
    Scene s = load_scene(scene_json);
    Raster img = render_scene(s);
    write_png(out_png, img);
    RunManifest m;
    m.command = "render-synthetic";
    m.inputs = {{"scene", scene_json}};
    m.outputs = {out_png};
    m.write_beside(out_png);
    return "rendered " + std::to_string(img.width) + "x" + std::to_string(img.height) + " -> " + out_png + "\n";
}

std::string generate_scene_file(std::uint64_t seed, int width, int height, int layers,
                                const std::string& out_json) {
    Scene s = random_scene(seed, width, height, layers);
    std::string payload = scene_to_json(s).dump(2) + "\n";
    if (out_json.empty()) return payload;
    write_text(out_json, payload);
    RunManifest m;
    m.command = "render-synthetic";
    m.config = {{"seed", seed}, {"width", width}, {"height", height}, {"layers", layers}};
    m.outputs = {out_json};
    m.write_beside(out_json);
    return "generated scene with " + std::to_string(s.layers.size()) + " layers -> " + out_json + "\n";
}

std::string extract_boxes_file(const std::string& scene_json, int tol, const std::string& toggle,
                               const std::string& out_json) {
    auto mode = toggle_mode_from_name(toggle);
    if (!mode) throw std::invalid_argument("toggle must be \"opacity\" or \"color\"");
    Scene s = load_scene(scene_json);
    std::vector<LayerBox> boxes = extract_layer_boxes(s, tol, *mode);
    ojson j;
    j["width"] = s.width;
    j["height"] = s.height;
    j["layers"] = ojson::array();
    for (const LayerBox& lb : boxes) {
        ojson e;
        e["id"] = lb.id;
        if (lb.box) {
            e["box"] = bbox_arr(*lb.box);
            e["quant"] = quant_arr(quantize(*lb.box));
        } else {
            e["box"] = nullptr;
            e["quant"] = nullptr;
            e["error"] = "InvisibleLayer";
        }
        j["layers"].push_back(std::move(e));
    }
    std::string payload = j.dump(2) + "\n";
    if (out_json.empty()) return payload;
    write_text(out_json, payload);
    RunManifest m;
    m.command = "extract-boxes";
    m.config = {{"tol", tol}, {"toggle", toggle_mode_name(*mode)}};
    m.inputs = {{"scene", scene_json}};
    m.outputs = {out_json};
    m.write_beside(out_json);
    return payload;
}

std::string diff_box_file(const std::string& base_png, const std::string& variant_png, int tol,
                          const std::string& out_json) {
    Raster a = read_png(base_png);
    Raster b = read_png(variant_png);
    auto pb = diff_bbox(a, b, tol);
    ojson j;
    j["width"] = a.width;
    j["height"] = a.height;
    j["changed"] = pb.has_value();
    if (pb) {
        j["box_px"] = ojson::array({pb->x1, pb->y1, pb->x2, pb->y2});
        BBox n = normalize_pixel_box(*pb, a.width, a.height);
        j["box"] = bbox_arr(n);
        j["quant"] = quant_arr(quantize(n));
    } else {
        j["box_px"] = nullptr;
        j["box"] = nullptr;
        j["quant"] = nullptr;
    }
    std::string payload = j.dump(2) + "\n";
    if (!out_json.empty()) {
        write_text(out_json, payload);
        RunManifest m;
        m.command = "extract-boxes";
        m.config = {{"tol", tol}};
        m.inputs = {{"base", base_png}, {"variant", variant_png}};
        m.outputs = {out_json};
        m.write_beside(out_json);
    }
    return payload;
}

MergeConfig merge_config_from_file(const std::string& path) {
    MergeConfig cfg;
    if (path.empty()) return cfg;
    std::ifstream in(path);
    if (!in) throw IoError("cannot open: " + path);
    ojson j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(0, path, std::string("invalid json: ") + e.what());
    }
    if (!j.is_object()) throw SchemaError(0, path, "config must be a json object");
    struct Key {
        const char* name;
        double* dst;
    };
    for (Key k : {Key{"dup_iou", &cfg.dup_iou}, Key{"dup_text_sim", &cfg.dup_text_sim},
                  Key{"trunc_iou", &cfg.trunc_iou}, Key{"eps", &cfg.eps}, Key{"col_overlap", &cfg.col_overlap}}) {
        if (!j.contains(k.name)) continue;
        if (!j[k.name].is_number()) throw SchemaError(0, k.name, "must be a number");
        *k.dst = j[k.name].get<double>();
    }
    for (auto& [key, val] : j.items()) {
        static const std::set<std::string> known = {"dup_iou", "dup_text_sim", "trunc_iou", "eps", "col_overlap"};
        if (!known.count(key)) throw SchemaError(0, key, "unknown merge config key");
    }
    return cfg;
}

std::string merge_layout_file(const std::string& ordered_jsonl, const std::string& unordered_jsonl,
                              const std::string& config_json, const std::string& out_jsonl) {
    std::vector<Block> ordered = load_blocks(ordered_jsonl);
    std::vector<Block> unordered = load_blocks(unordered_jsonl);
    MergeConfig cfg = merge_config_from_file(config_json);
    std::vector<Block> merged = merge(ordered, unordered, cfg);
    Corpus c;
    for (const Block& b : merged) c.items.push_back(b);
    std::string payload = corpus_text(c);
    if (out_jsonl.empty()) return payload;
    write_text(out_jsonl, payload);
    RunManifest m;
    m.command = "merge-layout";
    m.config = {{"dup_iou", cfg.dup_iou},
                {"dup_text_sim", cfg.dup_text_sim},
                {"trunc_iou", cfg.trunc_iou},
                {"eps", cfg.eps},
                {"col_overlap", cfg.col_overlap}};
    m.inputs = {{"ordered", ordered_jsonl}, {"unordered", unordered_jsonl}};
    if (!config_json.empty()) m.inputs.push_back({"config", config_json});
    m.outputs = {out_jsonl};
    m.write_beside(out_jsonl);
    return "merged " + std::to_string(ordered.size()) + " ordered + " + std::to_string(unordered.size()) +
           " unordered -> " + std::to_string(merged.size()) + " blocks -> " + out_jsonl + "\n";
}

std::string gen_parsing_tasks_file(const std::string& pages_jsonl, const std::string& granularity,
                                   const std::string& templates_json, const std::string& out_jsonl) {
    auto g = record_granularity_from_name(granularity);
    if (!g) throw std::invalid_argument("unknown granularity '" + granularity + "'");
    Corpus pages = load_corpus(pages_jsonl);
    ParsingTemplates t = ParsingTemplates::load(templates_json);
    Corpus out;
    std::size_t page_count = 0;
    for (const CorpusItem& item : pages.items) {
        std::vector<ParsingRecord> recs;
        if (const PosterPage* p = std::get_if<PosterPage>(&item)) {
            recs = emit_parsing_tasks(*p, *g, t);
        } else if (const ChartPage* c = std::get_if<ChartPage>(&item)) {
            recs = emit_parsing_tasks(*c, *g, t);
        } else if (const PdfPage* p = std::get_if<PdfPage>(&item)) {
            recs = emit_parsing_tasks(*p, *g, t);
        } else {
            continue;
        }
        ++page_count;
        for (ParsingRecord& r : recs) out.items.push_back(std::move(r));
    }
    if (page_count == 0) throw SchemaError(0, pages_jsonl, "no pages in corpus");
    std::string payload = corpus_text(out);
    if (out_jsonl.empty()) return payload;
    write_text(out_jsonl, payload);
    RunManifest m;
    m.command = "gen-parsing-tasks";
    m.config = {{"granularity", granularity}};
    m.inputs = {{"pages", pages_jsonl}, {"templates", templates_json}};
    m.outputs = {out_jsonl};
    m.write_beside(out_jsonl);
    return std::to_string(out.items.size()) + " records from " + std::to_string(page_count) + " pages -> " +
           out_jsonl + "\n";
}

namespace {

struct GenRecord {
    std::string id;
    std::string page;
    std::string question;
    std::string answer;
    AnswerClass answer_class = AnswerClass::PA;
};

std::vector<GenRecord> load_generated(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open: " + path);
    std::vector<GenRecord> out;
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        if (raw.find_first_not_of(" \t\r") == std::string::npos) continue;
        ojson j;
        try {
            j = ojson::parse(raw);
        } catch (const nlohmann::json::exception& e) {
            throw SchemaError(line, "", std::string("invalid json: ") + e.what());
        }
        if (!j.is_object()) throw SchemaError(line, "", "must be a json object");
        GenRecord r;
        auto str = [&](const char* key, bool allow_empty) {
            if (!j.contains(key) || !j[key].is_string()) throw SchemaError(line, key, "required string field");
            std::string v = j[key].get<std::string>();
            if (v.empty() && !allow_empty) throw SchemaError(line, key, "must not be empty");
            return v;
        };
        r.id = str("id", false);
        r.page = str("page", false);
        r.question = str("question", false);
        r.answer = str("answer", true);
        std::string ac = str("answer_class", false);
        auto cls = answer_class_from_name(ac);
        if (!cls) throw SchemaError(line, "answer_class", "unknown answer_class '" + ac + "'");
        r.answer_class = *cls;
        out.push_back(std::move(r));
    }
    return out;
}

struct PageEntry {
    DocType doc_type;
    TextIndex index;
};

std::map<std::string, PageEntry> index_pages(const Corpus& corpus) {
    std::map<std::string, PageEntry> out;
    for (const CorpusItem& item : corpus.items) {
        if (const PosterPage* p = std::get_if<PosterPage>(&item)) {
            out.emplace(p->id, PageEntry{DocType::Poster, TextIndex::build(*p)});
        } else if (const ChartPage* c = std::get_if<ChartPage>(&item)) {
            out.emplace(c->id, PageEntry{DocType::Chart, TextIndex::build(*c)});
        } else if (const PdfPage* p = std::get_if<PdfPage>(&item)) {
            out.emplace(p->id, PageEntry{DocType::Pdf, TextIndex::build(*p)});
        }
    }
    return out;
}

std::string defect_list_string(const std::vector<FormatDefect>& defects) {
    std::string s;
    for (const FormatDefect& d : defects) {
        if (!s.empty()) s += ", ";
        s += std::string(defect_kind_name(d.kind)) + "@" + std::to_string(d.position);
    }
    return s;
}

} // namespace

std::string post_annotate_file(const std::string& generated_jsonl, const std::string& pages_jsonl,
                               const std::string& templates_json, std::uint64_t seed,
                               const std::string& out_samples_jsonl, const std::string& out_stats_json) {
    std::vector<GenRecord> records = load_generated(generated_jsonl);
    Corpus pages = load_corpus(pages_jsonl);
    std::map<std::string, PageEntry> page_map = index_pages(pages);
    FormatPromptTemplates prompts = FormatPromptTemplates::load(templates_json);

    Corpus out;
    ojson rejected = ojson::array();
    int located = 0, kept = 0, degraded = 0, multiline = 0;

    for (const GenRecord& r : records) {
        auto it = page_map.find(r.page);
        if (it == page_map.end()) {
            throw SchemaError(0, "generated", "record '" + r.id + "' references unknown page '" + r.page + "'");
        }
        const PageEntry& page = it->second;

        OccurrenceSet q_used, a_used;
        GroundingResult q = locate_and_ground(r.question, page.index, q_used);
        GroundingResult a = locate_and_ground(r.answer, page.index, a_used);
        if (!q.ok() || !a.ok()) {
            ojson e;
            e["id"] = r.id;
            if (!q.ok()) e["question_defects"] = defect_list_string(q.defects);
            if (!a.ok()) e["answer_defects"] = defect_list_string(a.defects);
            rejected.push_back(std::move(e));
            continue;
        }
        for (const GroundingOutcome* o : {&q.outcome, &a.outcome}) {
            located += o->located;
            kept += o->kept;
            degraded += o->degraded;
            multiline += o->multiline;
        }

        std::string grounded_question = serialize(q.outcome.doc);
        PromptChoice choice = attach_format_prompt(grounded_question, r.answer_class, prompts, r.id, seed);

        Sample s;
        s.id = r.id;
        s.doc_type = page.doc_type;
        s.question = choice.question;
        s.answer = serialize(a.outcome.doc);
        s.answer_class = r.answer_class;
        s.task = classify_task(q.outcome.doc, r.answer_class);
        ojson meta = ojson::object();
        meta["page"] = r.page;
        if (!choice.indices.empty()) meta["format_prompt"] = choice.indices;
        meta["annotation"] = {{"located", q.outcome.located + a.outcome.located},
                              {"kept", q.outcome.kept + a.outcome.kept},
                              {"degraded", q.outcome.degraded + a.outcome.degraded},
                              {"multiline", q.outcome.multiline + a.outcome.multiline}};
        s.meta = std::move(meta);
        out.items.push_back(std::move(s));
    }

    std::string payload = corpus_text(out);
    if (!out_samples_jsonl.empty()) {
        write_text(out_samples_jsonl, payload);
        RunManifest m;
        m.command = "post-annotate";
        m.config = {{"seed", seed}};
        m.inputs = {{"generated", generated_jsonl}, {"pages", pages_jsonl}, {"templates", templates_json}};
        m.outputs = {out_samples_jsonl};
        if (!out_stats_json.empty()) m.outputs.push_back(out_stats_json);
        m.write_beside(out_samples_jsonl);
    }
    if (!out_stats_json.empty()) {
        ojson stats;
        stats["records"] = records.size();
        stats["samples"] = out.items.size();
        stats["rejected"] = std::move(rejected);
        stats["located"] = located;
        stats["kept"] = kept;
        stats["degraded"] = degraded;
        stats["multiline"] = multiline;
        write_text(out_stats_json, stats.dump(2) + "\n");
    }
    std::ostringstream os;
    os << out.items.size() << "/" << records.size() << " records annotated (" << located << " located, " << kept
       << " kept, " << degraded << " degraded, " << multiline << " multiline)";
    if (!out_samples_jsonl.empty()) os << " -> " << out_samples_jsonl;
    os << "\n";
    return out_samples_jsonl.empty() ? payload : os.str();
}

std::vector<Sample> load_samples_lenient(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open: " + path);
    std::vector<Sample> out;
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        if (raw.find_first_not_of(" \t\r") == std::string::npos) continue;
        ojson j;
        try {
            j = ojson::parse(raw);
        } catch (const nlohmann::json::exception& e) {
            throw SchemaError(line, "", std::string("invalid json: ") + e.what());
        }
        if (!j.is_object()) throw SchemaError(line, "", "must be a json object");
        auto str = [&](const char* key, bool required) -> std::string {
            if (!j.contains(key)) {
                if (required) throw SchemaError(line, key, "missing field");
                return "";
            }
            if (!j[key].is_string()) throw SchemaError(line, key, "must be a string");
            return j[key].get<std::string>();
        };
        std::string kind = str("kind", true);
        if (kind != "sample") throw SchemaError(line, "kind", "expected 'sample'");
        Sample s;
        s.id = str("id", true);
        if (s.id.empty()) throw SchemaError(line, "id", "must not be empty");
        std::string dt = str("doc_type", true);
        auto d = doc_type_from_name(dt);
        if (!d) throw SchemaError(line, "doc_type", "unknown doc_type '" + dt + "'");
        s.doc_type = *d;
        s.question = str("question", true);
        s.answer = str("answer", true);
        std::string ac = str("answer_class", true);
        auto cls = answer_class_from_name(ac);
        if (!cls) throw SchemaError(line, "answer_class", "unknown answer_class '" + ac + "'");
        s.answer_class = *cls;
        std::string tn = str("task", false);
        if (!tn.empty()) {
            auto task = task_from_name(tn);
            if (!task) throw SchemaError(line, "task", "unknown task '" + tn + "'");
            s.task = *task;
        }
        if (j.contains("meta")) {
            if (!j["meta"].is_object()) throw SchemaError(line, "meta", "must be an object");
            s.meta = j["meta"];
        }
        out.push_back(std::move(s));
    }
    return out;
}

std::string verify_file(const std::string& samples_jsonl, const std::string& pages_jsonl, bool strict_pdf,
                        const std::string& out_accepted_jsonl, const std::string& out_rejected_jsonl) {
    std::vector<Sample> samples = load_samples_lenient(samples_jsonl);
    std::map<std::string, PageEntry> page_map;
    bool have_pages = !pages_jsonl.empty();
    if (have_pages) page_map = index_pages(load_corpus(pages_jsonl));

    VerifyOptions opts;
    opts.strict_pdf = strict_pdf;

    std::string accepted_text, rejected_text;
    std::size_t accepted = 0, rejected = 0;
    for (const Sample& s : samples) {
        const TextIndex* index = nullptr;
        if (have_pages && s.meta.is_object() && s.meta.contains("page") && s.meta["page"].is_string()) {
            std::string page_id = s.meta["page"].get<std::string>();
            auto it = page_map.find(page_id);
            if (it == page_map.end()) {
                throw SchemaError(0, samples_jsonl, "sample '" + s.id + "' references unknown page '" + page_id + "'");
            }
            index = &it->second.index;
        }
        if (have_pages && !index) {
            // No page reference in meta: fall back to the only page of the
            // matching doc type, if unambiguous.
            const PageEntry* only = nullptr;
            bool ambiguous = false;
            for (const auto& [id, pe] : page_map) {
                if (pe.doc_type != s.doc_type) continue;
                if (only) {
                    ambiguous = true;
                    break;
                }
                only = &pe;
            }
            if (only && !ambiguous) index = &only->index;
            if (!index && s.doc_type != DocType::Pdf) {
                throw SchemaError(0, samples_jsonl,
                                  "sample '" + s.id + "' has no resolvable page for content checks");
            }
        }
        Verdict v = validate_sample(s.question, s.answer, s.doc_type, index, opts);
        if (v.accepted()) {
            ++accepted;
            accepted_text += corpus_item_to_json(s).dump();
            accepted_text += '\n';
            continue;
        }
        ++rejected;
        ojson rj;
        rj["id"] = s.id;
        rj["reasons"] = ojson::array();
        for (const FieldDefect& d : v.defects) {
            rj["reasons"].push_back({{"kind", defect_kind_name(d.defect.kind)},
                                     {"field", sample_field_name(d.field)},
                                     {"position", d.defect.position}});
        }
        for (const ContentError& e : v.content_errors) {
            rj["reasons"].push_back(
                {{"kind", content_error_kind_name(e.kind)}, {"field", sample_field_name(e.field)}, {"text", e.span_text}});
        }
        rj["sample"] = corpus_item_to_json(s);
        rejected_text += rj.dump();
        rejected_text += '\n';
    }

    write_text(out_accepted_jsonl, accepted_text);
    write_text(out_rejected_jsonl, rejected_text);
    RunManifest m;
    m.command = "verify";
    m.config = {{"strict_pdf", strict_pdf}, {"content_checks", have_pages}};
    m.inputs = {{"samples", samples_jsonl}};
    if (have_pages) m.inputs.push_back({"pages", pages_jsonl});
    m.outputs = {out_accepted_jsonl, out_rejected_jsonl};
    m.write_beside(out_accepted_jsonl);
    return std::to_string(accepted) + " accepted, " + std::to_string(rejected) + " rejected -> " +
           out_accepted_jsonl + ", " + out_rejected_jsonl + "\n";
}

std::string classify_file(const std::string& samples_jsonl, const std::string& out_jsonl) {
    std::vector<Sample> samples = load_samples_lenient(samples_jsonl);
    Corpus out;
    std::map<std::string, int> counts;
    for (Sample& s : samples) {
        ParseResult q = parse(s.question);
        if (!q.ok()) {
            throw SchemaError(0, samples_jsonl,
                              "sample '" + s.id + "': question has markup defects, run verify first");
        }
        s.task = classify_task(q.doc, s.answer_class);
        ++counts[task_name(s.task)];
        out.items.push_back(std::move(s));
    }
    std::string payload = corpus_text(out);
    std::ostringstream os;
    for (const auto& [name, n] : counts) os << name << "=" << n << " ";
    if (out_jsonl.empty()) return payload;
    write_text(out_jsonl, payload);
    RunManifest m;
    m.command = "classify";
    m.inputs = {{"samples", samples_jsonl}};
    m.outputs = {out_jsonl};
    m.write_beside(out_jsonl);
    return std::to_string(out.items.size()) + " samples classified (" + os.str() + ") -> " + out_jsonl + "\n";
}

std::string evaluate_file(const std::string& predictions_jsonl, const std::string& gt_jsonl, double iou_threshold,
                          const std::vector<double>& sweep, const std::string& out_report_json) {
    Corpus gt_corpus = load_corpus(gt_jsonl);
    std::vector<Sample> gt;
    for (const CorpusItem& item : gt_corpus.items) {
        if (const Sample* s = std::get_if<Sample>(&item)) gt.push_back(*s);
    }
    if (gt.empty()) throw SchemaError(0, gt_jsonl, "no samples in ground-truth corpus");
    std::vector<Prediction> preds = load_predictions(predictions_jsonl);

    EvalConfig cfg;
    cfg.iou_threshold = iou_threshold;
    cfg.sweep = sweep;
    if (!sweep.empty()) {
        for (std::size_t i = 1; i < sweep.size(); ++i) {
            if (sweep[i] <= sweep[i - 1]) throw std::invalid_argument("sweep thresholds must be strictly increasing");
        }
    }
    EvalReport rep = evaluate(gt, preds, cfg);

    if (!out_report_json.empty()) {
        write_text(out_report_json, report_to_json(rep).dump(2) + "\n");
        RunManifest m;
        m.command = "evaluate";
        m.config = {{"iou_threshold", iou_threshold}};
        if (!sweep.empty()) m.config["sweep"] = sweep;
        m.inputs = {{"predictions", predictions_jsonl}, {"gt", gt_jsonl}};
        m.outputs = {out_report_json};
        m.write_beside(out_report_json);
    }
    return report_to_text(rep);
}

std::string report_file(const std::string& corpus_jsonl, const std::string& out_json) {
    Corpus corpus = load_corpus(corpus_jsonl);
    std::map<std::string, int> kinds;
    std::map<std::string, int> tasks;
    std::map<std::string, int> doc_types;
    std::map<std::string, int> granularities;
    int poster_entries = 0, chart_entries = 0, pdf_blocks = 0;
    for (const CorpusItem& item : corpus.items) {
        if (const PosterPage* p = std::get_if<PosterPage>(&item)) {
            ++kinds["poster_page"];
            poster_entries += static_cast<int>(p->entries.size());
        } else if (const ChartPage* c = std::get_if<ChartPage>(&item)) {
            ++kinds["chart_page"];
            chart_entries += static_cast<int>((c->title ? 1 : 0) + c->axis_labels.size() + c->legends.size() +
                                              c->data_markers.size());
        } else if (const PdfPage* p = std::get_if<PdfPage>(&item)) {
            ++kinds["pdf_page"];
            pdf_blocks += static_cast<int>(p->blocks.size());
        } else if (const ParsingRecord* r = std::get_if<ParsingRecord>(&item)) {
            ++kinds["parsing_record"];
            ++granularities[record_granularity_name(r->granularity)];
        } else if (const Sample* s = std::get_if<Sample>(&item)) {
            ++kinds["sample"];
            ++tasks[task_name(s->task)];
            ++doc_types[doc_type_name(s->doc_type)];
        } else {
            ++kinds["block"];
        }
    }
    ojson j;
    j["items"] = corpus.items.size();
    j["kinds"] = kinds;
    if (!tasks.empty()) j["samples_by_task"] = tasks;
    if (!doc_types.empty()) j["samples_by_doc_type"] = doc_types;
    if (!granularities.empty()) j["records_by_granularity"] = granularities;
    if (poster_entries) j["poster_entries"] = poster_entries;
    if (chart_entries) j["chart_entries"] = chart_entries;
    if (pdf_blocks) j["pdf_blocks"] = pdf_blocks;

    std::ostringstream os;
    os << "items: " << corpus.items.size() << "\n";
    for (const auto& [k, n] : kinds) os << "  " << k << ": " << n << "\n";
    if (!tasks.empty()) {
        os << "samples by task:\n";
        for (const auto& [k, n] : tasks) os << "  " << k << ": " << n << "\n";
    }
    if (!granularities.empty()) {
        os << "records by granularity:\n";
        for (const auto& [k, n] : granularities) os << "  " << k << ": " << n << "\n";
    }
    if (!out_json.empty()) {
        write_text(out_json, j.dump(2) + "\n");
        RunManifest m;
        m.command = "report";
        m.inputs = {{"corpus", corpus_jsonl}};
        m.outputs = {out_json};
        m.write_beside(out_json);
    }
    return os.str();
}

} // namespace docground::pipeline
