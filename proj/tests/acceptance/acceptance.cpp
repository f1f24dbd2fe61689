// Acceptance gate. Each check prints exactly one PASS or FAIL line; the
// process exits nonzero if any check fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "core/annotate.hpp"
#include "core/dataset.hpp"
#include "core/eval.hpp"
#include "core/geometry.hpp"
#include "core/layout.hpp"
#include "core/markup.hpp"
#include "core/raster.hpp"
#include "core/taxonomy.hpp"
#include "core/pipeline.hpp"
#include "core/verify.hpp"
#include "support/oracles.hpp"
#include "support/tempdir.hpp"

using namespace docground;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

QuantBox random_qbox(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> corner(0, 899), side(1, 99);
    int x = corner(rng), y = corner(rng);
    return {x, y, x + side(rng), y + side(rng)};
}

std::string random_words(std::mt19937_64& rng, int max_words = 4) {
    static const char* kWords[] = {"total", "revenue", "rose", "in", "q3", "margin",
                                   "axis",  "value",   "12",  "7%", "flat"};
    std::uniform_int_distribution<int> n(1, max_words), pick(0, 10);
    std::string out;
    for (int i = 0, k = n(rng); i < k; ++i) {
        if (!out.empty()) out += ' ';
        out += kWords[pick(rng)];
    }
    return out;
}

// A full bench worth of samples where the predictions are the ground-truth
// answers themselves: every accuracy must be exactly 100%, every f1 exactly
// 1, every bleu exactly 1.
std::string bench_self_evaluation() {
    std::mt19937_64 rng(20260816);
    std::vector<Sample> gt;
    std::vector<Prediction> preds;

    auto add = [&](TaskKind task, AnswerClass cls, bool grounded_q, int n) -> std::string {
        if (task_for(grounded_q, cls) != task) return "bench construction is inconsistent";
        for (int i = 0; i < n; ++i) {
            Sample s;
            s.id = std::string(task_name(task)) + "-" + std::to_string(i);
            s.doc_type = std::vector<DocType>{DocType::Poster, DocType::Chart, DocType::Pdf}[i % 3];
            s.answer_class = cls;
            s.task = task;
            s.question = grounded_q
                             ? "Regarding <ocr>panel " + std::to_string(i) + "</ocr>" +
                                   serialize_box(random_qbox(rng)) + ", what does the page report?"
                             : "What does the page report for item " + std::to_string(i) + "?";
            switch (cls) {
                case AnswerClass::GA:
                    s.answer = "It reports <ocr>metric " + std::to_string(i) + "</ocr>" +
                               serialize_box(random_qbox(rng));
                    if (i % 2 == 0)
                        s.answer += " next to <ocr>aux " + std::to_string(i) + "</ocr>" +
                                    serialize_box(random_qbox(rng));
                    s.answer += ".";
                    break;
                case AnswerClass::GR:
                    s.answer = "First inspect <ocr>row " + std::to_string(i) + "</ocr>" +
                               serialize_box(random_qbox(rng)) + " then conclude. Answer: value " +
                               std::to_string(i);
                    break;
                case AnswerClass::GO:
                    s.answer = "The trend around <ocr>series " + std::to_string(i) + "</ocr>" +
                               serialize_box(random_qbox(rng)) +
                               " keeps rising steadily through the final quarter of the year.";
                    break;
                case AnswerClass::PA:
                    s.answer = "value " + std::to_string(i);
                    break;
            }
            preds.push_back({s.id, s.answer});
            gt.push_back(std::move(s));
        }
        return "";
    };

    struct Row {
        TaskKind task;
        AnswerClass cls;
        bool grounded_q;
        int n;
    };
    const Row rows[] = {
        {TaskKind::Ga, AnswerClass::GA, false, 600},  {TaskKind::Gr, AnswerClass::GR, false, 600},
        {TaskKind::Go, AnswerClass::GO, false, 600},  {TaskKind::Rt, AnswerClass::PA, true, 600},
        {TaskKind::GRa, AnswerClass::GA, true, 400},  {TaskKind::GRr, AnswerClass::GR, true, 400},
        {TaskKind::GRo, AnswerClass::GO, true, 400},
    };
    for (const Row& r : rows) {
        std::string err = add(r.task, r.cls, r.grounded_q, r.n);
        if (!err.empty()) return err;
    }
    if (gt.size() != 3600) return "bench size is " + std::to_string(gt.size()) + ", want 3600";

    auto t0 = Clock::now();
    EvalReport report = evaluate(gt, preds, {.iou_threshold = 0.5, .sweep = {}});
    double dt = seconds_since(t0);

    if (report.samples != 3600) return "scored " + std::to_string(report.samples) + " samples";
    if (report.missing_predictions != 0 || report.unparseable_predictions != 0 ||
        !report.unknown_prediction_ids.empty())
        return "self-evaluation flagged predictions as missing, unparseable, or unknown";

    auto check_task = [&](const std::string& name, TaskKind task, int n) -> std::string {
        auto it = report.by_task.find(name);
        if (it == report.by_task.end()) return "no report row for " + name;
        const TaskReport& tr = it->second;
        if (tr.n != n) return name + " scored n=" + std::to_string(tr.n) + ", want " + std::to_string(n);
        if (task_scores_accuracy(task) && (!tr.accuracy() || *tr.accuracy() != 1.0))
            return name + " accuracy is not exactly 100%";
        if (task_scores_bleu(task) && (!tr.bleu() || *tr.bleu() != 1.0))
            return name + " bleu4 is not exactly 1";
        if (task_scores_f1(task)) {
            auto f1 = tr.f1();
            if (!f1 || f1->precision != 1.0 || f1->recall != 1.0 || f1->f1 != 1.0)
                return name + " f1_all is not exactly 1";
        }
        return "";
    };
    for (const Row& r : rows) {
        std::string err = check_task(task_name(r.task), r.task, r.n);
        if (!err.empty()) return err;
    }
    const TaskReport& all = report.by_task.at("ALL");
    if (all.n != 3600 || !all.accuracy() || *all.accuracy() != 1.0) return "ALL accuracy is not exactly 100%";
    if (!all.bleu() || *all.bleu() != 1.0) return "ALL bleu4 is not exactly 1";
    auto f1 = all.f1();
    if (!f1 || f1->f1 != 1.0) return "ALL f1_all is not exactly 1";

    if (dt >= 5.0) return "scoring took " + std::to_string(dt) + "s, budget is 5s";
    return "";
}

// Span scoring against brute force: every instance small enough to match
// exhaustively must agree exactly, including duplicate texts and IoUs that
// sit right at the threshold.
std::string f1_matches_exhaustive_matching() {
    std::mt19937_64 rng(4242);
    std::uniform_int_distribution<int> count(0, 6), cell(0, 7), pick(0, 2);
    std::uniform_real_distribution<double> jitter(-0.03, 0.03);
    const char* texts[] = {"alpha", "beta", "alpha beta"};
    const double thresholds[] = {0.1, 0.5, 0.9};

    auto t0 = Clock::now();
    for (int i = 0; i < 1000; ++i) {
        auto make = [&](int n) {
            std::vector<Span> s;
            for (int k = 0; k < n; ++k) {
                double x = cell(rng) * 0.12 + jitter(rng);
                double y = cell(rng) * 0.12 + jitter(rng);
                s.push_back({texts[pick(rng)], {x, y, x + 0.1, y + 0.1}});
            }
            return s;
        };
        std::vector<Span> pred = make(count(rng));
        std::vector<Span> gt = make(count(rng));
        double thr = thresholds[i % 3];

        MatchCounts mc = match_spans(pred, gt, thr);
        int oracle = testsupport::exhaustive_match_count(pred, gt, thr);
        if (mc.tp != oracle)
            return "instance " + std::to_string(i) + ": matcher found " + std::to_string(mc.tp) +
                   " pairs, exhaustive search found " + std::to_string(oracle);

        F1Scores got = f1_all(pred, gt, thr);
        F1Scores want = f1_from_counts({oracle, static_cast<int>(pred.size()), static_cast<int>(gt.size())});
        if (got.precision != want.precision || got.recall != want.recall || got.f1 != want.f1)
            return "instance " + std::to_string(i) + ": f1 disagrees with the oracle counts";
    }
    double dt = seconds_since(t0);
    if (dt >= 10.0) return "matching took " + std::to_string(dt) + "s, budget is 10s";
    return "";
}

// Raising the IoU threshold can only lose matches, so precision, recall, and
// f1 must all be nonincreasing along a sweep.
std::string sweeps_are_nonincreasing() {
    std::mt19937_64 rng(777);
    std::uniform_int_distribution<int> xy(0, 700), dx(0, 120), dy(0, 40), nsamp(4, 12);
    const std::vector<double> thresholds = {0.1, 0.3, 0.5, 0.7, 0.9};

    for (int c = 0; c < 200; ++c) {
        std::vector<Sample> gt;
        std::vector<Prediction> preds;
        int n = nsamp(rng);
        for (int i = 0; i < n; ++i) {
            int x = xy(rng), y = xy(rng);
            QuantBox truth{x, y, x + 150, y + 60};
            int ox = dx(rng), oy = dy(rng);
            QuantBox guess{x + ox, y + oy, x + 150 + ox, y + 60 + oy};
            Sample s;
            s.id = "s" + std::to_string(i);
            s.doc_type = DocType::Poster;
            s.question = "Where is item " + std::to_string(i) + "?";
            s.answer = "<ocr>item " + std::to_string(i) + "</ocr>" + serialize_box(truth);
            s.answer_class = AnswerClass::GA;
            s.task = TaskKind::Ga;
            preds.push_back({s.id, "<ocr>item " + std::to_string(i) + "</ocr>" + serialize_box(guess)});
            gt.push_back(std::move(s));
        }
        std::vector<SweepPoint> pts = threshold_sweep(gt, preds, thresholds);
        if (pts.size() != thresholds.size()) return "sweep returned the wrong number of points";
        for (std::size_t k = 1; k < pts.size(); ++k) {
            if (pts[k].scores.precision > pts[k - 1].scores.precision ||
                pts[k].scores.recall > pts[k - 1].scores.recall ||
                pts[k].scores.f1 > pts[k - 1].scores.f1)
                return "corpus " + std::to_string(c) + ": scores increased between iou " +
                       std::to_string(pts[k - 1].threshold) + " and " + std::to_string(pts[k].threshold);
        }
    }
    return "";
}

// Re-render extraction at zero tolerance must reproduce each layer's ink
// extent bit for bit on non-overlapping scenes, and report a fully covered
// layer as invisible.
std::string extraction_recovers_exact_extents() {
    auto t0 = Clock::now();
    for (int i = 0; i < 200; ++i) {
        Scene s = random_scene(1000 + i, 200, 150, 6);
        std::vector<LayerBox> got = extract_layer_boxes(s, 0, ToggleMode::Opacity);
        if (got.size() != s.layers.size()) return "scene " + std::to_string(i) + ": layer count mismatch";
        for (std::size_t k = 0; k < s.layers.size(); ++k) {
            std::optional<PixelBox> ink = layer_ink_extent(s, k);
            if (ink.has_value() != got[k].box.has_value())
                return "scene " + std::to_string(i) + " layer " + s.layers[k].id +
                       ": visibility disagrees with the ink extent";
            if (ink && *got[k].box != normalize_pixel_box(*ink, s.width, s.height))
                return "scene " + std::to_string(i) + " layer " + s.layers[k].id +
                       ": extracted box differs from the constructed extent";
        }
    }

    Scene occluded;
    occluded.width = 80;
    occluded.height = 60;
    Layer under;
    under.id = "under";
    under.x = 10;
    under.y = 10;
    under.w = 20;
    under.h = 10;
    under.fill = {200, 30, 30, 255};
    Layer cover = under;
    cover.id = "cover";
    cover.x = 5;
    cover.y = 5;
    cover.w = 40;
    cover.h = 30;
    cover.fill = {30, 30, 200, 255};
    occluded.layers = {under, cover};
    std::vector<LayerBox> got = extract_layer_boxes(occluded, 0, ToggleMode::Opacity);
    if (got[0].box.has_value()) return "fully covered layer was not reported as invisible";
    std::optional<PixelBox> cover_ink = layer_ink_extent(occluded, 1);
    if (!got[1].box || !cover_ink || *got[1].box != normalize_pixel_box(*cover_ink, 80, 60))
        return "covering layer box was not recovered";

    testsupport::TempDir dir;
    std::string scene_path = dir.file("occluded.json");
    testsupport::write_file(scene_path, scene_to_json(occluded).dump());
    std::string payload = pipeline::extract_boxes_file(scene_path, 0, "opacity", "");
    if (payload.find("\"InvisibleLayer\"") == std::string::npos)
        return "occluded layer did not surface an InvisibleLayer error in the extraction payload";

    double dt = seconds_since(t0);
    if (dt >= 30.0) return "extraction took " + std::to_string(dt) + "s, budget is 30s";
    return "";
}

// The documented merge order on the reference page, then stability over
// random grid-aligned pages: nothing lost, nothing duplicated, same output
// on every run, and a second merge leaves the order alone.
std::string merge_order_is_frozen_and_stable() {
    auto blk = [](std::string id, std::string text, BBox box, BlockSource src) {
        Block b;
        b.id = std::move(id);
        b.text = std::move(text);
        b.bbox = box;
        b.source = src;
        return b;
    };
    auto ids_of = [](const std::vector<Block>& blocks) {
        std::vector<std::string> out;
        for (const Block& b : blocks) out.push_back(b.id);
        return out;
    };

    const std::vector<Block> ordered = {
        blk("O1", "Annual Report 2023", {0.10, 0.05, 0.90, 0.12}, BlockSource::Ordered),
        blk("O2", "Revenue grew in the first", {0.10, 0.20, 0.48, 0.30}, BlockSource::Ordered),
        blk("O3", "quarter of the year", {0.10, 0.31, 0.48, 0.40}, BlockSource::Ordered),
        blk("O4", "Costs stayed flat across divisions", {0.10, 0.55, 0.48, 0.66}, BlockSource::Ordered),
        blk("O5", "Margin summary table", {0.05, 0.75, 0.48, 0.85}, BlockSource::Ordered),
        blk("O6", "Totals audited in January", {0.10, 0.86, 0.48, 0.92}, BlockSource::Ordered),
    };
    const std::vector<Block> unordered = {
        blk("U1", "Revenue grew in the first quarter of the year", {0.10, 0.20, 0.48, 0.42},
            BlockSource::Unordered),
        blk("U2", "Annual Report 2023", {0.10, 0.05, 0.90, 0.12}, BlockSource::Unordered),
        blk("U3", "Figure 1 sales by region", {0.55, 0.22, 0.88, 0.50}, BlockSource::Unordered),
        blk("U4", "Footnote: preliminary figures", {0.55, 0.93, 0.90, 0.97}, BlockSource::Unordered),
    };
    const std::vector<std::string> want = {"O1", "U1", "U3", "O4", "O5", "O6", "U4"};
    if (ids_of(merge(ordered, unordered)) != want) return "reference page order changed";

    std::mt19937_64 rng(314);
    std::uniform_int_distribution<int> grid(0, 48), span(1, 8), count(0, 12);
    auto random_blocks = [&](const std::string& prefix, BlockSource src, int n) {
        std::vector<Block> out;
        for (int i = 0; i < n; ++i) {
            int gx = grid(rng), gy = grid(rng);
            int w = span(rng), h = span(rng);
            BBox box{gx * 0.02, gy * 0.02, std::min(1.0, (gx + w) * 0.02), std::min(1.0, (gy + h) * 0.02)};
            // Equal-length dissimilar texts: no accidental dedupe or
            // substring replacement, so every id must survive the merge.
            char buf[24];
            std::snprintf(buf, sizeof buf, "%s%s%s%s%03d", prefix.c_str(), prefix.c_str(), prefix.c_str(),
                          prefix.c_str(), i);
            out.push_back(blk(prefix + std::to_string(i), buf, box, src));
        }
        return out;
    };

    for (int page = 0; page < 500; ++page) {
        std::vector<Block> o = random_blocks("o", BlockSource::Ordered, count(rng));
        std::vector<Block> u = random_blocks("u", BlockSource::Unordered, count(rng));

        std::vector<Block> m1 = merge(o, u);
        std::vector<Block> m2 = merge(o, u);
        if (ids_of(m1) != ids_of(m2)) return "page " + std::to_string(page) + ": merge is not deterministic";

        std::multiset<std::string> want_ids, got_ids;
        for (const Block& b : o) want_ids.insert(b.id);
        for (const Block& b : u) want_ids.insert(b.id);
        for (const Block& b : m1) got_ids.insert(b.id);
        if (want_ids != got_ids) return "page " + std::to_string(page) + ": merge lost or duplicated blocks";

        if (ids_of(merge(m1, {})) != ids_of(m1))
            return "page " + std::to_string(page) + ": re-merging the output changed the order";
    }
    return "";
}

// Ten thousand well-formed documents survive parse/serialize unchanged; ten
// thousand single-mutation documents each report the injected defect at its
// exact byte offset, with no crashes along the way.
std::string fuzzed_markup_is_stable() {
    std::mt19937_64 rng(606);

    for (int i = 0; i < 10000; ++i) {
        std::string doc;
        std::uniform_int_distribution<int> segs(1, 6), coin(0, 3);
        int n = segs(rng);
        for (int k = 0; k < n; ++k) {
            if (coin(rng) == 0) {
                doc += "<ocr>" + (coin(rng) == 0 ? std::string() : random_words(rng)) + "</ocr>" +
                       serialize_box(random_qbox(rng));
            } else {
                std::string words = random_words(rng);
                if (!doc.empty()) doc += ' ';
                doc += words;
            }
        }
        ParseResult r = parse(doc);
        if (!r.ok()) return "valid document reported a defect: " + doc;
        if (serialize(r.doc) != doc) return "round trip changed the document: " + doc;
    }

    auto has_defect = [](const ParseResult& r, DefectKind kind, std::size_t position) {
        for (const FormatDefect& d : r.defects)
            if (d.kind == kind && d.position == position) return true;
        return false;
    };

    for (int i = 0; i < 10000; ++i) {
        std::string prefix = random_words(rng);
        prefix += ' ';
        if (rng() & 1)
            prefix += "<ocr>" + random_words(rng) + "</ocr>" + serialize_box(random_qbox(rng)) + " ";
        DefectKind kind = static_cast<DefectKind>(i % 7);

        std::string text;
        std::size_t position = 0;
        bool strict = false;
        std::string word = random_words(rng, 2);
        switch (kind) {
            case DefectKind::UnclosedTag:
                text = prefix + "<ocr>" + word;
                position = prefix.size();
                break;
            case DefectKind::BadArity: {
                std::string span = "<ocr>" + word + "</ocr>";
                text = prefix + span + ((rng() & 1) ? "<bbox>1,2,3</bbox>" : "<bbox>1,2,3,4,5</bbox>");
                position = prefix.size() + span.size();
                break;
            }
            case DefectKind::NonNumeric: {
                std::string span = "<ocr>" + word + "</ocr>";
                std::string coords = "10,20,zz,40";
                text = prefix + span + "<bbox>" + coords + "</bbox>";
                position = prefix.size() + span.size() + 6 + coords.find("zz");
                break;
            }
            case DefectKind::OutOfRange: {
                std::string span = "<ocr>" + word + "</ocr>";
                std::string big = std::to_string(1000 + static_cast<int>(rng() % 9000));
                std::string coords = "3,7," + big + ",9";
                text = prefix + span + "<bbox>" + coords + "</bbox>";
                position = prefix.size() + span.size() + 6 + coords.find(big);
                break;
            }
            case DefectKind::OrphanBBox:
                prefix = random_words(rng) + " "; // plain prefix only
                text = prefix + "<bbox>1,2,3,4</bbox> " + random_words(rng);
                position = prefix.size();
                break;
            case DefectKind::NullBBox:
                strict = true;
                text = prefix + "<ocr>" + word + "</ocr> " + random_words(rng);
                position = prefix.size();
                break;
            case DefectKind::NestedTag:
                text = prefix + "<ocr>" + word + "<ocr>" + random_words(rng, 1) + "</ocr></ocr>" +
                       serialize_box(random_qbox(rng));
                position = prefix.size() + 5 + word.size();
                break;
        }

        ParseResult r = parse(text, {.strict_boxes = strict});
        if (r.ok()) return "mutated document parsed clean: " + text;
        if (!has_defect(r, kind, position))
            return std::string("missing ") + defect_kind_name(kind) + " at byte " +
                   std::to_string(position) + " in: " + text;
    }
    return "";
}

// One sample per defect kind, format and content alike: the checker must
// reject every one of them and name the right defect.
std::string injected_defects_are_labeled() {
    PosterPage page;
    page.id = "P1";
    page.image = "p.png";
    page.entries = {{"Total Revenue", {100, 100, 400, 150}}, {"Net income rose", {100, 300, 500, 360}}};
    TextIndex index = TextIndex::build(page);

    Verdict control = validate_sample("Plain question?", "<ocr>Total Revenue</ocr><bbox>100,100,400,150</bbox>",
                                      DocType::Poster, &index);
    if (!control.accepted()) return "clean control sample was rejected: " + control.describe();

    struct Case {
        const char* question;
        const char* answer;
        const char* label;
        bool content;
    };
    const Case cases[] = {
        {"<ocr>broken", "fine", "UnclosedTag", false},
        {"ok?", "<ocr>x</ocr><bbox>1,2,3</bbox>", "BadArity", false},
        {"ok?", "<ocr>x</ocr><bbox>1,2,x,4</bbox>", "NonNumeric", false},
        {"ok?", "<ocr>x</ocr><bbox>0,0,1000,5</bbox>", "OutOfRange", false},
        {"ok?", "see <bbox>1,2,3,4</bbox>", "OrphanBBox", false},
        {"ok?", "<ocr>x</ocr><bbox>null</bbox>", "NullBBox", false},
        {"ok?", "<ocr>a <ocr>b</ocr></ocr>", "NestedTag", false},
        {"ok?", "<ocr>Phantom Text</ocr><bbox>100,100,400,150</bbox>", "NotInAnnotations", true},
        {"ok?", "<ocr>Total Revenue</ocr><bbox>10,10,20,20</bbox>", "BoxMismatch", true},
    };
    for (const Case& c : cases) {
        Verdict v = validate_sample(c.question, c.answer, DocType::Poster, &index);
        if (v.accepted()) return std::string(c.label) + " sample was accepted";
        std::string got;
        if (c.content) {
            if (v.content_errors.empty()) return std::string(c.label) + " sample rejected without a content error";
            got = content_error_kind_name(v.content_errors[0].kind);
        } else {
            if (v.defects.empty()) return std::string(c.label) + " sample rejected without a format defect";
            got = defect_kind_name(v.defects[0].defect.kind);
        }
        if (got != c.label) return "expected " + std::string(c.label) + ", got " + got;
    }
    return "";
}

// Grounding generated text: every inserted box exists in the page index,
// the visible text never changes, and a span text that repeats binds to two
// different page occurrences.
std::string post_annotation_is_sound() {
    std::mt19937_64 rng(88);
    static const char* kWords[] = {"total", "net", "revenue", "cost", "margin", "units", "growth", "sales"};

    for (int page_i = 0; page_i < 500; ++page_i) {
        PosterPage page;
        page.id = "p" + std::to_string(page_i);
        page.image = page.id + ".png";
        int n = 3 + static_cast<int>(rng() % 6);
        std::vector<std::string> texts;
        for (int e = 0; e < n; ++e) {
            std::string t;
            if (e == 1) {
                t = texts[0]; // same text at a different box
            } else {
                t = std::string(kWords[rng() % 8]) + " " + kWords[rng() % 8] + " " + std::to_string(e) +
                    std::to_string(page_i % 10);
            }
            texts.push_back(t);
            int y1 = e * 110 + 5;
            page.entries.push_back({t, {30, y1, 230 + e * 7, y1 + 80}});
        }
        TextIndex index = TextIndex::build(page);

        bool with_missing = page_i % 3 == 0;
        std::string generated = "The page shows <ocr>" + texts[0] + "</ocr> beside <ocr>" + texts[0] +
                                "</ocr> and <ocr>" + texts[2] + "</ocr>.";
        std::string visible =
            "The page shows " + texts[0] + " beside " + texts[0] + " and " + texts[2] + ".";
        if (with_missing) {
            generated += " Also <ocr>zz absent zz</ocr> appears nowhere.";
            visible += " Also zz absent zz appears nowhere.";
        }

        OccurrenceSet used;
        GroundingResult res = locate_and_ground(generated, index, used);
        if (!res.ok()) return "page " + std::to_string(page_i) + ": generated text failed to parse";
        if (res.outcome.located != 3)
            return "page " + std::to_string(page_i) + ": located " + std::to_string(res.outcome.located) +
                   " spans, want 3";
        if (res.outcome.degraded != (with_missing ? 1 : 0))
            return "page " + std::to_string(page_i) + ": unexpected degraded count";
        if (strip_grounding(res.outcome.doc) != visible)
            return "page " + std::to_string(page_i) + ": visible text changed";

        std::vector<QuantBox> boxes;
        for (const Segment& seg : res.outcome.doc.segments) {
            if (seg.kind != SegmentKind::Grounded) continue;
            if (seg.boxes.size() != 1)
                return "page " + std::to_string(page_i) + ": grounded span without exactly one box";
            if (!index.contains_box(dequantize(seg.boxes[0])))
                return "page " + std::to_string(page_i) + ": inserted box is not in the page index";
            boxes.push_back(seg.boxes[0]);
        }
        if (boxes.size() != 3) return "page " + std::to_string(page_i) + ": wrong grounded span count";
        if (boxes[0] == boxes[1])
            return "page " + std::to_string(page_i) + ": repeated span text reused the same occurrence";
        auto is_entry = [&](const QuantBox& b, int e) { return b == page.entries[e].box; };
        if (!((is_entry(boxes[0], 0) && is_entry(boxes[1], 1)) ||
              (is_entry(boxes[0], 1) && is_entry(boxes[1], 0))) ||
            !is_entry(boxes[2], 2))
            return "page " + std::to_string(page_i) + ": boxes do not match the page entries";
    }
    return "";
}

// BLEU identity and reference agreement, plus the fixed exact-match table.
std::string text_metrics_match_references() {
    if (bleu4("the cat sat on the mat", {"the cat sat on the mat"}) != 1.0)
        return "bleu4 of a string against itself is not exactly 1";

    std::mt19937_64 rng(909);
    static const char* kWords[] = {"the", "cat", "sat", "mat", "on", "a",
                                   "dog", "ran", "far", "blue", "red", "sky"};
    std::uniform_int_distribution<int> len(1, 30), pick(0, 11), nref(1, 3);
    auto sentence = [&] {
        std::string out;
        for (int i = 0, k = len(rng); i < k; ++i) {
            if (!out.empty()) out += ' ';
            out += kWords[pick(rng)];
        }
        return out;
    };
    for (int i = 0; i < 100; ++i) {
        std::string cand = sentence();
        std::vector<std::string> refs;
        for (int k = 0, m = nref(rng); k < m; ++k) refs.push_back(sentence());
        double got = bleu4(cand, refs);
        double want = testsupport::reference_bleu4(cand, refs);
        if (std::abs(got - want) > 1e-9)
            return "pair " + std::to_string(i) + ": bleu4 " + std::to_string(got) +
                   " differs from the reference " + std::to_string(want);
    }

    struct Row {
        const char* a;
        const char* b;
        bool want;
    };
    const Row rows[] = {
        {"Paris", "paris", true},     {"Paris.", "Paris", true}, {"  Paris ", "Paris", true},
        {"Paris, France", "Paris", false}, {"12.5%", "12.5", true},  {"12.5", "12,5", false},
        {"two  words", "two words", true}, {"", "", true},           {"", "x", false},
        {"(42)", "42", true},
    };
    for (const Row& r : rows) {
        if (exact_match(r.a, r.b) != r.want)
            return std::string("exact_match(\"") + r.a + "\", \"" + r.b + "\") gave the wrong verdict";
    }
    return "";
}

struct Criterion {
    const char* name;
    std::string (*fn)();
};

} // namespace

int main() {
    const Criterion criteria[] = {
        {"self-evaluation on the 3600-sample bench is perfect and fast", bench_self_evaluation},
        {"span f1 agrees exactly with exhaustive matching", f1_matches_exhaustive_matching},
        {"iou sweeps are nonincreasing", sweeps_are_nonincreasing},
        {"re-render extraction recovers exact extents and flags occlusion", extraction_recovers_exact_extents},
        {"merge order is frozen and stable on random pages", merge_order_is_frozen_and_stable},
        {"fuzzed markup round-trips and defects carry exact offsets", fuzzed_markup_is_stable},
        {"every injected defect kind is rejected with the right label", injected_defects_are_labeled},
        {"post-annotation grounds text without altering it", post_annotation_is_sound},
        {"text metrics match their reference implementations", text_metrics_match_references},
    };

    int failures = 0;
    for (const Criterion& c : criteria) {
        auto t0 = Clock::now();
        std::string err;
        try {
            err = c.fn();
        } catch (const std::exception& e) {
            err = std::string("unexpected exception: ") + e.what();
        } catch (...) {
            err = "unexpected non-standard exception";
        }
        if (err.empty()) {
            std::printf("PASS: %s (%.2fs)\n", c.name, seconds_since(t0));
        } else {
            std::printf("FAIL: %s: %s\n", c.name, err.c_str());
            ++failures;
        }
    }
    return failures == 0 ? 0 : 1;
}
