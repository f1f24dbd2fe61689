#include "core/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "core/error.hpp"
#include "core/markup.hpp"
#include "core/textnorm.hpp"

namespace docground {

namespace {

// Kuhn's augmenting-path matching; sides are tiny (answer spans).
struct Matcher {
    const std::vector<std::vector<int>>& adj;
    std::vector<int> match_gt;
    std::vector<char> seen;

    Matcher(const std::vector<std::vector<int>>& adj_, std::size_t gt_n) : adj(adj_), match_gt(gt_n, -1) {}

    bool augment(int p) {
        for (int g : adj[p]) {
            if (seen[g]) continue;
            seen[g] = 1;
            if (match_gt[g] < 0 || augment(match_gt[g])) {
                match_gt[g] = p;
                return true;
            }
        }
        return false;
    }

    int run() {
        int matched = 0;
        for (std::size_t p = 0; p < adj.size(); ++p) {
            seen.assign(match_gt.size(), 0);
            if (augment(static_cast<int>(p))) ++matched;
        }
        return matched;
    }
};

} // namespace

MatchCounts match_spans(const std::vector<Span>& pred, const std::vector<Span>& gt, double iou_threshold) {
    MatchCounts c;
    c.pred = static_cast<int>(pred.size());
    c.gt = static_cast<int>(gt.size());
    if (pred.empty() || gt.empty()) return c;

    std::vector<std::string> pn(pred.size()), gn(gt.size());
    for (std::size_t i = 0; i < pred.size(); ++i) pn[i] = normalize_text(pred[i].text);
    for (std::size_t j = 0; j < gt.size(); ++j) gn[j] = normalize_text(gt[j].text);

    std::vector<std::vector<int>> adj(pred.size());
    for (std::size_t i = 0; i < pred.size(); ++i) {
        for (std::size_t j = 0; j < gt.size(); ++j) {
            if (pn[i] == gn[j] && iou(pred[i].box, gt[j].box) > iou_threshold) {
                adj[i].push_back(static_cast<int>(j));
            }
        }
    }
    c.tp = Matcher(adj, gt.size()).run();
    return c;
}

F1Scores f1_from_counts(const MatchCounts& c) {
    F1Scores s;
    s.precision = c.pred == 0 ? 1.0 : static_cast<double>(c.tp) / c.pred;
    s.recall = c.gt == 0 ? 1.0 : static_cast<double>(c.tp) / c.gt;
    s.f1 = (s.precision + s.recall) > 0.0 ? 2.0 * s.precision * s.recall / (s.precision + s.recall) : 0.0;
    return s;
}

F1Scores f1_all(const std::vector<Span>& pred, const std::vector<Span>& gt, double iou_threshold) {
    return f1_from_counts(match_spans(pred, gt, iou_threshold));
}

bool exact_match(std::string_view a, std::string_view b) {
    return normalize_text(a) == normalize_text(b);
}

ExtractedAnswer extract_final_answer(std::string_view stripped) {
    static constexpr std::string_view kMarker = "Answer:";
    std::size_t pos = stripped.rfind(kMarker);
    ExtractedAnswer out;
    if (pos == std::string_view::npos) {
        out.answer = std::string(stripped);
        out.no_marker = true;
        return out;
    }
    out.answer = std::string(stripped.substr(pos + kMarker.size()));
    return out;
}

namespace {

std::vector<std::string> tokenize(std::string_view s) {
    std::vector<std::string> toks;
    std::string norm = normalize_text(s);
    std::size_t i = 0;
    while (i < norm.size()) {
        std::size_t j = norm.find(' ', i);
        if (j == std::string::npos) j = norm.size();
        if (j > i) toks.push_back(norm.substr(i, j - i));
        i = j + 1;
    }
    return toks;
}

using GramCounts = std::unordered_map<std::string, int>;

GramCounts ngram_counts(const std::vector<std::string>& toks, std::size_t n) {
    GramCounts counts;
    if (toks.size() < n) return counts;
    for (std::size_t i = 0; i + n <= toks.size(); ++i) {
        std::string key;
        for (std::size_t k = 0; k < n; ++k) {
            if (k > 0) key += '\x1f';
            key += toks[i + k];
        }
        ++counts[key];
    }
    return counts;
}

} // namespace

double bleu4(std::string_view candidate, const std::vector<std::string>& references) {
    std::vector<std::string> cand = tokenize(candidate);
    if (cand.empty() || references.empty()) return 0.0;

    std::vector<std::vector<std::string>> refs;
    refs.reserve(references.size());
    for (const std::string& r : references) refs.push_back(tokenize(r));

    // Closest reference length; ties go to the shorter one.
    std::size_t c_len = cand.size();
    std::size_t r_len = refs[0].size();
    for (const auto& r : refs) {
        auto d = [&](std::size_t L) { return L > c_len ? L - c_len : c_len - L; };
        if (d(r.size()) < d(r_len) || (d(r.size()) == d(r_len) && r.size() < r_len)) r_len = r.size();
    }

    double log_sum = 0.0;
    int orders = 0;
    for (std::size_t n = 1; n <= 4; ++n) {
        GramCounts cc = ngram_counts(cand, n);
        if (cc.empty()) continue;
        GramCounts max_ref;
        for (const auto& r : refs) {
            for (const auto& [gram, cnt] : ngram_counts(r, n)) {
                auto it = max_ref.find(gram);
                if (it == max_ref.end() || it->second < cnt) max_ref[gram] = cnt;
            }
        }
        long long total = 0, clipped = 0;
        for (const auto& [gram, cnt] : cc) {
            total += cnt;
            auto it = max_ref.find(gram);
            if (it != max_ref.end()) clipped += std::min(cnt, it->second);
        }
        double p = clipped > 0 ? static_cast<double>(clipped) / static_cast<double>(total)
                               : 1.0 / static_cast<double>(total + 1);
        log_sum += std::log(p);
        ++orders;
    }
    if (orders == 0) return 0.0;
    double geo = std::exp(log_sum / orders);
    double bp = c_len < r_len ? std::exp(1.0 - static_cast<double>(r_len) / static_cast<double>(c_len)) : 1.0;
    return bp * geo;
}

namespace {

std::vector<Span> spans_of(const GroundedText& doc) {
    std::vector<Span> out;
    for (auto& [text, box] : extract_spans(doc)) out.push_back({text, box});
    return out;
}

struct Scored {
    TaskKind task;
    DocType doc_type;
    std::vector<Span> pred_spans;
    std::vector<Span> gt_spans;
};

} // namespace

EvalReport evaluate(const std::vector<Sample>& gt, const std::vector<Prediction>& preds, const EvalConfig& cfg) {
    EvalReport rep;
    rep.config = cfg;
    rep.samples = static_cast<int>(gt.size());

    std::unordered_map<std::string, const Prediction*> by_id;
    for (const Prediction& p : preds) {
        if (!by_id.emplace(p.id, &p).second) {
            throw SchemaError(0, "predictions", "duplicate prediction id '" + p.id + "'");
        }
    }

    std::set<std::string> gt_ids;
    for (const Sample& s : gt) gt_ids.insert(s.id);
    for (const Prediction& p : preds) {
        if (!gt_ids.count(p.id)) rep.unknown_prediction_ids.push_back(p.id);
    }
    std::sort(rep.unknown_prediction_ids.begin(), rep.unknown_prediction_ids.end());

    std::vector<Scored> scored;
    scored.reserve(gt.size());

    for (const Sample& s : gt) {
        auto it = by_id.find(s.id);
        std::string output;
        if (it == by_id.end()) {
            ++rep.missing_predictions;
        } else {
            output = it->second->output;
        }

        ParseResult pp = parse(output);
        ParseResult gp = parse(s.answer);
        if (!gp.ok()) throw SchemaError(0, "samples", "ground-truth answer does not parse for id '" + s.id + "'");
        bool parsed = pp.ok();
        if (!parsed) ++rep.unparseable_predictions;

        std::string pred_visible = parsed ? strip_grounding(pp.doc) : output;
        std::string gt_visible = strip_grounding(gp.doc);

        Scored sc;
        sc.task = s.task;
        sc.doc_type = s.doc_type;
        if (parsed) sc.pred_spans = spans_of(pp.doc);
        sc.gt_spans = spans_of(gp.doc);

        TaskReport& tr = rep.by_task[task_name(s.task)];
        TaskReport& dr = rep.by_doc_type[doc_type_name(s.doc_type)];
        TaskReport& ar = rep.by_task["ALL"];
        for (TaskReport* r : {&tr, &dr, &ar}) ++r->n;

        if (task_scores_accuracy(s.task)) {
            std::string pred_ans = pred_visible;
            std::string gt_ans = gt_visible;
            if (s.answer_class == AnswerClass::GR) {
                pred_ans = extract_final_answer(pred_visible).answer;
                gt_ans = extract_final_answer(gt_visible).answer;
            }
            bool hit = exact_match(pred_ans, gt_ans);
            for (TaskReport* r : {&tr, &dr, &ar}) {
                ++r->acc_total;
                if (hit) ++r->acc_hits;
            }
        }
        if (task_scores_bleu(s.task)) {
            double b = bleu4(pred_visible, {gt_visible});
            for (TaskReport* r : {&tr, &dr, &ar}) {
                r->bleu_sum += b;
                ++r->bleu_total;
            }
        }
        if (task_scores_f1(s.task)) {
            MatchCounts mc = match_spans(sc.pred_spans, sc.gt_spans, cfg.iou_threshold);
            for (TaskReport* r : {&tr, &dr, &ar}) {
                r->spans += mc;
                r->f1_applicable = true;
            }
            scored.push_back(std::move(sc));
        }
    }

    for (double t : cfg.sweep) {
        MatchCounts pool;
        for (const Scored& sc : scored) pool += match_spans(sc.pred_spans, sc.gt_spans, t);
        rep.sweep.push_back({t, f1_from_counts(pool)});
    }
    return rep;
}

std::vector<SweepPoint> threshold_sweep(const std::vector<Sample>& gt, const std::vector<Prediction>& preds,
                                        const std::vector<double>& thresholds) {
    if (thresholds.empty()) throw std::invalid_argument("threshold_sweep: no thresholds");
    for (std::size_t i = 1; i < thresholds.size(); ++i) {
        if (thresholds[i] <= thresholds[i - 1]) {
            throw std::invalid_argument("threshold_sweep: thresholds must be strictly increasing");
        }
    }
    EvalConfig cfg;
    cfg.sweep = thresholds;
    return evaluate(gt, preds, cfg).sweep;
}

namespace {

nlohmann::ordered_json task_report_json(const TaskReport& t) {
    nlohmann::ordered_json j;
    j["n"] = t.n;
    if (auto acc = t.accuracy()) {
        j["accuracy"] = *acc;
        j["accuracy_pct"] = *acc * 100.0;
    }
    if (auto b = t.bleu()) j["bleu4"] = *b;
    if (auto f = t.f1()) {
        j["span_tp"] = t.spans.tp;
        j["span_pred"] = t.spans.pred;
        j["span_gt"] = t.spans.gt;
        j["precision"] = f->precision;
        j["recall"] = f->recall;
        j["f1_all"] = f->f1;
    }
    return j;
}

std::string fmt(double v, int prec) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*f", prec, v);
    return buf;
}

} // namespace

nlohmann::ordered_json report_to_json(const EvalReport& r) {
    nlohmann::ordered_json j;
    j["config"] = {
        {"iou_threshold", r.config.iou_threshold},
        {"matching", "maximum-bipartite"},
        {"averaging", "micro"},
        {"normalizer", "casefold-collapse-strip-punct"},
    };
    j["samples"] = r.samples;
    j["missing_predictions"] = r.missing_predictions;
    j["unparseable_predictions"] = r.unparseable_predictions;
    j["unknown_prediction_ids"] = r.unknown_prediction_ids;
    j["tasks"] = nlohmann::ordered_json::object();
    for (const auto& [name, t] : r.by_task) {
        if (name != "ALL") j["tasks"][name] = task_report_json(t);
    }
    if (r.by_task.count("ALL")) j["overall"] = task_report_json(r.by_task.at("ALL"));
    j["by_doc_type"] = nlohmann::ordered_json::object();
    for (const auto& [name, t] : r.by_doc_type) j["by_doc_type"][name] = task_report_json(t);
    if (!r.sweep.empty()) {
        j["sweep"] = nlohmann::ordered_json::array();
        for (const SweepPoint& p : r.sweep) {
            j["sweep"].push_back({{"iou_threshold", p.threshold},
                                  {"precision", p.scores.precision},
                                  {"recall", p.scores.recall},
                                  {"f1_all", p.scores.f1}});
        }
    }
    return j;
}

std::string report_to_text(const EvalReport& r) {
    std::ostringstream os;
    auto row = [&](const std::string& name, const TaskReport& t) {
        os << name;
        for (std::size_t i = name.size(); i < 10; ++i) os << ' ';
        std::string n = std::to_string(t.n);
        for (std::size_t i = n.size(); i < 6; ++i) os << ' ';
        os << n;
        auto cell = [&](const std::string& s) {
            for (std::size_t i = s.size(); i < 10; ++i) os << ' ';
            os << s;
        };
        cell(t.accuracy() ? fmt(*t.accuracy() * 100.0, 1) : "-");
        cell(t.bleu() ? fmt(*t.bleu(), 4) : "-");
        if (auto f = t.f1()) {
            cell(fmt(f->precision, 4));
            cell(fmt(f->recall, 4));
            cell(fmt(f->f1, 4));
        } else {
            cell("-");
            cell("-");
            cell("-");
        }
        os << '\n';
    };
    os << "task          n      acc%     bleu4      prec    recall    f1_all\n";
    static const char* kOrder[] = {"Ga", "Gr", "Go", "Rt", "GRa", "GRr", "GRo", "PlainQA"};
    for (const char* name : kOrder) {
        auto it = r.by_task.find(name);
        if (it != r.by_task.end()) row(name, it->second);
    }
    if (auto it = r.by_task.find("ALL"); it != r.by_task.end()) row("ALL", it->second);
    os << "-- by doc type --\n";
    for (const auto& [name, t] : r.by_doc_type) row(name, t);
    if (!r.sweep.empty()) {
        os << "-- iou sweep --\n";
        for (const SweepPoint& p : r.sweep) {
            os << "iou>" << fmt(p.threshold, 2) << "  p=" << fmt(p.scores.precision, 4)
               << "  r=" << fmt(p.scores.recall, 4) << "  f1=" << fmt(p.scores.f1, 4) << '\n';
        }
    }
    if (r.missing_predictions > 0) os << "missing predictions: " << r.missing_predictions << '\n';
    if (r.unparseable_predictions > 0) os << "unparseable predictions: " << r.unparseable_predictions << '\n';
    if (!r.unknown_prediction_ids.empty()) {
        os << "unknown prediction ids: " << r.unknown_prediction_ids.size() << '\n';
    }
    return os.str();
}

} // namespace docground
