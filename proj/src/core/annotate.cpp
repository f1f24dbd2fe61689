#include "core/annotate.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "core/error.hpp"
#include "core/rng.hpp"

namespace docground {

GroundingResult locate_and_ground(std::string_view generated, const TextIndex& index, OccurrenceSet& used) {
    GroundingResult res;
    ParseResult pr = parse(generated);
    if (!pr.ok()) {
        res.defects = std::move(pr.defects);
        return res;
    }
    GroundedText out;
    for (Segment& seg : pr.doc.segments) {
        if (seg.kind != SegmentKind::Grounded) {
            out.segments.push_back(std::move(seg));
            continue;
        }
        if (!seg.boxes.empty()) {
            ++res.outcome.kept;
            out.segments.push_back(std::move(seg));
            continue;
        }
        auto candidates = index.query(seg.text);
        const TextIndex::Candidate* hit = nullptr;
        for (const auto& c : candidates) {
            if (!used.taken(c.key)) {
                hit = &c;
                break;
            }
        }
        if (!hit) {
            // Nothing (left) on the page matches: the span degrades to plain
            // text so the sample stays parseable and honest.
            ++res.outcome.degraded;
            out.segments.push_back(GroundedText::plain(std::move(seg.text)));
            continue;
        }
        used.take(hit->key);
        ++res.outcome.located;
        if (hit->multiline) ++res.outcome.multiline;
        seg.boxes.push_back(quantize(hit->box));
        out.segments.push_back(std::move(seg));
    }
    res.outcome.doc = coalesce(out);
    return res;
}

FormatPromptTemplates FormatPromptTemplates::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open: " + path);
    nlohmann::ordered_json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(0, path, std::string("invalid json: ") + e.what());
    }
    FormatPromptTemplates t;
    struct Slot {
        const char* key;
        std::vector<std::string>* dst;
    };
    for (Slot s : {Slot{"grounded_answer", &t.grounded_answer}, Slot{"reasoning_opening", &t.reasoning_opening},
                   Slot{"reasoning_closing", &t.reasoning_closing}}) {
        auto it = j.find(s.key);
        if (it == j.end() || !it->is_array() || it->empty()) {
            throw SchemaError(0, s.key, "must be a non-empty array");
        }
        for (const auto& v : *it) {
            if (!v.is_string() || v.get<std::string>().empty()) {
                throw SchemaError(0, s.key, "must hold non-empty strings");
            }
            std::string text = v.get<std::string>();
            // A suffix carrying literal markup tags would change how the
            // question classifies and could corrupt round-trips. Templates
            // describe the format in words instead.
            if (text.find("<ocr>") != std::string::npos || text.find("<bbox>") != std::string::npos) {
                throw SchemaError(0, s.key, "templates must not contain markup tags");
            }
            s.dst->push_back(std::move(text));
        }
    }
    return t;
}

namespace {

int pick(const std::vector<std::string>& pool, std::string_view sample_id, AnswerClass cls, std::uint64_t seed,
         int slot) {
    std::string key;
    key += sample_id;
    key += '\x1f';
    key += answer_class_name(cls);
    key += '\x1f';
    key += std::to_string(seed);
    key += '\x1f';
    key += std::to_string(slot);
    return static_cast<int>(fnv1a64(key) % pool.size());
}

} // namespace

PromptChoice attach_format_prompt(std::string_view question, AnswerClass cls, const FormatPromptTemplates& t,
                                  std::string_view sample_id, std::uint64_t seed) {
    PromptChoice out;
    out.question = std::string(question);
    switch (cls) {
        case AnswerClass::PA:
            break;
        case AnswerClass::GA: {
            int i = pick(t.grounded_answer, sample_id, cls, seed, 0);
            out.question += " ";
            out.question += t.grounded_answer[i];
            out.indices = {i};
            break;
        }
        case AnswerClass::GR: {
            int i = pick(t.reasoning_opening, sample_id, cls, seed, 0);
            int j = pick(t.reasoning_closing, sample_id, cls, seed, 1);
            out.question += " ";
            out.question += t.reasoning_opening[i];
            out.question += " ";
            out.question += t.reasoning_closing[j];
            out.indices = {i, j};
            break;
        }
        case AnswerClass::GO: {
            int i = pick(t.reasoning_opening, sample_id, cls, seed, 0);
            out.question += " ";
            out.question += t.reasoning_opening[i];
            out.indices = {i};
            break;
        }
    }
    return out;
}

} // namespace docground
