#include "core/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "core/error.hpp"
#include "core/rng.hpp"
#include "core/textnorm.hpp"

namespace docground {

using ojson = nlohmann::ordered_json;

const char* record_granularity_name(RecordGranularity g) {
    switch (g) {
        case RecordGranularity::Word: return "word";
        case RecordGranularity::Phrase: return "phrase";
        case RecordGranularity::Line: return "line";
        case RecordGranularity::Paragraph: return "paragraph";
        case RecordGranularity::FullPage: return "full_page";
    }
    return "word";
}

std::optional<RecordGranularity> record_granularity_from_name(std::string_view s) {
    for (RecordGranularity g : {RecordGranularity::Word, RecordGranularity::Phrase, RecordGranularity::Line,
                                RecordGranularity::Paragraph, RecordGranularity::FullPage}) {
        if (s == record_granularity_name(g)) return g;
    }
    return std::nullopt;
}

RecordGranularity to_record_granularity(BlockGranularity g) {
    switch (g) {
        case BlockGranularity::Word: return RecordGranularity::Word;
        case BlockGranularity::Phrase: return RecordGranularity::Phrase;
        case BlockGranularity::Line: return RecordGranularity::Line;
        case BlockGranularity::Paragraph: return RecordGranularity::Paragraph;
    }
    return RecordGranularity::Paragraph;
}

namespace {

std::optional<BlockGranularity> block_granularity_from_name(std::string_view s) {
    for (BlockGranularity g : {BlockGranularity::Word, BlockGranularity::Phrase, BlockGranularity::Line,
                               BlockGranularity::Paragraph}) {
        if (s == granularity_name(g)) return g;
    }
    return std::nullopt;
}

[[noreturn]] void fail(std::size_t line, const std::string& path, const std::string& msg) {
    throw SchemaError(line, path, msg);
}

const ojson& need(const ojson& j, const char* key, std::size_t line, const std::string& where) {
    auto it = j.find(key);
    if (it == j.end()) fail(line, where + key, "missing field");
    return *it;
}

std::string need_string(const ojson& j, const char* key, std::size_t line, const std::string& where) {
    const ojson& v = need(j, key, line, where);
    if (!v.is_string()) fail(line, where + key, "must be a string");
    return v.get<std::string>();
}

std::string need_nonempty(const ojson& j, const char* key, std::size_t line, const std::string& where) {
    std::string s = need_string(j, key, line, where);
    if (s.empty()) fail(line, where + key, "must not be empty");
    return s;
}

int need_int(const ojson& j, const char* key, std::size_t line, const std::string& where) {
    const ojson& v = need(j, key, line, where);
    if (!v.is_number_integer()) fail(line, where + key, "must be an integer");
    return v.get<int>();
}

QuantBox quant_box_from(const ojson& v, std::size_t line, const std::string& where) {
    if (!v.is_array() || v.size() != 4) fail(line, where, "box must be [x1,y1,x2,y2]");
    int c[4];
    for (std::size_t i = 0; i < 4; ++i) {
        if (!v[i].is_number_integer()) fail(line, where + "[" + std::to_string(i) + "]", "must be an integer");
        c[i] = v[i].get<int>();
        if (c[i] < 0 || c[i] > 999) fail(line, where + "[" + std::to_string(i) + "]", "outside [0,999]");
    }
    if (c[0] > c[2] || c[1] > c[3]) fail(line, where, "box corners out of order");
    return {c[0], c[1], c[2], c[3]};
}

ojson quant_box_to(const QuantBox& b) {
    return ojson::array({b.x1, b.y1, b.x2, b.y2});
}

BBox bbox_from(const ojson& v, std::size_t line, const std::string& where) {
    if (!v.is_array() || v.size() != 4) fail(line, where, "bbox must be [x1,y1,x2,y2]");
    double c[4];
    for (std::size_t i = 0; i < 4; ++i) {
        if (!v[i].is_number()) fail(line, where + "[" + std::to_string(i) + "]", "must be a number");
        c[i] = v[i].get<double>();
        if (c[i] < 0.0 || c[i] > 1.0) fail(line, where + "[" + std::to_string(i) + "]", "outside [0,1]");
    }
    if (c[0] > c[2] || c[1] > c[3]) fail(line, where, "bbox corners out of order");
    return {c[0], c[1], c[2], c[3]};
}

ojson bbox_to(const BBox& b) {
    return ojson::array({b.x1, b.y1, b.x2, b.y2});
}

// [text, [x1,y1,x2,y2]] with an optional null box slot.
ChartEntry chart_entry_from(const ojson& v, std::size_t line, const std::string& where) {
    if (!v.is_array() || v.size() != 2) fail(line, where, "entry must be [text, box]");
    if (!v[0].is_string()) fail(line, where + "[0]", "must be a string");
    ChartEntry e;
    e.text = v[0].get<std::string>();
    if (e.text.empty()) fail(line, where + "[0]", "must not be empty");
    if (!v[1].is_null()) e.box = quant_box_from(v[1], line, where + "[1]");
    return e;
}

ojson chart_entry_to(const ChartEntry& e) {
    return ojson::array({e.text, e.box ? ojson(quant_box_to(*e.box)) : ojson(nullptr)});
}

Block block_from(const ojson& j, std::size_t line, const std::string& where) {
    Block b;
    b.id = need_nonempty(j, "id", line, where);
    b.text = need_nonempty(j, "text", line, where);
    b.bbox = bbox_from(need(j, "bbox", line, where), line, where + "bbox");
    std::string src = need_string(j, "source", line, where);
    if (src == "ordered") {
        b.source = BlockSource::Ordered;
    } else if (src == "unordered") {
        b.source = BlockSource::Unordered;
    } else {
        fail(line, where + "source", "must be 'ordered' or 'unordered'");
    }
    std::string gran = need_string(j, "granularity", line, where);
    auto g = block_granularity_from_name(gran);
    if (!g) fail(line, where + "granularity", "unknown granularity '" + gran + "'");
    b.granularity = *g;
    return b;
}

void block_to(ojson& j, const Block& b) {
    j["id"] = b.id;
    j["text"] = b.text;
    j["bbox"] = bbox_to(b.bbox);
    j["source"] = block_source_name(b.source);
    j["granularity"] = granularity_name(b.granularity);
}

PosterPage poster_from(const ojson& j, std::size_t line) {
    PosterPage p;
    p.id = need_nonempty(j, "id", line, "");
    p.image = need_string(j, "image", line, "");
    const ojson& entries = need(j, "text_with_box", line, "");
    if (!entries.is_array()) fail(line, "text_with_box", "must be an array");
    for (std::size_t i = 0; i < entries.size(); ++i) {
        std::string where = "text_with_box[" + std::to_string(i) + "]";
        const ojson& e = entries[i];
        if (!e.is_array() || e.size() != 2) fail(line, where, "entry must be [text, box]");
        if (!e[0].is_string()) fail(line, where + "[0]", "must be a string");
        PosterEntry pe;
        pe.text = e[0].get<std::string>();
        if (pe.text.empty()) fail(line, where + "[0]", "must not be empty");
        pe.box = quant_box_from(e[1], line, where + "[1]");
        p.entries.push_back(std::move(pe));
    }
    if (j.contains("meta")) {
        const ojson& m = j["meta"];
        if (!m.is_object()) fail(line, "meta", "must be an object");
        if (m.contains("title")) {
            if (!m["title"].is_string()) fail(line, "meta.title", "must be a string");
            p.title = m["title"].get<std::string>();
        }
        for (const char* key : {"keywords", "formats"}) {
            if (!m.contains(key)) continue;
            if (!m[key].is_array()) fail(line, std::string("meta.") + key, "must be an array");
            for (std::size_t i = 0; i < m[key].size(); ++i) {
                if (!m[key][i].is_string()) fail(line, std::string("meta.") + key, "must hold strings");
                auto& dst = std::string(key) == "keywords" ? p.keywords : p.formats;
                dst.push_back(m[key][i].get<std::string>());
            }
        }
    }
    return p;
}

ojson poster_to(const PosterPage& p) {
    ojson j;
    j["kind"] = "poster_page";
    j["id"] = p.id;
    j["image"] = p.image;
    j["text_with_box"] = ojson::array();
    for (const PosterEntry& e : p.entries) {
        j["text_with_box"].push_back(ojson::array({e.text, quant_box_to(e.box)}));
    }
    if (p.title || !p.keywords.empty() || !p.formats.empty()) {
        ojson m = ojson::object();
        if (p.title) m["title"] = *p.title;
        if (!p.keywords.empty()) m["keywords"] = p.keywords;
        if (!p.formats.empty()) m["formats"] = p.formats;
        j["meta"] = std::move(m);
    }
    return j;
}

ChartPage chart_from(const ojson& j, std::size_t line) {
    ChartPage c;
    c.id = need_nonempty(j, "id", line, "");
    c.image = need_string(j, "image", line, "");
    const ojson& title = need(j, "title", line, "");
    if (!title.is_null()) c.title = chart_entry_from(title, line, "title");
    struct Role {
        const char* key;
        std::vector<ChartEntry>* dst;
    };
    Role roles[] = {{"axis_labels", &c.axis_labels}, {"legends", &c.legends}, {"data_markers", &c.data_markers}};
    for (const Role& r : roles) {
        const ojson& arr = need(j, r.key, line, "");
        if (!arr.is_array()) fail(line, r.key, "must be an array");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            r.dst->push_back(chart_entry_from(arr[i], line, std::string(r.key) + "[" + std::to_string(i) + "]"));
        }
    }
    return c;
}

ojson chart_to(const ChartPage& c) {
    ojson j;
    j["kind"] = "chart_page";
    j["id"] = c.id;
    j["image"] = c.image;
    j["title"] = c.title ? chart_entry_to(*c.title) : ojson(nullptr);
    for (auto [key, src] : {std::pair{"axis_labels", &c.axis_labels}, {"legends", &c.legends},
                            {"data_markers", &c.data_markers}}) {
        ojson arr = ojson::array();
        for (const ChartEntry& e : *src) arr.push_back(chart_entry_to(e));
        j[key] = std::move(arr);
    }
    return j;
}

PdfPage pdf_from(const ojson& j, std::size_t line) {
    PdfPage p;
    p.id = need_nonempty(j, "id", line, "");
    p.image = need_string(j, "image", line, "");
    p.width = need_int(j, "width", line, "");
    p.height = need_int(j, "height", line, "");
    if (p.width < 1 || p.height < 1) fail(line, "width", "page dimensions must be positive");
    const ojson& blocks = need(j, "blocks", line, "");
    if (!blocks.is_array()) fail(line, "blocks", "must be an array");
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        std::string where = "blocks[" + std::to_string(i) + "].";
        if (!blocks[i].is_object()) fail(line, "blocks[" + std::to_string(i) + "]", "must be an object");
        p.blocks.push_back(block_from(blocks[i], line, where));
    }
    return p;
}

ojson pdf_to(const PdfPage& p) {
    ojson j;
    j["kind"] = "pdf_page";
    j["id"] = p.id;
    j["image"] = p.image;
    j["width"] = p.width;
    j["height"] = p.height;
    j["blocks"] = ojson::array();
    for (const Block& b : p.blocks) {
        ojson bj;
        block_to(bj, b);
        j["blocks"].push_back(std::move(bj));
    }
    return j;
}

ParsingRecord record_from(const ojson& j, std::size_t line) {
    ParsingRecord r;
    r.id = need_nonempty(j, "id", line, "");
    r.page = need_nonempty(j, "page", line, "");
    std::string g = need_string(j, "granularity", line, "");
    auto rg = record_granularity_from_name(g);
    if (!rg) fail(line, "granularity", "unknown granularity '" + g + "'");
    r.granularity = *rg;
    r.instruction = need_nonempty(j, "instruction", line, "");
    r.target = need_string(j, "target", line, "");
    ParseResult pr = parse(r.target);
    if (!pr.ok()) {
        fail(line, "target", std::string("markup defect: ") + defect_kind_name(pr.defects[0].kind) + " at byte " +
                                 std::to_string(pr.defects[0].position));
    }
    return r;
}

ojson record_to(const ParsingRecord& r) {
    ojson j;
    j["kind"] = "parsing_record";
    j["id"] = r.id;
    j["page"] = r.page;
    j["granularity"] = record_granularity_name(r.granularity);
    j["instruction"] = r.instruction;
    j["target"] = r.target;
    return j;
}

Sample sample_from(const ojson& j, std::size_t line) {
    Sample s;
    s.id = need_nonempty(j, "id", line, "");
    std::string dt = need_string(j, "doc_type", line, "");
    auto d = doc_type_from_name(dt);
    if (!d) fail(line, "doc_type", "unknown doc_type '" + dt + "'");
    s.doc_type = *d;
    s.question = need_nonempty(j, "question", line, "");
    s.answer = need_string(j, "answer", line, "");
    std::string ac = need_string(j, "answer_class", line, "");
    auto cls = answer_class_from_name(ac);
    if (!cls) fail(line, "answer_class", "unknown answer_class '" + ac + "'");
    s.answer_class = *cls;
    std::string tn = need_string(j, "task", line, "");
    auto task = task_from_name(tn);
    if (!task) fail(line, "task", "unknown task '" + tn + "'");
    s.task = *task;

    ParseResult q = parse(s.question);
    if (!q.ok()) {
        fail(line, "question", std::string("markup defect: ") + defect_kind_name(q.defects[0].kind) + " at byte " +
                                   std::to_string(q.defects[0].position));
    }
    ParseResult a = parse(s.answer);
    if (!a.ok()) {
        fail(line, "answer", std::string("markup defect: ") + defect_kind_name(a.defects[0].kind) + " at byte " +
                                 std::to_string(a.defects[0].position));
    }
    TaskKind expect = task_for(q.doc.has_box(), s.answer_class);
    if (expect != s.task) {
        fail(line, "task", std::string("inconsistent task: question and answer_class imply ") + task_name(expect));
    }
    if (j.contains("meta")) {
        if (!j["meta"].is_object()) fail(line, "meta", "must be an object");
        s.meta = j["meta"];
    }
    return s;
}

ojson sample_to(const Sample& s) {
    ojson j;
    j["kind"] = "sample";
    j["id"] = s.id;
    j["doc_type"] = doc_type_name(s.doc_type);
    j["question"] = s.question;
    j["answer"] = s.answer;
    j["answer_class"] = answer_class_name(s.answer_class);
    j["task"] = task_name(s.task);
    if (s.meta.is_object()) j["meta"] = s.meta;
    return j;
}

} // namespace

CorpusItem corpus_item_from_json(const ojson& j, std::size_t line) {
    if (!j.is_object()) fail(line, "", "corpus line must be a json object");
    std::string kind = need_string(j, "kind", line, "");
    if (kind == "poster_page") return poster_from(j, line);
    if (kind == "chart_page") return chart_from(j, line);
    if (kind == "pdf_page") return pdf_from(j, line);
    if (kind == "parsing_record") return record_from(j, line);
    if (kind == "sample") return sample_from(j, line);
    if (kind == "block") {
        Block b = block_from(j, line, "");
        return b;
    }
    fail(line, "kind", "unknown kind '" + kind + "'");
}

ojson corpus_item_to_json(const CorpusItem& item) {
    return std::visit(
        [](const auto& v) -> ojson {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, PosterPage>) return poster_to(v);
            if constexpr (std::is_same_v<T, ChartPage>) return chart_to(v);
            if constexpr (std::is_same_v<T, PdfPage>) return pdf_to(v);
            if constexpr (std::is_same_v<T, ParsingRecord>) return record_to(v);
            if constexpr (std::is_same_v<T, Sample>) return sample_to(v);
            if constexpr (std::is_same_v<T, Block>) {
                ojson j;
                j["kind"] = "block";
                block_to(j, v);
                return j;
            }
        },
        item);
}

Corpus load_corpus(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open: " + path);
    Corpus corpus;
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        if (raw.find_first_not_of(" \t\r") == std::string::npos) continue;
        ojson j;
        try {
            j = ojson::parse(raw);
        } catch (const nlohmann::json::exception& e) {
            fail(line, "", std::string("invalid json: ") + e.what());
        }
        corpus.items.push_back(corpus_item_from_json(j, line));
    }
    return corpus;
}

void save_corpus(const Corpus& corpus, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    for (const CorpusItem& item : corpus.items) {
        out << corpus_item_to_json(item).dump() << '\n';
    }
    if (!out) throw IoError("write failed: " + path);
}

std::vector<Block> load_blocks(const std::string& path) {
    Corpus c = load_corpus(path);
    std::vector<Block> out;
    out.reserve(c.items.size());
    for (std::size_t i = 0; i < c.items.size(); ++i) {
        const Block* b = std::get_if<Block>(&c.items[i]);
        if (!b) throw SchemaError(0, path, "expected only 'block' lines");
        out.push_back(*b);
    }
    return out;
}

void save_blocks(const std::vector<Block>& blocks, const std::string& path) {
    Corpus c;
    for (const Block& b : blocks) c.items.push_back(b);
    save_corpus(c, path);
}

std::vector<Prediction> load_predictions(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open: " + path);
    std::vector<Prediction> out;
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        if (raw.find_first_not_of(" \t\r") == std::string::npos) continue;
        ojson j;
        try {
            j = ojson::parse(raw);
        } catch (const nlohmann::json::exception& e) {
            fail(line, "", std::string("invalid json: ") + e.what());
        }
        if (!j.is_object()) fail(line, "", "prediction line must be a json object");
        Prediction p;
        p.id = need_nonempty(j, "id", line, "");
        const ojson& o = need(j, "output", line, "");
        if (!o.is_string()) fail(line, "output", "must be a string");
        p.output = o.get<std::string>();
        out.push_back(std::move(p));
    }
    return out;
}

// ---- TextIndex ----

void TextIndex::add_item(const std::string& text, const BBox& box) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= text.size(); ++i) {
        if (i == text.size() || text[i] == '\n') {
            parts.push_back(text.substr(start, i - start));
            start = i + 1;
        }
    }
    Item item;
    double band = box.height() / static_cast<double>(parts.size());
    for (std::size_t k = 0; k < parts.size(); ++k) {
        std::string norm = normalize_text(parts[k]);
        if (norm.empty()) continue;
        BBox b{box.x1, box.y1 + band * static_cast<double>(k), box.x2,
               k + 1 == parts.size() ? box.y2 : box.y1 + band * static_cast<double>(k + 1)};
        item.lines.push_back({std::move(norm), b});
    }
    if (!item.lines.empty()) items_.push_back(std::move(item));
}

void TextIndex::finalize() {
    for (Item& item : items_) {
        item.joined.clear();
        item.starts.clear();
        for (std::size_t k = 0; k < item.lines.size(); ++k) {
            if (k > 0) item.joined += ' ';
            item.starts.push_back(item.joined.size());
            item.joined += item.lines[k].norm;
        }
    }
}

TextIndex TextIndex::build(const PosterPage& page) {
    TextIndex idx;
    for (const PosterEntry& e : page.entries) idx.add_item(e.text, dequantize(e.box));
    idx.finalize();
    return idx;
}

TextIndex TextIndex::build(const ChartPage& page) {
    TextIndex idx;
    if (page.title && page.title->box) idx.add_item(page.title->text, dequantize(*page.title->box));
    for (const auto* role : {&page.axis_labels, &page.legends, &page.data_markers}) {
        for (const ChartEntry& e : *role) {
            if (e.box) idx.add_item(e.text, dequantize(*e.box));
        }
    }
    idx.finalize();
    return idx;
}

TextIndex TextIndex::build(const PdfPage& page) {
    TextIndex idx;
    for (const Block& b : page.blocks) idx.add_item(b.text, b.bbox);
    idx.finalize();
    return idx;
}

std::vector<TextIndex::Candidate> TextIndex::query(std::string_view raw_text) const {
    std::vector<Candidate> out;
    std::string norm = normalize_text(raw_text);
    if (norm.empty()) return out;
    for (std::size_t ii = 0; ii < items_.size(); ++ii) {
        const Item& item = items_[ii];
        std::size_t pos = 0;
        while ((pos = item.joined.find(norm, pos)) != std::string::npos) {
            std::size_t end = pos + norm.size();
            BBox box;
            bool first = true;
            std::size_t covered = 0;
            for (std::size_t k = 0; k < item.lines.size(); ++k) {
                std::size_t ls = item.starts[k];
                std::size_t le = ls + item.lines[k].norm.size();
                if (ls < end && pos < le) {
                    box = first ? item.lines[k].box : union_box(box, item.lines[k].box);
                    first = false;
                    ++covered;
                }
            }
            Candidate c;
            c.box = box;
            c.multiline = covered > 1;
            c.key = (static_cast<std::uint64_t>(ii) << 32) | static_cast<std::uint64_t>(pos);
            out.push_back(c);
            pos += norm.size();
        }
    }
    return out;
}

bool TextIndex::contains_box(const BBox& box, double tol) const {
    auto close = [tol](const BBox& a, const BBox& b) {
        return std::abs(a.x1 - b.x1) <= tol && std::abs(a.y1 - b.y1) <= tol && std::abs(a.x2 - b.x2) <= tol &&
               std::abs(a.y2 - b.y2) <= tol;
    };
    for (const Item& item : items_) {
        for (std::size_t i = 0; i < item.lines.size(); ++i) {
            BBox u = item.lines[i].box;
            if (close(u, box)) return true;
            for (std::size_t j = i + 1; j < item.lines.size(); ++j) {
                u = union_box(u, item.lines[j].box);
                if (close(u, box)) return true;
            }
        }
    }
    return false;
}

std::size_t TextIndex::line_count() const {
    std::size_t n = 0;
    for (const Item& item : items_) n += item.lines.size();
    return n;
}

// ---- Parsing task emission ----

ParsingTemplates ParsingTemplates::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open: " + path);
    ojson j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(0, path, std::string("invalid json: ") + e.what());
    }
    ParsingTemplates t;
    struct Slot {
        const char* key;
        std::vector<std::string>* dst;
        const char* placeholder; // must appear in every template, or null
    };
    Slot slots[] = {
        {"localization", &t.localization, "{text}"},
        {"recognition", &t.recognition, "{bbox}"},
        {"full_page_poster", &t.full_page_poster, nullptr},
        {"full_page_chart", &t.full_page_chart, nullptr},
        {"full_page_pdf", &t.full_page_pdf, nullptr},
    };
    for (const Slot& s : slots) {
        const ojson& arr = need(j, s.key, 0, "");
        if (!arr.is_array() || arr.empty()) fail(0, s.key, "must be a non-empty array");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            if (!arr[i].is_string()) fail(0, std::string(s.key) + "[" + std::to_string(i) + "]", "must be a string");
            std::string tmpl = arr[i].get<std::string>();
            if (tmpl.empty()) fail(0, std::string(s.key) + "[" + std::to_string(i) + "]", "must not be empty");
            if (s.placeholder && tmpl.find(s.placeholder) == std::string::npos) {
                fail(0, std::string(s.key) + "[" + std::to_string(i) + "]",
                     std::string("missing placeholder ") + s.placeholder);
            }
            s.dst->push_back(std::move(tmpl));
        }
    }
    return t;
}

namespace {

std::size_t pick_slot(std::size_t n, std::initializer_list<std::string_view> parts) {
    std::uint64_t h = 1469598103934665603ULL;
    bool first = true;
    for (std::string_view p : parts) {
        if (!first) h = fnv1a64(std::string_view("\x1f", 1), h);
        first = false;
        h = fnv1a64(p, h);
    }
    return static_cast<std::size_t>(h % n);
}

std::string fill(std::string tmpl, std::string_view placeholder, std::string_view value) {
    std::size_t pos = 0;
    while ((pos = tmpl.find(placeholder, pos)) != std::string::npos) {
        tmpl.replace(pos, placeholder.size(), value);
        pos += value.size();
    }
    return tmpl;
}

struct Unit {
    std::string unit_id;
    std::string text;
    QuantBox box;
};

std::vector<ParsingRecord> emit_block_records(const std::string& page_id, const std::vector<Unit>& units,
                                              RecordGranularity g, const ParsingTemplates& t) {
    std::vector<ParsingRecord> out;
    for (const Unit& u : units) {
        std::string box_str = serialize_box(u.box);
        ParsingRecord loc;
        loc.id = page_id + ":" + u.unit_id + ":loc";
        loc.page = page_id;
        loc.granularity = g;
        loc.instruction =
            fill(t.localization[pick_slot(t.localization.size(), {page_id, u.unit_id, "loc"})], "{text}", u.text);
        loc.target = "<ocr></ocr>" + box_str;
        out.push_back(std::move(loc));

        ParsingRecord rec;
        rec.id = page_id + ":" + u.unit_id + ":rec";
        rec.page = page_id;
        rec.granularity = g;
        rec.instruction =
            fill(t.recognition[pick_slot(t.recognition.size(), {page_id, u.unit_id, "rec"})], "{bbox}", box_str);
        rec.target = "<ocr>" + u.text + "</ocr>";
        out.push_back(std::move(rec));
    }
    return out;
}

ParsingRecord full_page_record(const std::string& page_id, const std::vector<std::string>& templates,
                               std::string target) {
    ParsingRecord r;
    r.id = page_id + ":full";
    r.page = page_id;
    r.granularity = RecordGranularity::FullPage;
    r.instruction = templates[pick_slot(templates.size(), {page_id, "full"})];
    r.target = std::move(target);
    return r;
}

} // namespace

std::string full_page_target(const PosterPage& page) {
    ojson arr = ojson::array();
    for (const PosterEntry& e : page.entries) arr.push_back(ojson::array({e.text, quant_box_to(e.box)}));
    return arr.dump();
}

std::string full_page_target(const ChartPage& page) {
    ojson j;
    j["title"] = page.title ? chart_entry_to(*page.title) : ojson(nullptr);
    for (auto [key, src] : {std::pair{"axis_labels", &page.axis_labels}, {"legends", &page.legends},
                            {"data_markers", &page.data_markers}}) {
        ojson arr = ojson::array();
        for (const ChartEntry& e : *src) arr.push_back(chart_entry_to(e));
        j[key] = std::move(arr);
    }
    return j.dump();
}

std::string full_page_target(const PdfPage& page) {
    ojson arr = ojson::array();
    for (const Block& b : page.blocks) arr.push_back(ojson::array({b.text, quant_box_to(quantize(b.bbox))}));
    return arr.dump();
}

std::vector<ParsingRecord> emit_parsing_tasks(const PosterPage& page, RecordGranularity g,
                                              const ParsingTemplates& t) {
    if (g == RecordGranularity::FullPage) {
        return {full_page_record(page.id, t.full_page_poster, full_page_target(page))};
    }
    std::vector<Unit> units;
    if (g == RecordGranularity::Paragraph) {
        for (std::size_t i = 0; i < page.entries.size(); ++i) {
            units.push_back({"e" + std::to_string(i), page.entries[i].text, page.entries[i].box});
        }
    }
    return emit_block_records(page.id, units, g, t);
}

std::vector<ParsingRecord> emit_parsing_tasks(const ChartPage& page, RecordGranularity g,
                                              const ParsingTemplates& t) {
    if (g == RecordGranularity::FullPage) {
        return {full_page_record(page.id, t.full_page_chart, full_page_target(page))};
    }
    std::vector<Unit> units;
    if (g == RecordGranularity::Phrase) {
        if (page.title && page.title->box) units.push_back({"t", page.title->text, *page.title->box});
        struct Role {
            const char* prefix;
            const std::vector<ChartEntry>* src;
        };
        for (Role r : {Role{"x", &page.axis_labels}, Role{"l", &page.legends}, Role{"d", &page.data_markers}}) {
            for (std::size_t i = 0; i < r.src->size(); ++i) {
                const ChartEntry& e = (*r.src)[i];
                if (!e.box) continue; // masked values are not visible, nothing to point at
                units.push_back({r.prefix + std::to_string(i), e.text, *e.box});
            }
        }
    }
    return emit_block_records(page.id, units, g, t);
}

std::vector<ParsingRecord> emit_parsing_tasks(const PdfPage& page, RecordGranularity g, const ParsingTemplates& t) {
    if (g == RecordGranularity::FullPage) {
        return {full_page_record(page.id, t.full_page_pdf, full_page_target(page))};
    }
    std::vector<Unit> units;
    for (const Block& b : page.blocks) {
        if (to_record_granularity(b.granularity) != g) continue;
        units.push_back({b.id, b.text, quantize(b.bbox)});
    }
    return emit_block_records(page.id, units, g, t);
}

} // namespace docground
