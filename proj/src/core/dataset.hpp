#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "core/geometry.hpp"
#include "core/layout.hpp"
#include "core/markup.hpp"
#include "core/taxonomy.hpp"

namespace docground {

// Poster annotation: flat list of (text, box) in reading order.
struct PosterEntry {
    std::string text;
    QuantBox box;
    bool operator==(const PosterEntry&) const = default;
};

struct PosterPage {
    std::string id;
    std::string image;
    std::vector<PosterEntry> entries;
    std::optional<std::string> title;
    std::vector<std::string> keywords;
    std::vector<std::string> formats;
    bool operator==(const PosterPage&) const = default;
};

// Chart annotation: structured roles. A missing box means the text exists in
// the underlying table but is not printed on the chart (masked value).
struct ChartEntry {
    std::string text;
    std::optional<QuantBox> box;
    bool operator==(const ChartEntry&) const = default;
};

struct ChartPage {
    std::string id;
    std::string image;
    std::optional<ChartEntry> title;
    std::vector<ChartEntry> axis_labels;
    std::vector<ChartEntry> legends;
    std::vector<ChartEntry> data_markers;
    bool operator==(const ChartPage&) const = default;
};

// PDF page: merged block list, float boxes, pixel dimensions of the render.
struct PdfPage {
    std::string id;
    std::string image;
    int width = 0;
    int height = 0;
    std::vector<Block> blocks;
    bool operator==(const PdfPage&) const = default;
};

enum class RecordGranularity { Word, Phrase, Line, Paragraph, FullPage };
const char* record_granularity_name(RecordGranularity g);
std::optional<RecordGranularity> record_granularity_from_name(std::string_view s);
RecordGranularity to_record_granularity(BlockGranularity g);

// Supervised parsing example: instruction in, grounded-markup target out.
struct ParsingRecord {
    std::string id;
    std::string page;
    RecordGranularity granularity = RecordGranularity::Word;
    std::string instruction;
    std::string target;
    bool operator==(const ParsingRecord&) const = default;
};

// One QA example. question/answer are grounded-markup strings; task is the
// taxonomy cell derived from (question grounding, answer_class).
struct Sample {
    std::string id;
    DocType doc_type = DocType::Poster;
    std::string question;
    std::string answer;
    AnswerClass answer_class = AnswerClass::PA;
    TaskKind task = TaskKind::PlainQA;
    nlohmann::ordered_json meta; // optional, round-tripped verbatim
    bool operator==(const Sample&) const = default;
};

struct Prediction {
    std::string id;
    std::string output;
    bool operator==(const Prediction&) const = default;
};

using CorpusItem = std::variant<PosterPage, ChartPage, PdfPage, ParsingRecord, Sample, Block>;

// A JSONL corpus, line order preserved. Every line is an object with a
// "kind" discriminator: poster_page, chart_page, pdf_page, parsing_record,
// sample, block.
struct Corpus {
    std::vector<CorpusItem> items;

    template <typename T>
    std::vector<const T*> all() const {
        std::vector<const T*> out;
        for (const CorpusItem& it : items) {
            if (const T* p = std::get_if<T>(&it)) out.push_back(p);
        }
        return out;
    }
};

// Strict loading: any malformed line aborts with a SchemaError naming the
// 1-based line and the offending field path. No partial results.
Corpus load_corpus(const std::string& path);
void save_corpus(const Corpus& corpus, const std::string& path);

nlohmann::ordered_json corpus_item_to_json(const CorpusItem& item);
CorpusItem corpus_item_from_json(const nlohmann::ordered_json& j, std::size_t line);

std::vector<Block> load_blocks(const std::string& path);
void save_blocks(const std::vector<Block>& blocks, const std::string& path);

std::vector<Prediction> load_predictions(const std::string& path);

// Page text lookup for annotation and verification. Items are the page's
// annotation units; multi-line texts are split on '\n' and their boxes
// sliced into equal-height horizontal bands, one per line.
class TextIndex {
  public:
    struct Candidate {
        BBox box;
        bool multiline = false;   // match crossed a line boundary
        std::uint64_t key = 0;    // stable identity for occurrence consumption
    };

    static TextIndex build(const PosterPage& page);
    static TextIndex build(const ChartPage& page);
    static TextIndex build(const PdfPage& page);

    // All occurrences of the normalized query across all items, in reading
    // order (item order, then position). Empty queries match nothing.
    std::vector<Candidate> query(std::string_view raw_text) const;

    // True when the box equals a line box or the union of a consecutive line
    // run within one item, to within tol per coordinate.
    bool contains_box(const BBox& box, double tol = 5e-4) const;

    std::size_t line_count() const;
    bool empty() const { return items_.empty(); }

  private:
    struct Line {
        std::string norm;
        BBox box;
    };
    struct Item {
        std::vector<Line> lines;
        std::string joined;               // norm lines joined with single spaces
        std::vector<std::size_t> starts;  // offset of each line in joined
    };
    void add_item(const std::string& text, const BBox& box);
    void finalize();
    std::vector<Item> items_;
};

// Instruction templates for parsing-task emission. Placeholders: {text} in
// localization templates, {bbox} in recognition templates.
struct ParsingTemplates {
    std::vector<std::string> localization;
    std::vector<std::string> recognition;
    std::vector<std::string> full_page_poster;
    std::vector<std::string> full_page_chart;
    std::vector<std::string> full_page_pdf;

    static ParsingTemplates load(const std::string& path);
};

// Block-level emission produces a localization and a recognition record per
// annotation unit of the requested granularity; full-page emission produces
// one record whose target is the page's complete annotation as JSON text.
// Template slots rotate deterministically by hashing page and unit ids.
std::vector<ParsingRecord> emit_parsing_tasks(const PosterPage& page, RecordGranularity g, const ParsingTemplates& t);
std::vector<ParsingRecord> emit_parsing_tasks(const ChartPage& page, RecordGranularity g, const ParsingTemplates& t);
std::vector<ParsingRecord> emit_parsing_tasks(const PdfPage& page, RecordGranularity g, const ParsingTemplates& t);

// The full-page target strings (also used by verification fixtures).
std::string full_page_target(const PosterPage& page);
std::string full_page_target(const ChartPage& page);
std::string full_page_target(const PdfPage& page);

} // namespace docground
