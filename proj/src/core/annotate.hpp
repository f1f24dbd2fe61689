#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "core/dataset.hpp"
#include "core/markup.hpp"
#include "core/taxonomy.hpp"

namespace docground {

// Occurrence bookkeeping across locate_and_ground calls on one page side, so
// a span text that appears twice in the generated output binds to two
// different page occurrences instead of the same box twice.
class OccurrenceSet {
  public:
    bool taken(std::uint64_t key) const { return used_.count(key) > 0; }
    void take(std::uint64_t key) { used_.insert(key); }
    void clear() { used_.clear(); }

  private:
    std::set<std::uint64_t> used_;
};

struct GroundingOutcome {
    GroundedText doc;
    int located = 0;    // spans that received a box from the index
    int kept = 0;       // spans that already carried a box
    int degraded = 0;   // spans the index could not place, demoted to plain
    int multiline = 0;  // located spans whose box unions multiple lines
};

struct GroundingResult {
    std::vector<FormatDefect> defects; // non-empty: input did not parse, no outcome
    GroundingOutcome outcome;          // valid when defects is empty
    bool ok() const { return defects.empty(); }
};

// Parses generated text and fills in boxes for grounded spans that lack
// them, by exact normalized-text lookup in the page index. Each call
// consumes occurrences from `used`, earliest unconsumed occurrence first.
// Visible text is never altered.
GroundingResult locate_and_ground(std::string_view generated, const TextIndex& index, OccurrenceSet& used);

// Response-format prompt templates appended to questions so the model knows
// what shape of answer is expected.
struct FormatPromptTemplates {
    std::vector<std::string> grounded_answer;      // one suffix for GA
    std::vector<std::string> reasoning_opening;    // first half for GR; alone for GO
    std::vector<std::string> reasoning_closing;    // second half for GR

    static FormatPromptTemplates load(const std::string& path);
};

struct PromptChoice {
    std::string question;      // question with the suffix appended
    std::vector<int> indices;  // template slots used, for provenance
};

// GA: one grounded_answer suffix. GR: an opening plus a closing suffix.
// GO: an opening suffix alone. PA: question unchanged. Selection hashes
// (sample_id, class, seed, slot), so a fixed seed pins the whole corpus.
PromptChoice attach_format_prompt(std::string_view question, AnswerClass cls, const FormatPromptTemplates& t,
                                  std::string_view sample_id, std::uint64_t seed);

} // namespace docground
