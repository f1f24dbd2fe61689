#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "core/geometry.hpp"

namespace docground {

enum class BlockSource { Ordered, Unordered };
enum class BlockGranularity { Word, Phrase, Line, Paragraph };

const char* block_source_name(BlockSource s);
const char* granularity_name(BlockGranularity g);

// One text block on a page. Ordered blocks come from a reading-order aware
// extractor (correct order, prone to truncation); unordered blocks come from
// a layout detector (complete text, no order).
struct Block {
    std::string id;
    std::string text;
    BBox bbox;
    BlockSource source = BlockSource::Ordered;
    BlockGranularity granularity = BlockGranularity::Paragraph;

    bool operator==(const Block&) const = default;
};

struct MergeConfig {
    double dup_iou = 0.5;       // duplicate when IoU and text similarity both clear
    double dup_text_sim = 0.8;
    double trunc_iou = 0.5;     // run-union IoU needed to replace truncated blocks
    double eps = 0.01;          // top-left monotonicity slack for ordered areas
    double col_overlap = 0.5;   // horizontal overlap ratio that joins a column
};

struct DedupeResult {
    std::vector<Block> ordered;    // ordered stream with truncated runs replaced
    std::vector<Block> preserved;  // unordered blocks that survived, input order
};

// Pass 1 and 2 of the merge: drop unordered blocks that duplicate an ordered
// block, then let each surviving unordered block replace the run of
// consecutive ordered blocks it subsumes (every run text a substring of its
// text, union IoU >= trunc_iou). Each unordered block replaces at most one
// run; replacements are not re-replaced.
DedupeResult dedupe_and_replace(const std::vector<Block>& ordered, const std::vector<Block>& unordered,
                                const MergeConfig& cfg = {});

// Maximal runs (length >= 2) of consecutive blocks whose top-left corners
// move monotonically right and down, within eps.
struct OrderedArea {
    std::size_t begin = 0; // [begin, end) indexes into the block list
    std::size_t end = 0;
    BBox region;
};
std::vector<OrderedArea> build_ordered_areas(const std::vector<Block>& blocks, const MergeConfig& cfg = {});

// Groups blocks into columns by transitive horizontal overlap (overlap >=
// col_overlap of the narrower block), orders columns by leftmost x1, and
// reads each column top to bottom (y1, then x1; stable on full ties).
std::vector<Block> column_major_sort(const std::vector<Block>& blocks, const MergeConfig& cfg = {});

// Pairwise form of the same reading order, used to place a block relative to
// an anchor: same column -> compare (y1, x1), different columns -> (x1, y1).
bool column_major_less(const Block& a, const Block& b, const MergeConfig& cfg = {});

// Full pipeline: dedupe/replace, find ordered areas, insert preserved blocks
// whose centers fall inside an area (smallest containing area wins) and
// column-major sort those areas; attach the rest next to the nearest ordered
// block by center distance.
std::vector<Block> merge(const std::vector<Block>& ordered, const std::vector<Block>& unordered,
                         const MergeConfig& cfg = {});

} // namespace docground
