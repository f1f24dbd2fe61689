#include "core/layout.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "core/textnorm.hpp"

namespace docground {

const char* block_source_name(BlockSource s) {
    return s == BlockSource::Ordered ? "ordered" : "unordered";
}

const char* granularity_name(BlockGranularity g) {
    switch (g) {
        case BlockGranularity::Word: return "word";
        case BlockGranularity::Phrase: return "phrase";
        case BlockGranularity::Line: return "line";
        case BlockGranularity::Paragraph: return "paragraph";
    }
    return "paragraph";
}

namespace {

bool is_duplicate(const Block& u, const Block& o, const std::string& nu, const std::string& no,
                  const MergeConfig& cfg) {
    if (iou(u.bbox, o.bbox) < cfg.dup_iou) return false;
    return text_similarity(nu, no) >= cfg.dup_text_sim;
}

double horizontal_overlap(const BBox& a, const BBox& b) {
    return std::min(a.x2, b.x2) - std::max(a.x1, b.x1);
}

bool same_column(const Block& a, const Block& b, const MergeConfig& cfg) {
    double ov = horizontal_overlap(a.bbox, b.bbox);
    double narrow = std::min(a.bbox.width(), b.bbox.width());
    if (narrow <= 0.0) return ov >= 0.0; // degenerate width: touching counts
    return ov >= cfg.col_overlap * narrow;
}

struct Find {
    std::vector<std::size_t> parent;
    explicit Find(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t root(std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    }
    void join(std::size_t a, std::size_t b) { parent[root(a)] = root(b); }
};

} // namespace

DedupeResult dedupe_and_replace(const std::vector<Block>& ordered, const std::vector<Block>& unordered,
                                const MergeConfig& cfg) {
    std::vector<std::string> no(ordered.size());
    for (std::size_t i = 0; i < ordered.size(); ++i) no[i] = normalize_text(ordered[i].text);

    // Pass 1: drop unordered duplicates of an ordered block.
    std::vector<const Block*> survivors;
    std::vector<std::string> nu;
    for (const Block& u : unordered) {
        std::string n = normalize_text(u.text);
        bool dup = false;
        for (std::size_t i = 0; i < ordered.size() && !dup; ++i) {
            dup = is_duplicate(u, ordered[i], n, no[i], cfg);
        }
        if (!dup) {
            survivors.push_back(&u);
            nu.push_back(std::move(n));
        }
    }

    // Pass 2: each survivor may replace one run of consecutive ordered blocks
    // it subsumes. Runs are taken over the current list; blocks introduced by
    // earlier replacements are opaque to later ones.
    std::vector<Block> cur = ordered;
    std::vector<std::string> curn = no;
    std::vector<bool> replaceable(cur.size(), true);

    DedupeResult out;
    for (std::size_t ui = 0; ui < survivors.size(); ++ui) {
        const Block& u = *survivors[ui];
        const std::string& un = nu[ui];
        double best = -1.0;
        std::size_t best_b = 0, best_e = 0;
        if (!un.empty()) {
            std::size_t i = 0;
            while (i < cur.size()) {
                if (!replaceable[i] || curn[i].empty() || un.find(curn[i]) == std::string::npos) {
                    ++i;
                    continue;
                }
                std::size_t j = i;
                BBox span = cur[i].bbox;
                while (j + 1 < cur.size() && replaceable[j + 1] && !curn[j + 1].empty() &&
                       un.find(curn[j + 1]) != std::string::npos) {
                    ++j;
                    span = union_box(span, cur[j].bbox);
                }
                double score = iou(span, u.bbox);
                if (score > best) {
                    best = score;
                    best_b = i;
                    best_e = j + 1;
                }
                i = j + 1;
            }
        }
        if (best >= cfg.trunc_iou && best >= 0.0 && best_e > best_b) {
            Block repl = u;
            cur.erase(cur.begin() + best_b, cur.begin() + best_e);
            curn.erase(curn.begin() + best_b, curn.begin() + best_e);
            replaceable.erase(replaceable.begin() + best_b, replaceable.begin() + best_e);
            cur.insert(cur.begin() + best_b, std::move(repl));
            curn.insert(curn.begin() + best_b, un);
            replaceable.insert(replaceable.begin() + best_b, false);
        } else {
            out.preserved.push_back(u);
        }
    }
    out.ordered = std::move(cur);
    return out;
}

std::vector<OrderedArea> build_ordered_areas(const std::vector<Block>& blocks, const MergeConfig& cfg) {
    std::vector<OrderedArea> areas;
    std::size_t start = 0;
    auto close = [&](std::size_t end) {
        if (end - start >= 2) {
            BBox region = blocks[start].bbox;
            for (std::size_t k = start + 1; k < end; ++k) region = union_box(region, blocks[k].bbox);
            areas.push_back({start, end, region});
        }
        start = end;
    };
    for (std::size_t i = 1; i < blocks.size(); ++i) {
        const BBox& a = blocks[i - 1].bbox;
        const BBox& b = blocks[i].bbox;
        bool monotone = b.x1 >= a.x1 - cfg.eps && b.y1 >= a.y1 - cfg.eps;
        if (!monotone) close(i);
    }
    close(blocks.size());
    return areas;
}

std::vector<Block> column_major_sort(const std::vector<Block>& blocks, const MergeConfig& cfg) {
    std::size_t n = blocks.size();
    if (n <= 1) return blocks;

    Find uf(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (same_column(blocks[i], blocks[j], cfg)) uf.join(i, j);
        }
    }

    struct Col {
        double min_x1 = std::numeric_limits<double>::max();
        double min_y1 = std::numeric_limits<double>::max();
        std::size_t first = 0;
        std::vector<std::size_t> members;
    };
    std::vector<Col> cols(n);
    std::vector<bool> used(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t r = uf.root(i);
        Col& c = cols[r];
        if (!used[r]) {
            used[r] = true;
            c.first = i;
        }
        c.min_x1 = std::min(c.min_x1, blocks[i].bbox.x1);
        c.min_y1 = std::min(c.min_y1, blocks[i].bbox.y1);
        c.members.push_back(i);
    }

    std::vector<std::size_t> roots;
    for (std::size_t r = 0; r < n; ++r) {
        if (used[r]) roots.push_back(r);
    }
    std::sort(roots.begin(), roots.end(), [&](std::size_t a, std::size_t b) {
        if (cols[a].min_x1 != cols[b].min_x1) return cols[a].min_x1 < cols[b].min_x1;
        if (cols[a].min_y1 != cols[b].min_y1) return cols[a].min_y1 < cols[b].min_y1;
        return cols[a].first < cols[b].first;
    });

    std::vector<Block> out;
    out.reserve(n);
    for (std::size_t r : roots) {
        std::vector<std::size_t>& m = cols[r].members; // already in input order
        std::stable_sort(m.begin(), m.end(), [&](std::size_t a, std::size_t b) {
            if (blocks[a].bbox.y1 != blocks[b].bbox.y1) return blocks[a].bbox.y1 < blocks[b].bbox.y1;
            return blocks[a].bbox.x1 < blocks[b].bbox.x1;
        });
        for (std::size_t i : m) out.push_back(blocks[i]);
    }
    return out;
}

bool column_major_less(const Block& a, const Block& b, const MergeConfig& cfg) {
    if (same_column(a, b, cfg)) {
        if (a.bbox.y1 != b.bbox.y1) return a.bbox.y1 < b.bbox.y1;
        return a.bbox.x1 < b.bbox.x1;
    }
    if (a.bbox.x1 != b.bbox.x1) return a.bbox.x1 < b.bbox.x1;
    return a.bbox.y1 < b.bbox.y1;
}

std::vector<Block> merge(const std::vector<Block>& ordered, const std::vector<Block>& unordered,
                         const MergeConfig& cfg) {
    DedupeResult d = dedupe_and_replace(ordered, unordered, cfg);
    if (d.ordered.empty()) return column_major_sort(d.preserved, cfg);
    std::vector<OrderedArea> areas = build_ordered_areas(d.ordered, cfg);

    // Route each preserved block: into the smallest ordered area containing
    // its center, or to the outlier list.
    std::vector<std::vector<Block>> area_extras(areas.size());
    std::vector<Block> outliers;
    for (Block& p : d.preserved) {
        double cx = p.bbox.cx(), cy = p.bbox.cy();
        std::size_t best = areas.size();
        double best_area = std::numeric_limits<double>::max();
        for (std::size_t ai = 0; ai < areas.size(); ++ai) {
            if (!areas[ai].region.contains(cx, cy)) continue;
            double ar = areas[ai].region.area();
            if (ar < best_area) {
                best_area = ar;
                best = ai;
            }
        }
        if (best < areas.size()) {
            area_extras[best].push_back(std::move(p));
        } else {
            outliers.push_back(std::move(p));
        }
    }

    // Assemble: ordered areas get their extras merged in and are re-read in
    // column-major order; stretches outside any area keep their order.
    struct Slot {
        Block block;
        bool anchor; // came from the ordered stream
    };
    std::vector<Slot> result;
    result.reserve(d.ordered.size() + d.preserved.size());
    std::size_t next_area = 0, i = 0;
    while (i < d.ordered.size()) {
        if (next_area < areas.size() && areas[next_area].begin == i) {
            const OrderedArea& a = areas[next_area];
            std::vector<Block> group(d.ordered.begin() + a.begin, d.ordered.begin() + a.end);
            std::vector<bool> anchor_flag(group.size(), true);
            for (Block& e : area_extras[next_area]) {
                group.push_back(std::move(e));
                anchor_flag.push_back(false);
            }
            // Tag anchors through the sort by id lookup: ids are unique.
            std::vector<std::pair<Block, bool>> tagged;
            tagged.reserve(group.size());
            for (std::size_t k = 0; k < group.size(); ++k) tagged.emplace_back(std::move(group[k]), anchor_flag[k]);
            std::vector<Block> plain;
            plain.reserve(tagged.size());
            for (auto& t : tagged) plain.push_back(t.first);
            std::vector<Block> sorted = column_major_sort(plain, cfg);
            for (Block& b : sorted) {
                bool is_anchor = false;
                for (auto& t : tagged) {
                    if (t.first.id == b.id) {
                        is_anchor = t.second;
                        break;
                    }
                }
                result.push_back({std::move(b), is_anchor});
            }
            i = a.end;
            ++next_area;
        } else {
            result.push_back({d.ordered[i], true});
            ++i;
        }
    }

    // Outliers attach next to the nearest ordered block, before it or after
    // it according to the pairwise reading order.
    for (Block& o : outliers) {
        double ox = o.bbox.cx(), oy = o.bbox.cy();
        std::size_t best = result.size();
        double best_d = std::numeric_limits<double>::max();
        for (std::size_t k = 0; k < result.size(); ++k) {
            if (!result[k].anchor) continue;
            double dx = result[k].block.bbox.cx() - ox;
            double dy = result[k].block.bbox.cy() - oy;
            double dist = dx * dx + dy * dy;
            if (dist < best_d) {
                best_d = dist;
                best = k;
            }
        }
        std::size_t pos = column_major_less(o, result[best].block, cfg) ? best : best + 1;
        result.insert(result.begin() + pos, {std::move(o), false});
    }

    std::vector<Block> out;
    out.reserve(result.size());
    for (Slot& s : result) out.push_back(std::move(s.block));
    return out;
}

} // namespace docground
