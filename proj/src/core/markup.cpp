#include "core/markup.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <stdexcept>

namespace docground {

namespace {

constexpr std::string_view kOcrOpen = "<ocr>";
constexpr std::string_view kOcrClose = "</ocr>";
constexpr std::string_view kBoxOpen = "<bbox>";
constexpr std::string_view kBoxClose = "</bbox>";

enum class Tok { OcrOpen, OcrClose, BoxOpen, BoxClose };

struct TokHit {
    Tok tok;
    std::size_t pos;
};

std::string_view token_text(Tok t) {
    switch (t) {
        case Tok::OcrOpen: return kOcrOpen;
        case Tok::OcrClose: return kOcrClose;
        case Tok::BoxOpen: return kBoxOpen;
        case Tok::BoxClose: return kBoxClose;
    }
    return {};
}

bool starts_with(std::string_view s, std::size_t at, std::string_view prefix) {
    return s.size() - at >= prefix.size() && s.compare(at, prefix.size(), prefix) == 0;
}

std::optional<TokHit> next_token(std::string_view s, std::size_t from) {
    for (std::size_t i = s.find('<', from); i != std::string_view::npos; i = s.find('<', i + 1)) {
        // Closers first so "</ocr>" is not read as text following a '<'.
        if (starts_with(s, i, kOcrClose)) return TokHit{Tok::OcrClose, i};
        if (starts_with(s, i, kBoxClose)) return TokHit{Tok::BoxClose, i};
        if (starts_with(s, i, kOcrOpen)) return TokHit{Tok::OcrOpen, i};
        if (starts_with(s, i, kBoxOpen)) return TokHit{Tok::BoxOpen, i};
    }
    return std::nullopt;
}

bool ws_byte(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

std::string_view trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && ws_byte(s[b])) ++b;
    while (e > b && ws_byte(s[e - 1])) --e;
    return s.substr(b, e - b);
}

struct BoxGroup {
    std::size_t next = 0;            // resume offset
    bool closed = false;             // saw the matching </bbox>
    bool is_null = false;            // literal "null" payload
    std::optional<QuantBox> box;     // present only for a clean 4-int payload
    std::string_view spill;          // undelimited payload to keep as plain text
};

class Parser {
  public:
    Parser(std::string_view raw, const ParseOptions& opts) : raw_(raw), opts_(opts) {}

    ParseResult run() {
        std::size_t i = 0;
        while (i < raw_.size()) {
            auto hit = next_token(raw_, i);
            if (!hit) {
                plain(raw_.substr(i));
                break;
            }
            plain(raw_.substr(i, hit->pos - i));
            switch (hit->tok) {
                case Tok::OcrOpen:
                    i = parse_span(hit->pos);
                    break;
                case Tok::BoxOpen: {
                    defect(DefectKind::OrphanBBox, hit->pos);
                    BoxGroup g = parse_box_group(hit->pos, /*emit=*/false);
                    plain(g.spill);
                    i = g.next;
                    break;
                }
                case Tok::OcrClose:
                    defect(DefectKind::UnclosedTag, hit->pos);
                    i = hit->pos + kOcrClose.size();
                    break;
                case Tok::BoxClose:
                    defect(DefectKind::OrphanBBox, hit->pos);
                    i = hit->pos + kBoxClose.size();
                    break;
            }
        }
        flush_plain();
        std::stable_sort(defects_.begin(), defects_.end(),
                         [](const FormatDefect& a, const FormatDefect& b) { return a.position < b.position; });
        return {GroundedText{std::move(segments_)}, std::move(defects_)};
    }

  private:
    // p points at "<ocr>". Returns the resume offset.
    std::size_t parse_span(std::size_t p) {
        std::size_t content = p + kOcrOpen.size();
        auto hit = next_token(raw_, content);
        if (!hit) {
            defect(DefectKind::UnclosedTag, p);
            plain(raw_.substr(content));
            return raw_.size();
        }
        if (hit->tok == Tok::OcrOpen) {
            defect(DefectKind::NestedTag, hit->pos);
            plain(raw_.substr(content, hit->pos - content));
            return hit->pos; // restart at the inner <ocr>
        }
        if (hit->tok != Tok::OcrClose) {
            // A bbox tag interrupted the span. Resync at it; the main loop
            // will flag the group as orphaned.
            defect(DefectKind::UnclosedTag, p);
            plain(raw_.substr(content, hit->pos - content));
            return hit->pos;
        }

        std::string text(raw_.substr(content, hit->pos - content));
        std::size_t after = hit->pos + kOcrClose.size();

        // Optional box group; whitespace between the pair is tolerated.
        std::size_t k = after;
        while (k < raw_.size() && ws_byte(raw_[k])) ++k;
        if (starts_with(raw_, k, kBoxOpen)) {
            BoxGroup g = parse_box_group(k, /*emit=*/true);
            Segment seg{SegmentKind::Grounded, std::move(text), {}};
            if (g.box) seg.boxes.push_back(*g.box);
            push(std::move(seg));
            plain(g.spill);
            return g.next;
        }
        if (opts_.strict_boxes) defect(DefectKind::NullBBox, p);
        push(Segment{SegmentKind::Grounded, std::move(text), {}});
        return after; // trailing whitespace stays in the plain stream
    }

    // p points at "<bbox>". emit=false suppresses payload defects for groups
    // already reported as orphans.
    BoxGroup parse_box_group(std::size_t p, bool emit) {
        BoxGroup g;
        std::size_t content = p + kBoxOpen.size();
        auto hit = next_token(raw_, content);
        if (!hit || hit->tok != Tok::BoxClose) {
            // Undelimited payload stays in the plain stream; resync at the
            // next tag without consuming it.
            if (emit) defect(DefectKind::UnclosedTag, p);
            g.next = hit ? hit->pos : raw_.size();
            g.spill = raw_.substr(content, g.next - content);
            return g;
        }
        g.closed = true;
        g.next = hit->pos + kBoxClose.size();
        parse_payload(raw_.substr(content, hit->pos - content), content, p, emit, g);
        return g;
    }

    void parse_payload(std::string_view payload, std::size_t payload_off, std::size_t group_off, bool emit, BoxGroup& g) {
        if (trim(payload) == "null") {
            g.is_null = true;
            if (emit && opts_.strict_boxes) defect(DefectKind::NullBBox, group_off);
            return;
        }
        int vals[4] = {0, 0, 0, 0};
        std::size_t count = 0;
        bool bad = false;
        std::size_t start = 0;
        for (std::size_t i = 0; i <= payload.size(); ++i) {
            if (i < payload.size() && payload[i] != ',') continue;
            std::string_view part = payload.substr(start, i - start);
            std::size_t tok_off = payload_off + start;
            std::size_t lead = 0;
            while (lead < part.size() && ws_byte(part[lead])) ++lead;
            tok_off += lead;
            std::string_view tok = trim(part);
            if (count < 4) {
                if (!parse_coord(tok, tok_off, emit, vals[count])) bad = true;
            }
            ++count;
            start = i + 1;
        }
        if (count != 4) {
            if (emit) defect(DefectKind::BadArity, group_off);
            return;
        }
        if (bad) return;
        if (vals[0] > vals[2] || vals[1] > vals[3]) {
            if (emit) defect(DefectKind::OutOfRange, group_off);
            return;
        }
        g.box = QuantBox{vals[0], vals[1], vals[2], vals[3]};
    }

    bool parse_coord(std::string_view tok, std::size_t tok_off, bool emit, int& out) {
        bool numeric = !tok.empty();
        std::size_t d = 0;
        if (numeric && tok[0] == '-') d = 1;
        if (d >= tok.size()) numeric = false;
        for (std::size_t j = d; numeric && j < tok.size(); ++j) {
            if (tok[j] < '0' || tok[j] > '9') numeric = false;
        }
        if (!numeric) {
            if (emit) defect(DefectKind::NonNumeric, tok_off);
            return false;
        }
        long long v = 0;
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc{} || ptr != tok.data() + tok.size() || v < 0 || v > 999) {
            if (emit) defect(DefectKind::OutOfRange, tok_off);
            return false;
        }
        out = static_cast<int>(v);
        return true;
    }

    void plain(std::string_view s) { pending_ += s; }

    void flush_plain() {
        if (pending_.empty()) return;
        segments_.push_back(GroundedText::plain(std::move(pending_)));
        pending_.clear();
    }

    void push(Segment seg) {
        flush_plain();
        segments_.push_back(std::move(seg));
    }

    void defect(DefectKind k, std::size_t pos) { defects_.push_back({k, pos}); }

    std::string_view raw_;
    ParseOptions opts_;
    std::vector<Segment> segments_;
    std::vector<FormatDefect> defects_;
    std::string pending_;
};

} // namespace

bool GroundedText::has_box() const {
    for (const Segment& s : segments) {
        if (s.kind == SegmentKind::Grounded && !s.boxes.empty()) return true;
    }
    return false;
}

const char* defect_kind_name(DefectKind k) {
    switch (k) {
        case DefectKind::UnclosedTag: return "UnclosedTag";
        case DefectKind::BadArity: return "BadArity";
        case DefectKind::NonNumeric: return "NonNumeric";
        case DefectKind::OutOfRange: return "OutOfRange";
        case DefectKind::OrphanBBox: return "OrphanBBox";
        case DefectKind::NullBBox: return "NullBBox";
        case DefectKind::NestedTag: return "NestedTag";
    }
    return "Unknown";
}

std::optional<DefectKind> defect_kind_from_name(std::string_view name) {
    for (DefectKind k : {DefectKind::UnclosedTag, DefectKind::BadArity, DefectKind::NonNumeric,
                         DefectKind::OutOfRange, DefectKind::OrphanBBox, DefectKind::NullBBox,
                         DefectKind::NestedTag}) {
        if (name == defect_kind_name(k)) return k;
    }
    return std::nullopt;
}

ParseResult parse(std::string_view raw, const ParseOptions& opts) {
    return Parser(raw, opts).run();
}

std::string serialize_box(const QuantBox& b) {
    std::string s;
    s += kBoxOpen;
    s += std::to_string(b.x1);
    s += ',';
    s += std::to_string(b.y1);
    s += ',';
    s += std::to_string(b.x2);
    s += ',';
    s += std::to_string(b.y2);
    s += kBoxClose;
    return s;
}

std::string serialize(const GroundedText& doc) {
    std::string out;
    for (const Segment& s : doc.segments) {
        if (s.kind == SegmentKind::Plain) {
            out += s.text;
            continue;
        }
        if (s.boxes.size() != 1) {
            throw std::invalid_argument("grounded segment must carry exactly one box to serialize; degrade boxless spans first");
        }
        out += kOcrOpen;
        out += s.text;
        out += kOcrClose;
        out += serialize_box(s.boxes[0]);
    }
    return out;
}

std::string strip_grounding(const GroundedText& doc) {
    std::string out;
    for (const Segment& s : doc.segments) out += s.text;
    return out;
}

GroundedText coalesce(const GroundedText& doc) {
    GroundedText out;
    for (const Segment& s : doc.segments) {
        if (s.kind == SegmentKind::Plain) {
            if (s.text.empty()) continue;
            if (!out.segments.empty() && out.segments.back().kind == SegmentKind::Plain) {
                out.segments.back().text += s.text;
                continue;
            }
        }
        out.segments.push_back(s);
    }
    return out;
}

GroundedText degrade_null(const GroundedText& doc) {
    GroundedText tmp;
    for (const Segment& s : doc.segments) {
        if (s.kind == SegmentKind::Grounded && s.boxes.empty()) {
            tmp.segments.push_back(GroundedText::plain(s.text));
        } else {
            tmp.segments.push_back(s);
        }
    }
    return coalesce(tmp);
}

std::vector<std::pair<std::string, BBox>> extract_spans(const GroundedText& doc) {
    std::vector<std::pair<std::string, BBox>> out;
    for (const Segment& s : doc.segments) {
        if (s.kind != SegmentKind::Grounded) continue;
        for (const QuantBox& b : s.boxes) out.emplace_back(s.text, dequantize(b));
    }
    return out;
}

} // namespace docground
