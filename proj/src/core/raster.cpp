#include "core/raster.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "core/error.hpp"
#include "core/rng.hpp"

namespace docground {

namespace {

// 5x7 dot-matrix glyphs; row bytes use bit 4 for the leftmost column.
struct Glyph {
    char c;
    std::uint8_t rows[7];
};

constexpr Glyph kGlyphs[] = {
    {' ', {0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00}},
    {'A', {0x0E, 0x11, 0x11, 0x1F, 0x11, 0x11, 0x11}},
    {'B', {0x1E, 0x11, 0x11, 0x1E, 0x11, 0x11, 0x1E}},
    {'C', {0x0E, 0x11, 0x10, 0x10, 0x10, 0x11, 0x0E}},
    {'D', {0x1E, 0x11, 0x11, 0x11, 0x11, 0x11, 0x1E}},
    {'E', {0x1F, 0x10, 0x10, 0x1E, 0x10, 0x10, 0x1F}},
    {'F', {0x1F, 0x10, 0x10, 0x1E, 0x10, 0x10, 0x10}},
    {'G', {0x0E, 0x11, 0x10, 0x17, 0x11, 0x11, 0x0F}},
    {'H', {0x11, 0x11, 0x11, 0x1F, 0x11, 0x11, 0x11}},
    {'I', {0x0E, 0x04, 0x04, 0x04, 0x04, 0x04, 0x0E}},
    {'J', {0x01, 0x01, 0x01, 0x01, 0x11, 0x11, 0x0E}},
    {'K', {0x11, 0x12, 0x14, 0x18, 0x14, 0x12, 0x11}},
    {'L', {0x10, 0x10, 0x10, 0x10, 0x10, 0x10, 0x1F}},
    {'M', {0x11, 0x1B, 0x15, 0x15, 0x11, 0x11, 0x11}},
    {'N', {0x11, 0x19, 0x15, 0x13, 0x11, 0x11, 0x11}},
    {'O', {0x0E, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0E}},
    {'P', {0x1E, 0x11, 0x11, 0x1E, 0x10, 0x10, 0x10}},
    {'Q', {0x0E, 0x11, 0x11, 0x11, 0x15, 0x12, 0x0D}},
    {'R', {0x1E, 0x11, 0x11, 0x1E, 0x14, 0x12, 0x11}},
    {'S', {0x0F, 0x10, 0x10, 0x0E, 0x01, 0x01, 0x1E}},
    {'T', {0x1F, 0x04, 0x04, 0x04, 0x04, 0x04, 0x04}},
    {'U', {0x11, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0E}},
    {'V', {0x11, 0x11, 0x11, 0x11, 0x11, 0x0A, 0x04}},
    {'W', {0x11, 0x11, 0x11, 0x15, 0x15, 0x1B, 0x11}},
    {'X', {0x11, 0x11, 0x0A, 0x04, 0x0A, 0x11, 0x11}},
    {'Y', {0x11, 0x11, 0x0A, 0x04, 0x04, 0x04, 0x04}},
    {'Z', {0x1F, 0x01, 0x02, 0x04, 0x08, 0x10, 0x1F}},
    {'0', {0x0E, 0x11, 0x13, 0x15, 0x19, 0x11, 0x0E}},
    {'1', {0x04, 0x0C, 0x04, 0x04, 0x04, 0x04, 0x0E}},
    {'2', {0x0E, 0x11, 0x01, 0x02, 0x04, 0x08, 0x1F}},
    {'3', {0x1F, 0x02, 0x04, 0x02, 0x01, 0x11, 0x0E}},
    {'4', {0x02, 0x06, 0x0A, 0x12, 0x1F, 0x02, 0x02}},
    {'5', {0x1F, 0x10, 0x1E, 0x01, 0x01, 0x11, 0x0E}},
    {'6', {0x06, 0x08, 0x10, 0x1E, 0x11, 0x11, 0x0E}},
    {'7', {0x1F, 0x01, 0x02, 0x04, 0x08, 0x08, 0x08}},
    {'8', {0x0E, 0x11, 0x11, 0x0E, 0x11, 0x11, 0x0E}},
    {'9', {0x0E, 0x11, 0x11, 0x0F, 0x01, 0x02, 0x0C}},
    {'.', {0x00, 0x00, 0x00, 0x00, 0x00, 0x0C, 0x0C}},
    {',', {0x00, 0x00, 0x00, 0x00, 0x0C, 0x04, 0x08}},
    {'-', {0x00, 0x00, 0x00, 0x1F, 0x00, 0x00, 0x00}},
    {':', {0x00, 0x0C, 0x0C, 0x00, 0x0C, 0x0C, 0x00}},
    {'%', {0x19, 0x19, 0x02, 0x04, 0x08, 0x13, 0x13}},
    {'$', {0x04, 0x0F, 0x14, 0x0E, 0x05, 0x1E, 0x04}},
    {'/', {0x01, 0x01, 0x02, 0x04, 0x08, 0x10, 0x10}},
    {'(', {0x02, 0x04, 0x08, 0x08, 0x08, 0x04, 0x02}},
    {')', {0x08, 0x04, 0x02, 0x02, 0x02, 0x04, 0x08}},
    {'+', {0x00, 0x04, 0x04, 0x1F, 0x04, 0x04, 0x00}},
    {'!', {0x04, 0x04, 0x04, 0x04, 0x04, 0x00, 0x04}},
    {'?', {0x0E, 0x11, 0x01, 0x02, 0x04, 0x00, 0x04}},
    {'=', {0x00, 0x00, 0x1F, 0x00, 0x1F, 0x00, 0x00}},
};

const std::uint8_t* glyph_rows(char c) {
    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
    for (const Glyph& g : kGlyphs) {
        if (g.c == c) return g.rows;
    }
    static constexpr std::uint8_t kBlock[7] = {0x1F, 0x1F, 0x1F, 0x1F, 0x1F, 0x1F, 0x1F};
    return kBlock;
}

constexpr int kGlyphCols = 5;
constexpr int kGlyphRows = 7;
constexpr int kGlyphAdvance = 6; // 5 ink columns + 1 spacing column

// Calls fn(px, py) for every ink pixel of the layer, unclipped.
template <typename Fn>
void for_each_ink_pixel(const Layer& l, Fn&& fn) {
    if (l.kind == ShapeKind::Rect) {
        for (int y = l.y; y < l.y + l.h; ++y) {
            for (int x = l.x; x < l.x + l.w; ++x) fn(x, y);
        }
        return;
    }
    int s = std::max(1, l.scale);
    for (std::size_t ci = 0; ci < l.text.size(); ++ci) {
        const std::uint8_t* rows = glyph_rows(l.text[ci]);
        int gx = l.x + static_cast<int>(ci) * kGlyphAdvance * s;
        for (int r = 0; r < kGlyphRows; ++r) {
            for (int c = 0; c < kGlyphCols; ++c) {
                if (!(rows[r] & (1 << (kGlyphCols - 1 - c)))) continue;
                for (int dy = 0; dy < s; ++dy) {
                    for (int dx = 0; dx < s; ++dx) fn(gx + c * s + dx, l.y + r * s + dy);
                }
            }
        }
    }
}

void blend_pixel(Raster& img, int x, int y, const Color& fill, double opacity) {
    if (x < 0 || y < 0 || x >= img.width || y >= img.height) return;
    std::uint8_t* px = img.at(x, y);
    double sa = (fill.a / 255.0) * opacity;
    double da = px[3] / 255.0;
    double oa = sa + da * (1.0 - sa);
    double src[3] = {fill.r / 255.0, fill.g / 255.0, fill.b / 255.0};
    for (int c = 0; c < 3; ++c) {
        double dc = px[c] / 255.0;
        double oc = oa > 0.0 ? (src[c] * sa + dc * da * (1.0 - sa)) / oa : 0.0;
        px[c] = static_cast<std::uint8_t>(std::lround(oc * 255.0));
    }
    px[3] = static_cast<std::uint8_t>(std::lround(oa * 255.0));
}

Color color_from_json(const nlohmann::json& j, const std::string& where) {
    if (!j.is_array() || (j.size() != 3 && j.size() != 4)) {
        throw SchemaError(0, where, "color must be [r,g,b] or [r,g,b,a]");
    }
    Color c;
    int v[4] = {0, 0, 0, 255};
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number_integer()) throw SchemaError(0, where, "color channels must be integers");
        v[i] = j[i].get<int>();
        if (v[i] < 0 || v[i] > 255) throw SchemaError(0, where, "color channel outside [0,255]");
    }
    c.r = static_cast<std::uint8_t>(v[0]);
    c.g = static_cast<std::uint8_t>(v[1]);
    c.b = static_cast<std::uint8_t>(v[2]);
    c.a = static_cast<std::uint8_t>(v[3]);
    return c;
}

nlohmann::ordered_json color_to_json(const Color& c) {
    return nlohmann::ordered_json::array({c.r, c.g, c.b, c.a});
}

int int_field(const nlohmann::json& j, const char* key, const std::string& where) {
    if (!j.contains(key) || !j[key].is_number_integer()) {
        throw SchemaError(0, where + "." + key, "required integer field");
    }
    return j[key].get<int>();
}

} // namespace

Scene scene_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw SchemaError(0, "", "scene must be an object");
    Scene s;
    s.width = int_field(j, "width", "scene");
    s.height = int_field(j, "height", "scene");
    if (j.contains("background")) s.background = color_from_json(j["background"], "scene.background");
    if (j.contains("layers")) {
        if (!j["layers"].is_array()) throw SchemaError(0, "scene.layers", "must be an array");
        std::size_t idx = 0;
        for (const auto& lj : j["layers"]) {
            std::string where = "scene.layers[" + std::to_string(idx++) + "]";
            if (!lj.is_object()) throw SchemaError(0, where, "layer must be an object");
            Layer l;
            if (!lj.contains("id") || !lj["id"].is_string()) throw SchemaError(0, where + ".id", "required string field");
            l.id = lj["id"].get<std::string>();
            std::string kind = lj.value("kind", "rect");
            if (kind == "rect") {
                l.kind = ShapeKind::Rect;
                l.w = int_field(lj, "w", where);
                l.h = int_field(lj, "h", where);
                if (l.w < 0 || l.h < 0) throw SchemaError(0, where, "rect size must be non-negative");
            } else if (kind == "text") {
                l.kind = ShapeKind::Text;
                if (!lj.contains("text") || !lj["text"].is_string()) throw SchemaError(0, where + ".text", "required string field");
                l.text = lj["text"].get<std::string>();
                l.scale = lj.value("scale", 1);
                if (l.scale < 1) throw SchemaError(0, where + ".scale", "must be >= 1");
            } else {
                throw SchemaError(0, where + ".kind", "unknown kind '" + kind + "'");
            }
            l.x = int_field(lj, "x", where);
            l.y = int_field(lj, "y", where);
            if (lj.contains("fill")) l.fill = color_from_json(lj["fill"], where + ".fill");
            if (lj.contains("opacity")) {
                if (!lj["opacity"].is_number()) throw SchemaError(0, where + ".opacity", "must be a number");
                l.opacity = lj["opacity"].get<double>();
                if (l.opacity < 0.0 || l.opacity > 1.0) throw SchemaError(0, where + ".opacity", "must be in [0,1]");
            }
            s.layers.push_back(std::move(l));
        }
    }
    return s;
}

nlohmann::ordered_json scene_to_json(const Scene& s) {
    nlohmann::ordered_json j;
    j["width"] = s.width;
    j["height"] = s.height;
    j["background"] = color_to_json(s.background);
    j["layers"] = nlohmann::ordered_json::array();
    for (const Layer& l : s.layers) {
        nlohmann::ordered_json lj;
        lj["id"] = l.id;
        lj["kind"] = l.kind == ShapeKind::Rect ? "rect" : "text";
        lj["x"] = l.x;
        lj["y"] = l.y;
        if (l.kind == ShapeKind::Rect) {
            lj["w"] = l.w;
            lj["h"] = l.h;
        } else {
            lj["text"] = l.text;
            lj["scale"] = l.scale;
        }
        lj["fill"] = color_to_json(l.fill);
        lj["opacity"] = l.opacity;
        j["layers"].push_back(std::move(lj));
    }
    return j;
}

Scene load_scene(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(0, path, std::string("invalid json: ") + e.what());
    }
    return scene_from_json(j);
}

void save_scene(const Scene& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << scene_to_json(s).dump(2) << '\n';
    if (!out) throw IoError("write failed: " + path);
}

Raster render_scene(const Scene& s) {
    if (s.width <= 0 || s.height <= 0) throw std::invalid_argument("render_scene: canvas must be at least 1x1");
    std::set<std::string> ids;
    for (const Layer& l : s.layers) {
        if (!ids.insert(l.id).second) throw std::invalid_argument("render_scene: duplicate layer id '" + l.id + "'");
    }
    Raster img = Raster::blank(s.width, s.height, s.background.r, s.background.g, s.background.b, s.background.a);
    for (const Layer& l : s.layers) {
        if (l.opacity <= 0.0) continue;
        for_each_ink_pixel(l, [&](int x, int y) { blend_pixel(img, x, y, l.fill, l.opacity); });
    }
    return img;
}

std::optional<PixelBox> diff_bbox(const Raster& a, const Raster& b, int tol) {
    if (a.width != b.width || a.height != b.height) {
        throw std::invalid_argument("diff_bbox: image dimensions differ");
    }
    int x1 = a.width, y1 = a.height, x2 = -1, y2 = -1;
    for (int y = 0; y < a.height; ++y) {
        const std::uint8_t* pa = a.at(0, y);
        const std::uint8_t* pb = b.at(0, y);
        for (int x = 0; x < a.width; ++x, pa += 4, pb += 4) {
            int d = 0;
            for (int c = 0; c < 4; ++c) d = std::max(d, std::abs(int(pa[c]) - int(pb[c])));
            if (d > tol) {
                x1 = std::min(x1, x);
                y1 = std::min(y1, y);
                x2 = std::max(x2, x);
                y2 = std::max(y2, y);
            }
        }
    }
    if (x2 < 0) return std::nullopt;
    return PixelBox{x1, y1, x2 + 1, y2 + 1};
}

std::optional<PixelBox> layer_ink_extent(const Scene& s, std::size_t layer_index) {
    const Layer& l = s.layers.at(layer_index);
    int x1 = s.width, y1 = s.height, x2 = -1, y2 = -1;
    for_each_ink_pixel(l, [&](int x, int y) {
        if (x < 0 || y < 0 || x >= s.width || y >= s.height) return;
        x1 = std::min(x1, x);
        y1 = std::min(y1, y);
        x2 = std::max(x2, x);
        y2 = std::max(y2, y);
    });
    if (x2 < 0) return std::nullopt;
    return PixelBox{x1, y1, x2 + 1, y2 + 1};
}

BBox normalize_pixel_box(const PixelBox& p, int width, int height) {
    return {static_cast<double>(p.x1) / width, static_cast<double>(p.y1) / height,
            static_cast<double>(p.x2) / width, static_cast<double>(p.y2) / height};
}

std::optional<ToggleMode> toggle_mode_from_name(std::string_view name) {
    if (name == "opacity") return ToggleMode::Opacity;
    if (name == "color") return ToggleMode::Color;
    return std::nullopt;
}

const char* toggle_mode_name(ToggleMode m) {
    return m == ToggleMode::Opacity ? "opacity" : "color";
}

std::vector<LayerBox> extract_layer_boxes(const Scene& s, int tol, ToggleMode mode) {
    Raster base = render_scene(s);
    std::vector<LayerBox> out;
    out.reserve(s.layers.size());
    for (std::size_t i = 0; i < s.layers.size(); ++i) {
        Scene variant = s;
        Layer& probe = variant.layers[i];
        if (mode == ToggleMode::Opacity) {
            probe.opacity = 0.0;
        } else {
            probe.fill.r = static_cast<std::uint8_t>(255 - probe.fill.r);
            probe.fill.g = static_cast<std::uint8_t>(255 - probe.fill.g);
            probe.fill.b = static_cast<std::uint8_t>(255 - probe.fill.b);
        }
        Raster re = render_scene(variant);
        auto pb = diff_bbox(base, re, tol);
        LayerBox lb;
        lb.id = s.layers[i].id;
        if (pb) lb.box = normalize_pixel_box(*pb, s.width, s.height);
        out.push_back(std::move(lb));
    }
    return out;
}

Scene random_scene(std::uint64_t seed, int width, int height, int layer_count) {
    if (width < 40 || height < 40) throw std::invalid_argument("random_scene: canvas too small");
    if (layer_count < 0) throw std::invalid_argument("random_scene: negative layer count");
    Rng rng(seed);
    Scene s;
    s.width = width;
    s.height = height;

    static const char* kWords[] = {"TOTAL", "REVENUE", "Q3", "2024", "NET", "GROWTH", "12.5%", "ITEM", "COST", "SALES"};
    static constexpr Color kFills[] = {
        {20, 20, 20, 255}, {180, 30, 30, 255}, {30, 90, 170, 255}, {10, 120, 60, 255}, {150, 90, 10, 255},
    };

    std::vector<PixelBox> taken;
    auto overlaps = [&](const PixelBox& b) {
        for (const PixelBox& t : taken) {
            if (b.x1 < t.x2 && t.x1 < b.x2 && b.y1 < t.y2 && t.y1 < b.y2) return true;
        }
        return false;
    };

    int placed = 0;
    int attempts = 0;
    while (placed < layer_count && attempts < layer_count * 200) {
        ++attempts;
        Layer l;
        bool is_text = rng.chance(0.5);
        int w, h;
        if (is_text) {
            l.kind = ShapeKind::Text;
            l.text = kWords[rng.below(std::size(kWords))];
            l.scale = rng.range(1, 2);
            w = static_cast<int>(l.text.size()) * 6 * l.scale;
            h = 7 * l.scale;
        } else {
            l.kind = ShapeKind::Rect;
            l.w = rng.range(6, std::max(7, width / 5));
            l.h = rng.range(4, std::max(5, height / 6));
            w = l.w;
            h = l.h;
        }
        if (w + 2 >= width || h + 2 >= height) continue;
        l.x = rng.range(1, width - w - 1);
        l.y = rng.range(1, height - h - 1);
        PixelBox cell{l.x - 1, l.y - 1, l.x + w + 1, l.y + h + 1};
        if (overlaps(cell)) continue;
        taken.push_back(cell);
        l.fill = kFills[rng.below(std::size(kFills))];
        l.opacity = 1.0;
        l.id = "L" + std::to_string(placed);
        s.layers.push_back(std::move(l));
        ++placed;
    }
    return s;
}

} // namespace docground
