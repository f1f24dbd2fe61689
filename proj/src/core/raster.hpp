#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "core/geometry.hpp"
#include "core/png_io.hpp"

namespace docground {

struct Color {
    std::uint8_t r = 0, g = 0, b = 0, a = 255;
    bool operator==(const Color&) const = default;
};

enum class ShapeKind { Rect, Text };

// One renderable element. Rects fill w x h pixels at (x, y). Text is drawn
// with the built-in 5x7 dot-matrix face: each glyph cell is 6*scale wide
// (5 ink columns plus a spacing column) and 7*scale tall.
struct Layer {
    std::string id;
    ShapeKind kind = ShapeKind::Rect;
    int x = 0, y = 0;
    int w = 0, h = 0;       // rect only
    std::string text;       // text only
    int scale = 1;          // text only
    Color fill;
    double opacity = 1.0;   // layer-level multiplier on fill.a
};

struct Scene {
    int width = 0, height = 0;
    Color background{255, 255, 255, 255};
    std::vector<Layer> layers; // painted back to front, in order
};

// Throws SchemaError on malformed input.
Scene scene_from_json(const nlohmann::json& j);
nlohmann::ordered_json scene_to_json(const Scene& s);
Scene load_scene(const std::string& path);
void save_scene(const Scene& s, const std::string& path);

// Source-over compositing with straight alpha, done in double precision and
// rounded once per channel. Throws std::invalid_argument on a degenerate
// canvas or duplicate layer ids.
Raster render_scene(const Scene& s);

// Pixel rectangle, half-open: x in [x1, x2), y in [y1, y2).
struct PixelBox {
    int x1 = 0, y1 = 0, x2 = 0, y2 = 0;
    bool operator==(const PixelBox&) const = default;
};

// Tight bounding box of pixels whose max channel delta exceeds tol.
// nullopt when the images agree everywhere. Throws std::invalid_argument on
// dimension mismatch.
std::optional<PixelBox> diff_bbox(const Raster& a, const Raster& b, int tol = 0);

// Where a layer would deposit ink: the rect extent, or the glyph dot extent
// for text (trailing spaces contribute nothing). Clipped to the canvas;
// nullopt if nothing lands on it.
std::optional<PixelBox> layer_ink_extent(const Scene& s, std::size_t layer_index);

struct LayerBox {
    std::string id;
    std::optional<BBox> box; // nullopt: layer is invisible in the composite
};

// How the variant render alters the probed layer: force its opacity to 0, or
// invert its fill color. Opacity is canonical; color toggling can miss
// mid-gray fills whose inverse blends to the same bytes.
enum class ToggleMode { Opacity, Color };
std::optional<ToggleMode> toggle_mode_from_name(std::string_view name);
const char* toggle_mode_name(ToggleMode m);

// Re-render based box recovery: render the scene once, then re-render with
// one layer toggled and take the diff. A layer whose toggle changes nothing
// is reported with box == nullopt (fully occluded, blank, or off-canvas).
// Boxes are normalized by canvas size from half-open pixel rects, so they
// are exact for axis-aligned content.
std::vector<LayerBox> extract_layer_boxes(const Scene& s, int tol = 0, ToggleMode mode = ToggleMode::Opacity);

BBox normalize_pixel_box(const PixelBox& p, int width, int height);

// Non-overlapping synthetic scene: white background, opaque rect and text
// layers laid out by rejection sampling. Deterministic in the seed.
Scene random_scene(std::uint64_t seed, int width, int height, int layer_count);

} // namespace docground
