#pragma once

#include <cstdint>

namespace docground {

// Axis-aligned box in normalized page coordinates: 0 <= x1 <= x2 <= 1,
// 0 <= y1 <= y2 <= 1. Origin is the top-left corner of the page.
struct BBox {
    double x1 = 0.0;
    double y1 = 0.0;
    double x2 = 0.0;
    double y2 = 0.0;

    bool valid() const;
    double width() const { return x2 - x1; }
    double height() const { return y2 - y1; }
    double area() const { return width() * height(); }
    double cx() const { return 0.5 * (x1 + x2); }
    double cy() const { return 0.5 * (y1 + y2); }
    bool contains(double px, double py) const {
        return px >= x1 && px <= x2 && py >= y1 && py <= y2;
    }

    bool operator==(const BBox&) const = default;
};

// Box on the 1000-bin integer grid used by the text markup: each coordinate
// is a bin index in [0, 999].
struct QuantBox {
    int x1 = 0;
    int y1 = 0;
    int x2 = 0;
    int y2 = 0;

    bool valid() const;

    bool operator==(const QuantBox&) const = default;
};

double intersection_area(const BBox& a, const BBox& b);
BBox union_box(const BBox& a, const BBox& b);

// Intersection over union. Degenerate (zero-area) operands score 0 even when
// the boxes coincide, and an all-degenerate union also scores 0.
double iou(const BBox& a, const BBox& b);

// Coordinate -> bin index: min(999, floor(c * 1000)). Exactly 1.0 lands in
// the last bin instead of overflowing.
int quantize_coord(double c);
QuantBox quantize(const BBox& b);

// Bin index -> bin center (q + 0.5) / 1000, so quantize(dequantize(q)) == q.
double dequantize_coord(int q);
BBox dequantize(const QuantBox& q);

} // namespace docground
