#include "core/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace docground {

bool BBox::valid() const {
    return x1 >= 0.0 && y1 >= 0.0 && x2 <= 1.0 && y2 <= 1.0 && x1 <= x2 && y1 <= y2;
}

bool QuantBox::valid() const {
    return x1 >= 0 && y1 >= 0 && x2 <= 999 && y2 <= 999 && x1 <= x2 && y1 <= y2;
}

double intersection_area(const BBox& a, const BBox& b) {
    double w = std::min(a.x2, b.x2) - std::max(a.x1, b.x1);
    double h = std::min(a.y2, b.y2) - std::max(a.y1, b.y1);
    if (w <= 0.0 || h <= 0.0) return 0.0;
    return w * h;
}

BBox union_box(const BBox& a, const BBox& b) {
    return {std::min(a.x1, b.x1), std::min(a.y1, b.y1), std::max(a.x2, b.x2), std::max(a.y2, b.y2)};
}

double iou(const BBox& a, const BBox& b) {
    double inter = intersection_area(a, b);
    double uni = a.area() + b.area() - inter;
    if (uni <= 0.0) return 0.0;
    return inter / uni;
}

int quantize_coord(double c) {
    int q = static_cast<int>(std::floor(c * 1000.0));
    return std::clamp(q, 0, 999);
}

QuantBox quantize(const BBox& b) {
    return {quantize_coord(b.x1), quantize_coord(b.y1), quantize_coord(b.x2), quantize_coord(b.y2)};
}

double dequantize_coord(int q) {
    return (static_cast<double>(q) + 0.5) / 1000.0;
}

BBox dequantize(const QuantBox& q) {
    return {dequantize_coord(q.x1), dequantize_coord(q.y1), dequantize_coord(q.x2), dequantize_coord(q.y2)};
}

} // namespace docground
