#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace docground {

// RGBA8, row-major, straight (non-premultiplied) alpha.
struct Raster {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels; // width * height * 4

    static Raster blank(int w, int h, std::uint8_t r, std::uint8_t g, std::uint8_t b, std::uint8_t a);

    std::uint8_t* at(int x, int y) { return pixels.data() + (static_cast<std::size_t>(y) * width + x) * 4; }
    const std::uint8_t* at(int x, int y) const { return pixels.data() + (static_cast<std::size_t>(y) * width + x) * 4; }

    bool operator==(const Raster&) const = default;
};

// Both throw IoError on failure. Files are always 8-bit RGBA; reads convert
// palette/gray/16-bit inputs.
void write_png(const std::string& path, const Raster& img);
Raster read_png(const std::string& path);

} // namespace docground
