#pragma once

#include <cassert>
#include <cstdint>
#include <filesystem>
#include <vector>

namespace needle {

/// 8-bit grayscale raster, row-major.
struct ImageGray {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> samples;

    ImageGray() = default;
    ImageGray(int w, int h, std::uint8_t fill = 0);

    bool in_bounds(int x, int y) const {
        return x >= 0 && x < width && y >= 0 && y < height;
    }
    std::uint8_t& at(int x, int y) {
        assert(in_bounds(x, y));
        return samples[static_cast<std::size_t>(y) * width + x];
    }
    std::uint8_t at(int x, int y) const {
        assert(in_bounds(x, y));
        return samples[static_cast<std::size_t>(y) * width + x];
    }
};

bool operator==(const ImageGray& a, const ImageGray& b);

/// 8-bit RGB raster, row-major interleaved.
struct ImageRgb {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> samples;

    ImageRgb() = default;
    ImageRgb(int w, int h);

    bool in_bounds(int x, int y) const {
        return x >= 0 && x < width && y >= 0 && y < height;
    }
    std::uint8_t* px(int x, int y) {
        assert(in_bounds(x, y));
        return samples.data() + (static_cast<std::size_t>(y) * width + x) * 3;
    }
};

ImageRgb to_rgb(const ImageGray& gray);

// Binary Netpbm, maxval 255. Readers accept any legal header whitespace and
// '#' comments; writers emit the canonical single-space header.
ImageGray read_pgm(const std::filesystem::path& path);
void write_pgm(const ImageGray& img, const std::filesystem::path& path);
ImageRgb read_ppm(const std::filesystem::path& path);
void write_ppm(const ImageRgb& img, const std::filesystem::path& path);

}  // namespace needle
