#pragma once

#include <array>
#include <optional>
#include <string>

#include "needle/detection.hpp"
#include "needle/image.hpp"

namespace needle {

using Rgb = std::array<std::uint8_t, 3>;

// Primitive drawing helpers; everything clips to the canvas.
void draw_box_outline(ImageRgb& img, const BoundingBox& box, const Rgb& color);
void draw_cross(ImageRgb& img, const PixelPoint& p, int half_size, const Rgb& color);
void draw_disc(ImageRgb& img, const PixelPoint& p, int radius, const Rgb& color);

/// 5x7 bitmap text (digits, uppercase letters, basic punctuation), scaled by
/// an integer factor. Unknown characters render as a hollow box.
void draw_text(ImageRgb& img, int x, int y, const std::string& text, const Rgb& color,
               int scale = 1);

/// Annotated view of a detection: box outline, tip cross, midpoint disc and a
/// "CLASS A=<angle> C=<conf>" tag; a bare image with a "NO DETECTION" tag
/// when absent. Output is deterministic for fixed inputs.
ImageRgb render_overlay(const ImageGray& img, const std::optional<Detection>& det);

}  // namespace needle
