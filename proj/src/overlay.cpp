#include "needle/overlay.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <utility>

#include "needle/geometry.hpp"

namespace needle {

namespace {

void put(ImageRgb& img, int x, int y, const Rgb& c) {
    if (!img.in_bounds(x, y)) return;
    std::uint8_t* p = img.px(x, y);
    p[0] = c[0];
    p[1] = c[1];
    p[2] = c[2];
}

void hline(ImageRgb& img, int x0, int x1, int y, const Rgb& c) {
    if (x0 > x1) std::swap(x0, x1);
    for (int x = x0; x <= x1; ++x) put(img, x, y, c);
}

void vline(ImageRgb& img, int x, int y0, int y1, const Rgb& c) {
    if (y0 > y1) std::swap(y0, y1);
    for (int y = y0; y <= y1; ++y) put(img, x, y, c);
}

int px(double v) { return static_cast<int>(std::lround(v)); }

// Classic 5x7 glyphs, one byte per column, bit 0 = top row.
struct Glyph {
    char ch;
    std::uint8_t cols[5];
};

constexpr Glyph kFont[] = {
    {' ', {0x00, 0x00, 0x00, 0x00, 0x00}}, {'-', {0x08, 0x08, 0x08, 0x08, 0x08}},
    {'.', {0x00, 0x60, 0x60, 0x00, 0x00}}, {',', {0x00, 0x50, 0x30, 0x00, 0x00}},
    {'=', {0x14, 0x14, 0x14, 0x14, 0x14}}, {'(', {0x00, 0x1C, 0x22, 0x41, 0x00}},
    {')', {0x00, 0x41, 0x22, 0x1C, 0x00}}, {'+', {0x08, 0x08, 0x3E, 0x08, 0x08}},
    {'0', {0x3E, 0x51, 0x49, 0x45, 0x3E}}, {'1', {0x00, 0x42, 0x7F, 0x40, 0x00}},
    {'2', {0x42, 0x61, 0x51, 0x49, 0x46}}, {'3', {0x21, 0x41, 0x45, 0x4B, 0x31}},
    {'4', {0x18, 0x14, 0x12, 0x7F, 0x10}}, {'5', {0x27, 0x45, 0x45, 0x45, 0x39}},
    {'6', {0x3C, 0x4A, 0x49, 0x49, 0x30}}, {'7', {0x01, 0x71, 0x09, 0x05, 0x03}},
    {'8', {0x36, 0x49, 0x49, 0x49, 0x36}}, {'9', {0x06, 0x49, 0x49, 0x29, 0x1E}},
    {'A', {0x7E, 0x11, 0x11, 0x11, 0x7E}}, {'B', {0x7F, 0x49, 0x49, 0x49, 0x36}},
    {'C', {0x3E, 0x41, 0x41, 0x41, 0x22}}, {'D', {0x7F, 0x41, 0x41, 0x22, 0x1C}},
    {'E', {0x7F, 0x49, 0x49, 0x49, 0x41}}, {'F', {0x7F, 0x09, 0x09, 0x09, 0x01}},
    {'G', {0x3E, 0x41, 0x49, 0x49, 0x7A}}, {'H', {0x7F, 0x08, 0x08, 0x08, 0x7F}},
    {'I', {0x00, 0x41, 0x7F, 0x41, 0x00}}, {'J', {0x20, 0x40, 0x41, 0x3F, 0x01}},
    {'K', {0x7F, 0x08, 0x14, 0x22, 0x41}}, {'L', {0x7F, 0x40, 0x40, 0x40, 0x40}},
    {'M', {0x7F, 0x02, 0x0C, 0x02, 0x7F}}, {'N', {0x7F, 0x04, 0x08, 0x10, 0x7F}},
    {'O', {0x3E, 0x41, 0x41, 0x41, 0x3E}}, {'P', {0x7F, 0x09, 0x09, 0x09, 0x06}},
    {'Q', {0x3E, 0x41, 0x51, 0x21, 0x5E}}, {'R', {0x7F, 0x09, 0x19, 0x29, 0x46}},
    {'S', {0x46, 0x49, 0x49, 0x49, 0x31}}, {'T', {0x01, 0x01, 0x7F, 0x01, 0x01}},
    {'U', {0x3F, 0x40, 0x40, 0x40, 0x3F}}, {'V', {0x1F, 0x20, 0x40, 0x20, 0x1F}},
    {'W', {0x7F, 0x20, 0x18, 0x20, 0x7F}}, {'X', {0x63, 0x14, 0x08, 0x14, 0x63}},
    {'Y', {0x07, 0x08, 0x70, 0x08, 0x07}}, {'Z', {0x61, 0x51, 0x49, 0x45, 0x43}},
};

constexpr Glyph kUnknown = {'?', {0x7F, 0x41, 0x41, 0x41, 0x7F}};

const Glyph& glyph_for(char ch) {
    for (const auto& g : kFont)
        if (g.ch == ch) return g;
    return kUnknown;
}

}  // namespace

void draw_box_outline(ImageRgb& img, const BoundingBox& box, const Rgb& color) {
    validate_box(box);
    const int x0 = px(box.x_min);
    const int y0 = px(box.y_min);
    const int x1 = px(box.x_max);
    const int y1 = px(box.y_max);
    hline(img, x0, x1, y0, color);
    hline(img, x0, x1, y1, color);
    vline(img, x0, y0, y1, color);
    vline(img, x1, y0, y1, color);
}

void draw_cross(ImageRgb& img, const PixelPoint& p, int half_size, const Rgb& color) {
    const int cx = px(p.x);
    const int cy = px(p.y);
    hline(img, cx - half_size, cx + half_size, cy, color);
    vline(img, cx, cy - half_size, cy + half_size, color);
}

void draw_disc(ImageRgb& img, const PixelPoint& p, int radius, const Rgb& color) {
    const int cx = px(p.x);
    const int cy = px(p.y);
    for (int dy = -radius; dy <= radius; ++dy)
        for (int dx = -radius; dx <= radius; ++dx)
            if (dx * dx + dy * dy <= radius * radius) put(img, cx + dx, cy + dy, color);
}

void draw_text(ImageRgb& img, int x, int y, const std::string& text, const Rgb& color,
               int scale) {
    if (scale < 1) scale = 1;
    int pen = x;
    for (char ch : text) {
        const Glyph& g = glyph_for(ch);
        for (int col = 0; col < 5; ++col) {
            for (int row = 0; row < 7; ++row) {
                if (!(g.cols[col] >> row & 1)) continue;
                for (int sy = 0; sy < scale; ++sy)
                    for (int sx = 0; sx < scale; ++sx)
                        put(img, pen + col * scale + sx, y + row * scale + sy, color);
            }
        }
        pen += 6 * scale;  // 5 columns + 1 gap
    }
}

ImageRgb render_overlay(const ImageGray& img, const std::optional<Detection>& det) {
    ImageRgb out = to_rgb(img);
    const Rgb box_color{0, 220, 0};
    const Rgb tip_color{235, 40, 40};
    const Rgb mid_color{60, 100, 255};
    const Rgb text_color{255, 230, 40};

    if (!det) {
        draw_text(out, 4, 4, "NO DETECTION", text_color, 2);
        return out;
    }
    validate_detection(*det);
    const NeedlePose pose = pose_from_detection(det->box, det->tip_class);
    draw_box_outline(out, det->box, box_color);
    draw_cross(out, pose.tip, 5, tip_color);
    draw_disc(out, pose.midpoint, 2, mid_color);

    char tag[64];
    std::snprintf(tag, sizeof tag, "%s A=%.2f C=%.2f", to_string(det->tip_class),
                  pose.angle_deg, det->confidence);
    // tag above the box when it fits, else below
    const int tx = std::max(2, px(det->box.x_min));
    int ty = px(det->box.y_min) - 10;
    if (ty < 2) ty = std::min(out.height - 9, px(det->box.y_max) + 3);
    draw_text(out, tx, ty, tag, text_color, 1);
    return out;
}

}  // namespace needle
