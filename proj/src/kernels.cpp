#include "needle/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "needle/rng.hpp"

namespace needle::kernels {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Inverse-maps destination pixel (x,y) through a rotation by theta about the
// canvas center and bilinearly samples the source grid. Zero-area pixels are
// impossible here: ImageGray enforces positive dims.
inline std::uint8_t rotate_sample(const ImageGray& src, int x, int y, double cos_t,
                                  double sin_t, double cx, double cy, std::uint8_t fill) {
    const double dx = (x + 0.5) - cx;
    const double dy = (y + 0.5) - cy;
    // R(-theta) applied to the dest offset; forward R is clockwise in the
    // y-down raster frame.
    const double sx = cx + cos_t * dx + sin_t * dy;
    const double sy = cy - sin_t * dx + cos_t * dy;
    const double u = sx - 0.5;
    const double v = sy - 0.5;
    if (u < 0.0 || u > src.width - 1 || v < 0.0 || v > src.height - 1) return fill;
    const int x0 = static_cast<int>(u);
    const int y0 = static_cast<int>(v);
    const int x1 = std::min(x0 + 1, src.width - 1);
    const int y1 = std::min(y0 + 1, src.height - 1);
    const double fx = u - x0;
    const double fy = v - y0;
    const double top = src.at(x0, y0) * (1.0 - fx) + src.at(x1, y0) * fx;
    const double bot = src.at(x0, y1) * (1.0 - fx) + src.at(x1, y1) * fx;
    const double val = top * (1.0 - fy) + bot * fy;
    return static_cast<std::uint8_t>(std::lround(std::clamp(val, 0.0, 255.0)));
}

inline std::uint8_t noise_sample(const ImageGray& src, int idx, double sigma,
                                 std::uint64_t seed) {
    const double g = gaussian_at(seed, static_cast<std::uint64_t>(idx));
    const double val = src.samples[static_cast<std::size_t>(idx)] + sigma * g;
    const long r = std::lround(std::clamp(val, -0.5, 255.5));
    return static_cast<std::uint8_t>(std::clamp(r, 0L, 255L));
}

struct CapsuleFrame {
    double ax, ay, dx, dy, len2;
    double r0, dr;
    int x_lo, y_lo, x_hi, y_hi;  // clipped pixel bounds, inclusive
};

CapsuleFrame capsule_frame(const ImageGray& canvas, const TaperedCapsule& cap) {
    CapsuleFrame f{};
    f.ax = cap.x0;
    f.ay = cap.y0;
    f.dx = cap.x1 - cap.x0;
    f.dy = cap.y1 - cap.y0;
    f.len2 = f.dx * f.dx + f.dy * f.dy;
    f.r0 = cap.r0;
    f.dr = cap.r1 - cap.r0;
    const double pad = std::max(cap.r0, cap.r1) + 1.0;
    f.x_lo = std::max(0, static_cast<int>(std::floor(std::min(cap.x0, cap.x1) - pad)));
    f.y_lo = std::max(0, static_cast<int>(std::floor(std::min(cap.y0, cap.y1) - pad)));
    f.x_hi = std::min(canvas.width - 1,
                      static_cast<int>(std::ceil(std::max(cap.x0, cap.x1) + pad)));
    f.y_hi = std::min(canvas.height - 1,
                      static_cast<int>(std::ceil(std::max(cap.y0, cap.y1) + pad)));
    return f;
}

// 4x4 supersampled coverage of the capsule over pixel (x,y).
inline double capsule_coverage(const CapsuleFrame& f, int x, int y) {
    int hits = 0;
    for (int sy = 0; sy < 4; ++sy) {
        for (int sx = 0; sx < 4; ++sx) {
            const double px = x + (sx + 0.5) / 4.0;
            const double py = y + (sy + 0.5) / 4.0;
            double t = 0.0;
            if (f.len2 > 0.0) {
                t = ((px - f.ax) * f.dx + (py - f.ay) * f.dy) / f.len2;
                t = std::clamp(t, 0.0, 1.0);
            }
            const double qx = f.ax + t * f.dx;
            const double qy = f.ay + t * f.dy;
            const double dist2 =
                (px - qx) * (px - qx) + (py - qy) * (py - qy);
            const double r = f.r0 + f.dr * t;
            if (r > 0.0 && dist2 <= r * r) ++hits;
        }
    }
    return hits / 16.0;
}

inline std::uint8_t blend(std::uint8_t bg, std::uint8_t fg, double cov) {
    return static_cast<std::uint8_t>(std::lround(bg * (1.0 - cov) + fg * cov));
}

}  // namespace

ImageGray flip_h(const ImageGray& src) {
    ImageGray out(src.width, src.height);
#pragma omp parallel for
    for (int y = 0; y < src.height; ++y)
        for (int x = 0; x < src.width; ++x) out.at(x, y) = src.at(src.width - 1 - x, y);
    return out;
}

ImageGray flip_v(const ImageGray& src) {
    ImageGray out(src.width, src.height);
#pragma omp parallel for
    for (int y = 0; y < src.height; ++y)
        for (int x = 0; x < src.width; ++x) out.at(x, y) = src.at(x, src.height - 1 - y);
    return out;
}

ImageGray rot90_cw(const ImageGray& src) {
    ImageGray out(src.height, src.width);
#pragma omp parallel for
    for (int j = 0; j < src.height; ++j)
        for (int i = 0; i < src.width; ++i) out.at(src.height - 1 - j, i) = src.at(i, j);
    return out;
}

ImageGray rotate_bilinear(const ImageGray& src, double theta_deg, std::uint8_t fill) {
    ImageGray out(src.width, src.height);
    const double theta = theta_deg * kPi / 180.0;
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const double cx = src.width / 2.0;
    const double cy = src.height / 2.0;
#pragma omp parallel for
    for (int y = 0; y < src.height; ++y)
        for (int x = 0; x < src.width; ++x)
            out.at(x, y) = rotate_sample(src, x, y, c, s, cx, cy, fill);
    return out;
}

ImageGray add_gaussian_noise(const ImageGray& src, double sigma, std::uint64_t seed) {
    if (!(sigma >= 0.0)) throw std::invalid_argument("noise sigma must be >= 0");
    ImageGray out(src.width, src.height);
    const int n = src.width * src.height;
#pragma omp parallel for
    for (int i = 0; i < n; ++i)
        out.samples[static_cast<std::size_t>(i)] = noise_sample(src, i, sigma, seed);
    return out;
}

void composite_capsule(ImageGray& canvas, const TaperedCapsule& cap, std::uint8_t fg) {
    const CapsuleFrame f = capsule_frame(canvas, cap);
    if (f.x_lo > f.x_hi || f.y_lo > f.y_hi) return;
#pragma omp parallel for
    for (int y = f.y_lo; y <= f.y_hi; ++y) {
        for (int x = f.x_lo; x <= f.x_hi; ++x) {
            const double cov = capsule_coverage(f, x, y);
            if (cov > 0.0) canvas.at(x, y) = blend(canvas.at(x, y), fg, cov);
        }
    }
}

namespace serial {

ImageGray flip_h(const ImageGray& src) {
    ImageGray out(src.width, src.height);
    for (int y = 0; y < src.height; ++y)
        for (int x = 0; x < src.width; ++x) out.at(x, y) = src.at(src.width - 1 - x, y);
    return out;
}

ImageGray flip_v(const ImageGray& src) {
    ImageGray out(src.width, src.height);
    for (int y = 0; y < src.height; ++y)
        for (int x = 0; x < src.width; ++x) out.at(x, y) = src.at(x, src.height - 1 - y);
    return out;
}

ImageGray rot90_cw(const ImageGray& src) {
    ImageGray out(src.height, src.width);
    for (int j = 0; j < src.height; ++j)
        for (int i = 0; i < src.width; ++i) out.at(src.height - 1 - j, i) = src.at(i, j);
    return out;
}

ImageGray rotate_bilinear(const ImageGray& src, double theta_deg, std::uint8_t fill) {
    ImageGray out(src.width, src.height);
    const double theta = theta_deg * kPi / 180.0;
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const double cx = src.width / 2.0;
    const double cy = src.height / 2.0;
    for (int y = 0; y < src.height; ++y)
        for (int x = 0; x < src.width; ++x)
            out.at(x, y) = rotate_sample(src, x, y, c, s, cx, cy, fill);
    return out;
}

ImageGray add_gaussian_noise(const ImageGray& src, double sigma, std::uint64_t seed) {
    if (!(sigma >= 0.0)) throw std::invalid_argument("noise sigma must be >= 0");
    ImageGray out(src.width, src.height);
    const int n = src.width * src.height;
    for (int i = 0; i < n; ++i)
        out.samples[static_cast<std::size_t>(i)] = noise_sample(src, i, sigma, seed);
    return out;
}

void composite_capsule(ImageGray& canvas, const TaperedCapsule& cap, std::uint8_t fg) {
    const CapsuleFrame f = capsule_frame(canvas, cap);
    if (f.x_lo > f.x_hi || f.y_lo > f.y_hi) return;
    for (int y = f.y_lo; y <= f.y_hi; ++y) {
        for (int x = f.x_lo; x <= f.x_hi; ++x) {
            const double cov = capsule_coverage(f, x, y);
            if (cov > 0.0) canvas.at(x, y) = blend(canvas.at(x, y), fg, cov);
        }
    }
}

}  // namespace serial

}  // namespace needle::kernels
