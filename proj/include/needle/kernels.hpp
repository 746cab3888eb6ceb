#pragma once

#include <cstdint>

#include "needle/image.hpp"

namespace needle::kernels {

// OpenMP-parallel pixel kernels. Every output sample is a pure function of
// the inputs and its own index, so the parallel output is byte-identical to
// the serial reference in kernels::serial (checked in tests, timed in
// tools/bench_kernels).

/// Column reversal: out(x, y) = in(W-1-x, y).
ImageGray flip_h(const ImageGray& src);

/// Row reversal: out(x, y) = in(x, H-1-y).
ImageGray flip_v(const ImageGray& src);

/// One clockwise quarter-turn; output is H x W.
ImageGray rot90_cw(const ImageGray& src);

/// Rotation about the canvas center by theta_deg (clockwise for positive
/// theta, y-down frame), inverse-mapped with bilinear interpolation.
/// Output pixels with no source support take the fill value.
ImageGray rotate_bilinear(const ImageGray& src, double theta_deg, std::uint8_t fill);

/// Adds N(0, sigma^2) per sample, rounds to nearest and clamps to [0,255].
/// Counter-based draws: one stream per (seed, sample index).
ImageGray add_gaussian_noise(const ImageGray& src, double sigma, std::uint64_t seed);

/// Line segment thickened by a linearly varying half-width; round caps.
struct TaperedCapsule {
    double x0 = 0.0, y0 = 0.0;  // narrow end
    double x1 = 0.0, y1 = 0.0;  // wide end
    double r0 = 1.0;            // half-width at (x0,y0)
    double r1 = 1.0;            // half-width at (x1,y1)
};

/// Composites the capsule at intensity fg over the canvas, 4x4 supersampled
/// coverage per pixel.
void composite_capsule(ImageGray& canvas, const TaperedCapsule& cap, std::uint8_t fg);

namespace serial {
ImageGray flip_h(const ImageGray& src);
ImageGray flip_v(const ImageGray& src);
ImageGray rot90_cw(const ImageGray& src);
ImageGray rotate_bilinear(const ImageGray& src, double theta_deg, std::uint8_t fill);
ImageGray add_gaussian_noise(const ImageGray& src, double sigma, std::uint64_t seed);
void composite_capsule(ImageGray& canvas, const TaperedCapsule& cap, std::uint8_t fg);
}  // namespace serial

}  // namespace needle::kernels
