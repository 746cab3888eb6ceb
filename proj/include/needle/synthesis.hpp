#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "needle/geometry.hpp"
#include "needle/image.hpp"

namespace needle::synth {

/// Full description of one synthetic scene. The needle is a tapered capsule
/// from the tip to the tail; the labeled box spans tip to needle midpoint.
struct SynthParams {
    int img_w = 692;
    int img_h = 516;
    PixelPoint tip{100.0, 100.0};
    double angle_deg = 45.0;  // open interval (0, 90)
    TipClass tip_class = TipClass::LT;
    double half_length = 60.0;  // tip-to-midpoint distance, px
    double width_tip = 2.0;     // full needle width at the tip, px
    double width_tail = 6.0;    // full width at the tail; must exceed width_tip
    std::uint8_t fg_intensity = 40;
    std::uint8_t bg_intensity = 200;
    double noise_sigma = 0.0;  // background noise, applied before the needle
    std::uint64_t seed = 0;
    std::optional<std::filesystem::path> background;  // P5 image instead of flat bg
};

struct SynthScene {
    ImageGray image;
    BoundingBox truth_box;
    TipClass truth_class = TipClass::LT;
    NeedlePose truth_pose;
};

/// Solves for the midpoint: tip + half_length * (+-cos, +-sin)(angle), signs
/// chosen so the tip sits on the requested corner. Throws when tip, midpoint
/// or tail leave the canvas, or params are out of range.
NeedlePose place_needle(const SynthParams& params);

/// Renders background (flat or file, plus optional seeded noise), composites
/// the tapered needle, and returns exact continuous ground truth.
SynthScene render(const SynthParams& params);

/// Parameter ranges for batch generation; values are drawn uniformly and
/// classes uniformly over the four variants.
struct BatchRanges {
    int img_w = 692;
    int img_h = 516;
    double angle_lo = 5.0;
    double angle_hi = 85.0;
    double half_length_lo = 50.0;
    double half_length_hi = 90.0;
    double width_tip = 2.0;
    double width_tail = 6.0;
    std::uint8_t fg_intensity = 40;
    std::uint8_t bg_intensity = 200;
    double noise_sigma = 0.0;
    double margin = 8.0;  // clearance kept between needle ends and the border
    std::optional<std::filesystem::path> background;
};

/// n scenes, deterministic for a fixed master seed; scene i draws from an
/// independent stream derived from (seed, i), so generation order never
/// matters. Throws std::invalid_argument when the ranges cannot fit a needle.
std::vector<SynthScene> generate_batch(int n, const BatchRanges& ranges,
                                       std::uint64_t seed);

}  // namespace needle::synth
