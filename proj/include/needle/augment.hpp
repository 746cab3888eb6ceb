#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "needle/geometry.hpp"
#include "needle/image.hpp"

namespace needle::augment {

/// An image with its ground-truth boxes. Every box must lie inside the
/// continuous image extent [0,W]x[0,H].
struct LabeledScene {
    ImageGray image;
    std::vector<std::pair<BoundingBox, TipClass>> truths;
};

void validate_scene(const LabeledScene& scene);

/// Median sample value; default fill for arbitrary rotation.
std::uint8_t median_intensity(const ImageGray& img);

/// Forward rotation of a point about `center` by theta degrees, clockwise in
/// the y-down raster frame. Matches the pixel resampling in rotate_scene.
PixelPoint rotate_point(const PixelPoint& p, double theta_deg, const PixelPoint& center);

// Geometric ops transform the tip/mid keypoints of every truth, rebuild the
// box as the axis-aligned hull of the transformed pair, and re-derive the
// class from the transformed geometry — correct for any angle by
// construction, no permutation tables to trust.

/// Mirror across the vertical axis: pixels reverse column order, keypoints
/// map x -> W - x. Net class swap LT<->RT, LB<->RB; angle unchanged.
LabeledScene flip_h(const LabeledScene& scene);

/// Mirror across the horizontal axis: y -> H - y; LT<->LB, RT<->RB.
LabeledScene flip_v(const LabeledScene& scene);

/// quarter_turns clockwise quarter-turns (any integer, taken mod 4). One turn
/// maps keypoint (x,y) -> (H - y, x) onto an H x W canvas; angle -> 90 - angle.
LabeledScene rot90(const LabeledScene& scene, int quarter_turns);

/// Rotation by theta degrees about the canvas center (canvas size kept).
/// Pixels are inverse-mapped with bilinear interpolation; uncovered output
/// pixels take `fill` (image median when absent). Truths whose rotated
/// keypoints leave the canvas, or become axis-aligned within 1e-9 px, are
/// dropped with a note in `warnings`.
LabeledScene rotate_scene(const LabeledScene& scene, double theta_deg,
                          std::optional<std::uint8_t> fill = std::nullopt,
                          std::vector<std::string>* warnings = nullptr);

/// Additive Gaussian pixel noise (std sigma), clamped and rounded; labels
/// untouched. Identical (scene, sigma, seed) give identical bytes.
LabeledScene corrupt(const LabeledScene& scene, double sigma, std::uint64_t seed);

}  // namespace needle::augment
