#pragma once

#include <optional>
#include <string>
#include <vector>

#include "needle/detection.hpp"
#include "needle/image.hpp"

namespace needle {

/// Knobs of the classical stand-in detector. Binarization uses Otsu's method
/// unless fixed_threshold is set; polarity says which side of the threshold
/// is needle.
struct DetectorConfig {
    std::optional<int> fixed_threshold;  // absent -> automatic (Otsu)
    bool needle_darker = true;           // needle intensity below the threshold
    int min_component_px = 30;
    double tip_probe_radius = 12.0;     // mass-probe radius for tip/tail call
    double confidence_floor = 0.05;
};

/// Otsu's between-class-variance threshold over the 8-bit histogram; ties go
/// to the lowest level. Exposed for inspection and tests.
int otsu_threshold(const ImageGray& img);

/// Classical needle detector: threshold, keep the largest 8-connected
/// component, fit its principal axis from second-order moments, take the
/// extreme projections as endpoints, and call the end with less nearby mass
/// the tip (the needle tapers toward its tip). Returns at most one
/// detection; empty when no component passes min_component_px or the
/// endpoint pair is axis-aligned (a box cannot encode it — warned).
std::vector<Detection> detect(const ImageGray& img, const DetectorConfig& cfg,
                              std::vector<std::string>* warnings = nullptr);

/// detect + select_best + pose_from_detection.
std::optional<NeedlePose> detect_to_pose(const ImageGray& img,
                                         const DetectorConfig& cfg,
                                         std::vector<std::string>* warnings = nullptr);

}  // namespace needle
