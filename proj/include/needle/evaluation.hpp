#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "needle/geometry.hpp"

namespace needle {

/// What evaluation needs to know about one needle reading: tip, unsigned
/// angle, and (when the producer supplies one) the tip class.
struct PoseObservation {
    PixelPoint tip;
    double angle_deg = 0.0;
    std::optional<TipClass> tip_class;
};

/// One evaluated image: detection vs ground truth. det_* and the derived
/// columns are absent when the detector produced nothing (a miss).
struct EvalRecord {
    std::string image_id;
    std::optional<PixelPoint> det_tip;
    PixelPoint real_tip;
    std::optional<double> det_angle;
    double real_angle = 0.0;
    std::optional<TipClass> det_class;
    std::optional<TipClass> real_class;
    std::optional<double> tip_dist;
    std::optional<double> ang_err;
};

struct EvalSummary {
    int n = 0;       // evaluated pairs (misses included)
    int misses = 0;  // pairs without a detection, excluded from the means
    double mean_tip_dist = 0.0;
    double mean_ang_err = 0.0;
    double max_tip_dist = 0.0;
    std::optional<double> class_accuracy;  // absent when no pair carries both classes
};

struct EvalPair {
    std::string image_id;
    std::optional<PoseObservation> det;
    PoseObservation truth;
};

/// Euclidean distance between detected and true tips.
double tip_distance(const PixelPoint& det, const PixelPoint& real);

/// Absolute difference of two unsigned needle angles; both must be in [0,90].
double angle_error(double det_deg, double real_deg);

/// Builds one record per pair (input order) plus aggregate means over the
/// unrounded values. Throws std::invalid_argument on an empty list or an
/// empty image_id.
std::pair<std::vector<EvalRecord>, EvalSummary> evaluate_pairs(
    const std::vector<EvalPair>& pairs);

enum class ReportFormat { csv, markdown };

/// Half-up rounding to 2 decimals, rendered as text ("3.61", "0.00").
std::string format_2dp(double v);

/// Table with columns Image, Det Tip, Real Tip, Det Ang, Real Ang, Tip Dist,
/// Ang Err; one row per record, then an "average" summary row. Distances and
/// angles carry 2 decimals (half-up); misses render as "-".
std::string emit_report(const std::vector<EvalRecord>& records,
                        const EvalSummary& summary, ReportFormat format);

}  // namespace needle
