#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "needle/geometry.hpp"

namespace needle {

/// One detector output: where the needle's tip-half box sits, which corner
/// carries the tip, and how sure the producer was.
struct Detection {
    BoundingBox box;
    TipClass tip_class = TipClass::LT;
    double confidence = 0.0;
};

/// Throws std::invalid_argument if the box is degenerate or the confidence
/// leaves [0,1].
void validate_detection(const Detection& det);

/// S x S partition of an img_w x img_h image.
struct GridSpec {
    int s = 1;
    int img_w = 1;
    int img_h = 1;
};

struct GridCell {
    int row = 0;
    int col = 0;
};

/// Intersection over union of two axis-aligned boxes, in [0,1]. Boxes that
/// merely share an edge have zero intersection area and score 0.
double iou(const BoundingBox& a, const BoundingBox& b);

/// Greedy non-maximum suppression. Candidates are ranked by confidence
/// (descending, ties broken by input order); each kept detection suppresses
/// every remaining one overlapping it with IoU strictly above the threshold.
/// The result preserves the kept order and is always a subset of the input.
std::vector<Detection> nms(const std::vector<Detection>& dets, double iou_threshold);

/// Cell containing p: col = floor(x*s/w), row = floor(y*s/h), half-open on
/// the high edges. Out-of-bounds points are rejected with std::out_of_range.
GridCell grid_cell(const PixelPoint& p, const GridSpec& grid);

/// Highest-confidence detection at or above the threshold, if any; ties go
/// to the earlier entry.
std::optional<Detection> select_best(const std::vector<Detection>& dets,
                                     double conf_threshold);

// --- detection exchange format -------------------------------------------
// One detection per line: "class_index conf x_min y_min x_max y_max",
// space-separated decimal in pixels. Blank lines and lines whose first
// non-space character is '#' are ignored. This is the seam through which an
// external model's outputs enter the pipeline.

Detection parse_detection_line(const std::string& line);
std::string format_detection_line(const Detection& det);
std::vector<Detection> read_detection_file(const std::filesystem::path& path);
void write_detection_file(const std::vector<Detection>& dets,
                          const std::filesystem::path& path);

}  // namespace needle
