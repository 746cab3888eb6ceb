#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "needle/geometry.hpp"

namespace needle {

/// One label line in normalized form: class + center/size, each relative to
/// the image dimensions. Valid records keep the whole box inside [0,1]^2.
struct YoloRecord {
    int class_index = 0;
    double cx = 0.0;
    double cy = 0.0;
    double w = 0.0;
    double h = 0.0;
};

/// Throws std::invalid_argument naming the offending field. `slack` absorbs
/// the print quantization of 6-decimal files (default 1e-6).
void validate_yolo_record(const YoloRecord& rec, double slack = 1e-6);

/// "c cx cy w h" with six decimal places, no newline.
std::string format_yolo_line(const YoloRecord& rec);

/// Parses one label line; exactly five fields required.
YoloRecord parse_yolo_line(const std::string& line);

/// Normalized record -> pixel box, corners clamped into [0,w]x[0,h] to undo
/// quantization spill at the image edges.
BoundingBox record_to_box(const YoloRecord& rec, int img_w, int img_h);

/// Pixel box + class -> label line. The box must lie inside the image.
std::string encode_yolo(const BoundingBox& box, TipClass c, int img_w, int img_h);

/// Inverse of encode_yolo up to 6-decimal print precision.
std::pair<BoundingBox, TipClass> decode_yolo(const std::string& line, int img_w,
                                             int img_h);

/// Label file = one record per line; blank lines ignored.
std::vector<YoloRecord> read_label_file(const std::filesystem::path& path);
void write_label_file(const std::vector<YoloRecord>& records,
                      const std::filesystem::path& path);

}  // namespace needle
