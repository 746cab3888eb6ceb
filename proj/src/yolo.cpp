#include "needle/yolo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace needle {

namespace {

void check_dims(int img_w, int img_h) {
    if (img_w < 1 || img_h < 1)
        throw std::invalid_argument("image dimensions must be positive");
}

double parse_norm_field(std::istringstream& in, const char* field) {
    double v = 0.0;
    if (!(in >> v) || !std::isfinite(v))
        throw std::invalid_argument(std::string("label line: bad field '") + field + "'");
    return v;
}

}  // namespace

void validate_yolo_record(const YoloRecord& rec, double slack) {
    if (rec.class_index < 0 || rec.class_index >= kTipClassCount)
        throw std::invalid_argument("label field 'class': index out of range 0..3");
    if (!(rec.w > 0.0)) throw std::invalid_argument("label field 'w': must be > 0");
    if (!(rec.h > 0.0)) throw std::invalid_argument("label field 'h': must be > 0");
    if (rec.cx - rec.w / 2.0 < -slack || rec.cx + rec.w / 2.0 > 1.0 + slack)
        throw std::invalid_argument("label field 'cx': box leaves [0,1] horizontally");
    if (rec.cy - rec.h / 2.0 < -slack || rec.cy + rec.h / 2.0 > 1.0 + slack)
        throw std::invalid_argument("label field 'cy': box leaves [0,1] vertically");
}

std::string format_yolo_line(const YoloRecord& rec) {
    validate_yolo_record(rec);
    char buf[96];
    std::snprintf(buf, sizeof buf, "%d %.6f %.6f %.6f %.6f", rec.class_index, rec.cx,
                  rec.cy, rec.w, rec.h);
    return buf;
}

YoloRecord parse_yolo_line(const std::string& line) {
    std::istringstream in(line);
    YoloRecord rec;
    if (!(in >> rec.class_index))
        throw std::invalid_argument("label line: bad field 'class'");
    rec.cx = parse_norm_field(in, "cx");
    rec.cy = parse_norm_field(in, "cy");
    rec.w = parse_norm_field(in, "w");
    rec.h = parse_norm_field(in, "h");
    std::string extra;
    if (in >> extra) throw std::invalid_argument("label line: trailing fields");
    validate_yolo_record(rec);
    return rec;
}

BoundingBox record_to_box(const YoloRecord& rec, int img_w, int img_h) {
    check_dims(img_w, img_h);
    validate_yolo_record(rec);
    BoundingBox box;
    box.x_min = std::clamp((rec.cx - rec.w / 2.0) * img_w, 0.0, double(img_w));
    box.x_max = std::clamp((rec.cx + rec.w / 2.0) * img_w, 0.0, double(img_w));
    box.y_min = std::clamp((rec.cy - rec.h / 2.0) * img_h, 0.0, double(img_h));
    box.y_max = std::clamp((rec.cy + rec.h / 2.0) * img_h, 0.0, double(img_h));
    validate_box(box);
    return box;
}

std::string encode_yolo(const BoundingBox& box, TipClass c, int img_w, int img_h) {
    check_dims(img_w, img_h);
    validate_box(box);
    if (box.x_min < 0.0 || box.y_min < 0.0 || box.x_max > img_w || box.y_max > img_h)
        throw std::invalid_argument("box outside image bounds");
    YoloRecord rec;
    rec.class_index = tip_class_index(c);
    rec.cx = (box.x_min + box.x_max) / 2.0 / img_w;
    rec.cy = (box.y_min + box.y_max) / 2.0 / img_h;
    rec.w = box.width() / img_w;
    rec.h = box.height() / img_h;
    return format_yolo_line(rec);
}

std::pair<BoundingBox, TipClass> decode_yolo(const std::string& line, int img_w,
                                             int img_h) {
    const YoloRecord rec = parse_yolo_line(line);
    return {record_to_box(rec, img_w, img_h), tip_class_from_index(rec.class_index)};
}

std::vector<YoloRecord> read_label_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open label file: " + path.string());
    std::vector<YoloRecord> records;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        try {
            records.push_back(parse_yolo_line(line));
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument(path.string() + ":" + std::to_string(lineno) +
                                        ": " + e.what());
        }
    }
    return records;
}

void write_label_file(const std::vector<YoloRecord>& records,
                      const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write label file: " + path.string());
    for (const auto& rec : records) out << format_yolo_line(rec) << "\n";
    if (!out) throw std::runtime_error("short write: " + path.string());
}

}  // namespace needle
