#include "needle/detection.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace needle {

namespace {

bool is_blank_or_comment(const std::string& line) {
    const auto pos = line.find_first_not_of(" \t\r\n");
    return pos == std::string::npos || line[pos] == '#';
}

double parse_real_field(std::istringstream& in, const char* field) {
    double v = 0.0;
    if (!(in >> v) || !std::isfinite(v))
        throw std::invalid_argument(std::string("detection line: bad field '") + field +
                                    "'");
    return v;
}

}  // namespace

void validate_detection(const Detection& det) {
    validate_box(det.box);
    if (!(det.confidence >= 0.0 && det.confidence <= 1.0))
        throw std::invalid_argument("detection confidence outside [0,1]");
}

double iou(const BoundingBox& a, const BoundingBox& b) {
    validate_box(a);
    validate_box(b);
    const double ix = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
    const double iy = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
    if (ix <= 0.0 || iy <= 0.0) return 0.0;
    const double inter = ix * iy;
    const double uni = a.width() * a.height() + b.width() * b.height() - inter;
    return inter / uni;
}

std::vector<Detection> nms(const std::vector<Detection>& dets, double iou_threshold) {
    if (!(iou_threshold >= 0.0 && iou_threshold <= 1.0))
        throw std::invalid_argument("nms iou_threshold outside [0,1]");
    for (const auto& d : dets) validate_detection(d);

    std::vector<std::size_t> order(dets.size());
    std::iota(order.begin(), order.end(), 0);
    // stable_sort keeps input order among equal confidences
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return dets[i].confidence > dets[j].confidence;
    });

    std::vector<Detection> kept;
    std::vector<bool> alive(dets.size(), true);
    for (std::size_t oi = 0; oi < order.size(); ++oi) {
        const std::size_t i = order[oi];
        if (!alive[i]) continue;
        kept.push_back(dets[i]);
        for (std::size_t oj = oi + 1; oj < order.size(); ++oj) {
            const std::size_t j = order[oj];
            if (alive[j] && iou(dets[i].box, dets[j].box) > iou_threshold)
                alive[j] = false;
        }
    }
    return kept;
}

GridCell grid_cell(const PixelPoint& p, const GridSpec& grid) {
    if (grid.s < 1 || grid.img_w < 1 || grid.img_h < 1)
        throw std::invalid_argument("grid spec fields must be positive");
    if (!(p.x >= 0.0 && p.x < grid.img_w && p.y >= 0.0 && p.y < grid.img_h))
        throw std::out_of_range("grid_cell: point outside image");
    // x*s/w can land exactly on s under rounding for x just below img_w
    const int col = std::min(static_cast<int>(p.x * grid.s / grid.img_w), grid.s - 1);
    const int row = std::min(static_cast<int>(p.y * grid.s / grid.img_h), grid.s - 1);
    return {row, col};
}

std::optional<Detection> select_best(const std::vector<Detection>& dets,
                                     double conf_threshold) {
    if (!(conf_threshold >= 0.0 && conf_threshold <= 1.0))
        throw std::invalid_argument("select_best conf_threshold outside [0,1]");
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < dets.size(); ++i) {
        if (dets[i].confidence < conf_threshold) continue;
        if (!best || dets[i].confidence > dets[*best].confidence) best = i;
    }
    if (!best) return std::nullopt;
    return dets[*best];
}

Detection parse_detection_line(const std::string& line) {
    std::istringstream in(line);
    int cls = -1;
    if (!(in >> cls)) throw std::invalid_argument("detection line: bad field 'class_index'");
    if (cls < 0 || cls >= kTipClassCount)
        throw std::invalid_argument("detection line: class_index out of range 0..3");
    Detection det;
    det.tip_class = tip_class_from_index(cls);
    det.confidence = parse_real_field(in, "conf");
    det.box.x_min = parse_real_field(in, "x_min");
    det.box.y_min = parse_real_field(in, "y_min");
    det.box.x_max = parse_real_field(in, "x_max");
    det.box.y_max = parse_real_field(in, "y_max");
    std::string extra;
    if (in >> extra) throw std::invalid_argument("detection line: trailing fields");
    validate_detection(det);
    return det;
}

std::string format_detection_line(const Detection& det) {
    validate_detection(det);
    char buf[160];
    std::snprintf(buf, sizeof buf, "%d %.6f %.6f %.6f %.6f %.6f",
                  tip_class_index(det.tip_class), det.confidence, det.box.x_min,
                  det.box.y_min, det.box.x_max, det.box.y_max);
    return buf;
}

std::vector<Detection> read_detection_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open detection file: " + path.string());
    std::vector<Detection> dets;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (is_blank_or_comment(line)) continue;
        try {
            dets.push_back(parse_detection_line(line));
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument(path.string() + ":" + std::to_string(lineno) +
                                        ": " + e.what());
        }
    }
    return dets;
}

void write_detection_file(const std::vector<Detection>& dets,
                          const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write detection file: " + path.string());
    out << "# class_index conf x_min y_min x_max y_max\n";
    for (const auto& d : dets) out << format_detection_line(d) << "\n";
    if (!out) throw std::runtime_error("short write: " + path.string());
}

}  // namespace needle
