#include "needle/geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace needle {

namespace {
constexpr double kRadToDeg = 180.0 / std::numbers::pi;
}

bool operator==(const PixelPoint& a, const PixelPoint& b) {
    return a.x == b.x && a.y == b.y;
}

int tip_class_index(TipClass c) { return static_cast<int>(c); }

TipClass tip_class_from_index(int index) {
    if (index < 0 || index >= kTipClassCount) {
        throw std::invalid_argument("tip class index out of range 0..3: " +
                                    std::to_string(index));
    }
    return static_cast<TipClass>(index);
}

const char* to_string(TipClass c) {
    switch (c) {
        case TipClass::LT: return "LT";
        case TipClass::LB: return "LB";
        case TipClass::RT: return "RT";
        case TipClass::RB: return "RB";
    }
    throw std::invalid_argument("invalid tip class value");
}

TipClass tip_class_from_string(const std::string& name) {
    if (name == "LT") return TipClass::LT;
    if (name == "LB") return TipClass::LB;
    if (name == "RT") return TipClass::RT;
    if (name == "RB") return TipClass::RB;
    throw std::invalid_argument("unknown tip class name: " + name);
}

void validate_box(const BoundingBox& box) {
    if (!std::isfinite(box.x_min) || !std::isfinite(box.y_min) ||
        !std::isfinite(box.x_max) || !std::isfinite(box.y_max)) {
        throw std::invalid_argument("bounding box has non-finite coordinates");
    }
    if (!(box.x_min < box.x_max) || !(box.y_min < box.y_max)) {
        throw std::invalid_argument(
            "degenerate bounding box: requires x_min < x_max and y_min < y_max");
    }
}

PixelPoint tip_vertex(const BoundingBox& box, TipClass c) {
    validate_box(box);
    switch (c) {
        case TipClass::LT: return {box.x_min, box.y_min};
        case TipClass::LB: return {box.x_min, box.y_max};
        case TipClass::RT: return {box.x_max, box.y_min};
        case TipClass::RB: return {box.x_max, box.y_max};
    }
    throw std::invalid_argument("invalid tip class value");
}

PixelPoint mid_vertex(const BoundingBox& box, TipClass c) {
    validate_box(box);
    switch (c) {
        case TipClass::LT: return {box.x_max, box.y_max};
        case TipClass::LB: return {box.x_max, box.y_min};
        case TipClass::RT: return {box.x_min, box.y_max};
        case TipClass::RB: return {box.x_min, box.y_min};
    }
    throw std::invalid_argument("invalid tip class value");
}

TipClass classify_tip(const PixelPoint& tip, const PixelPoint& mid) {
    if (!std::isfinite(tip.x) || !std::isfinite(tip.y) ||
        !std::isfinite(mid.x) || !std::isfinite(mid.y)) {
        throw std::invalid_argument("classify_tip: non-finite coordinates");
    }
    if (tip.x == mid.x || tip.y == mid.y) {
        throw std::invalid_argument(
            "degenerate axis-aligned needle: tip and midpoint share a coordinate");
    }
    if (tip.x < mid.x) {
        return tip.y < mid.y ? TipClass::LT : TipClass::LB;
    }
    return tip.y < mid.y ? TipClass::RT : TipClass::RB;
}

double needle_angle(const PixelPoint& tip, const PixelPoint& mid) {
    if (!std::isfinite(tip.x) || !std::isfinite(tip.y) ||
        !std::isfinite(mid.x) || !std::isfinite(mid.y)) {
        throw std::invalid_argument("needle_angle: non-finite coordinates");
    }
    if (tip == mid) {
        throw std::invalid_argument("zero-length needle: tip equals midpoint");
    }
    const double dx = std::abs(tip.x - mid.x);
    const double dy = std::abs(tip.y - mid.y);
    if (dx == 0.0) return 90.0;
    if (dy == 0.0) return 0.0;
    return std::atan2(dy, dx) * kRadToDeg;
}

NeedlePose pose_from_detection(const BoundingBox& box, TipClass c) {
    const PixelPoint tip = tip_vertex(box, c);
    const PixelPoint mid = mid_vertex(box, c);
    return NeedlePose{tip, mid, c, needle_angle(tip, mid)};
}

PixelPoint tail_point(const NeedlePose& pose) {
    return {2.0 * pose.midpoint.x - pose.tip.x, 2.0 * pose.midpoint.y - pose.tip.y};
}

}  // namespace needle
