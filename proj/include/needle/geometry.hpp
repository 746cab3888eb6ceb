#pragma once

#include <string>

namespace needle {

/// Continuous 2-D image coordinate. Origin at the top-left corner,
/// x grows rightward, y grows downward.
struct PixelPoint {
    double x = 0.0;
    double y = 0.0;
};

bool operator==(const PixelPoint& a, const PixelPoint& b);

/// Which box vertex carries the needle tip; the needle midpoint sits on the
/// diagonally opposite vertex.
enum class TipClass : int { LT = 0, LB = 1, RT = 2, RB = 3 };

inline constexpr int kTipClassCount = 4;

int tip_class_index(TipClass c);
TipClass tip_class_from_index(int index);
const char* to_string(TipClass c);
TipClass tip_class_from_string(const std::string& name);

/// Axis-aligned pixel rectangle. Valid boxes are strictly non-degenerate.
struct BoundingBox {
    double x_min = 0.0;
    double y_min = 0.0;
    double x_max = 0.0;
    double y_max = 0.0;

    double width() const { return x_max - x_min; }
    double height() const { return y_max - y_min; }
};

/// Throws std::invalid_argument unless x_min < x_max, y_min < y_max and all
/// coordinates are finite.
void validate_box(const BoundingBox& box);

/// Tip position, needle midpoint, quadrant class and unsigned angle. The box
/// diagonal of the matching detection spans tip to midpoint.
struct NeedlePose {
    PixelPoint tip;
    PixelPoint midpoint;
    TipClass tip_class = TipClass::LT;
    double angle_deg = 0.0;
};

/// Box vertex carrying the tip for the given class.
PixelPoint tip_vertex(const BoundingBox& box, TipClass c);

/// Vertex diagonally opposite tip_vertex: the needle midpoint.
PixelPoint mid_vertex(const BoundingBox& box, TipClass c);

/// Quadrant of the tip relative to the midpoint. Throws std::invalid_argument
/// on axis-aligned input (the box would have zero width or height).
TipClass classify_tip(const PixelPoint& tip, const PixelPoint& mid);

/// Unsigned needle angle against the horizontal in degrees, in [0, 90].
/// Returns exactly 90 for vertical needles. Throws when tip == mid.
double needle_angle(const PixelPoint& tip, const PixelPoint& mid);

/// Full pose decoded from a detection box and its tip class.
NeedlePose pose_from_detection(const BoundingBox& box, TipClass c);

/// Reflection of the tip through the midpoint: the far end of the needle.
PixelPoint tail_point(const NeedlePose& pose);

}  // namespace needle
