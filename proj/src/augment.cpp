#include "needle/augment.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "needle/kernels.hpp"

namespace needle::augment {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kDegenerateEps = 1e-9;

using Truth = std::pair<BoundingBox, TipClass>;

std::pair<PixelPoint, PixelPoint> truth_keypoints(const Truth& t) {
    return {tip_vertex(t.first, t.second), mid_vertex(t.first, t.second)};
}

Truth truth_from_keypoints(const PixelPoint& tip, const PixelPoint& mid) {
    BoundingBox box{std::min(tip.x, mid.x), std::min(tip.y, mid.y),
                    std::max(tip.x, mid.x), std::max(tip.y, mid.y)};
    return {box, classify_tip(tip, mid)};
}

bool in_extent(const PixelPoint& p, int w, int h) {
    return p.x >= 0.0 && p.x <= w && p.y >= 0.0 && p.y <= h;
}

// Applies a keypoint map to every truth; the map must keep pairs
// non-degenerate (true for flips and quarter-turns).
template <typename PointFn>
std::vector<Truth> map_truths(const std::vector<Truth>& truths, PointFn&& fn) {
    std::vector<Truth> out;
    out.reserve(truths.size());
    for (const auto& t : truths) {
        const auto [tip, mid] = truth_keypoints(t);
        out.push_back(truth_from_keypoints(fn(tip), fn(mid)));
    }
    return out;
}

LabeledScene rot90_once(const LabeledScene& scene) {
    const int h = scene.image.height;
    LabeledScene out;
    out.image = kernels::rot90_cw(scene.image);
    out.truths = map_truths(scene.truths, [h](const PixelPoint& p) {
        return PixelPoint{h - p.y, p.x};
    });
    return out;
}

}  // namespace

void validate_scene(const LabeledScene& scene) {
    if (scene.image.samples.empty()) throw std::invalid_argument("scene has no image");
    for (const auto& [box, cls] : scene.truths) {
        validate_box(box);
        (void)cls;
        if (box.x_min < 0.0 || box.y_min < 0.0 || box.x_max > scene.image.width ||
            box.y_max > scene.image.height)
            throw std::invalid_argument("truth box outside image bounds");
    }
}

std::uint8_t median_intensity(const ImageGray& img) {
    if (img.samples.empty()) throw std::invalid_argument("median of empty image");
    std::vector<std::uint8_t> sorted(img.samples);
    const auto mid = sorted.begin() + sorted.size() / 2;
    std::nth_element(sorted.begin(), mid, sorted.end());
    return *mid;
}

PixelPoint rotate_point(const PixelPoint& p, double theta_deg,
                        const PixelPoint& center) {
    const double theta = theta_deg * kPi / 180.0;
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const double dx = p.x - center.x;
    const double dy = p.y - center.y;
    return {center.x + c * dx - s * dy, center.y + s * dx + c * dy};
}

LabeledScene flip_h(const LabeledScene& scene) {
    validate_scene(scene);
    const int w = scene.image.width;
    LabeledScene out;
    out.image = kernels::flip_h(scene.image);
    out.truths = map_truths(scene.truths, [w](const PixelPoint& p) {
        return PixelPoint{w - p.x, p.y};
    });
    return out;
}

LabeledScene flip_v(const LabeledScene& scene) {
    validate_scene(scene);
    const int h = scene.image.height;
    LabeledScene out;
    out.image = kernels::flip_v(scene.image);
    out.truths = map_truths(scene.truths, [h](const PixelPoint& p) {
        return PixelPoint{p.x, h - p.y};
    });
    return out;
}

LabeledScene rot90(const LabeledScene& scene, int quarter_turns) {
    validate_scene(scene);
    const int turns = ((quarter_turns % 4) + 4) % 4;
    LabeledScene out = scene;
    for (int i = 0; i < turns; ++i) out = rot90_once(out);
    return out;
}

LabeledScene rotate_scene(const LabeledScene& scene, double theta_deg,
                          std::optional<std::uint8_t> fill,
                          std::vector<std::string>* warnings) {
    validate_scene(scene);
    const std::uint8_t fill_value = fill ? *fill : median_intensity(scene.image);
    const int w = scene.image.width;
    const int h = scene.image.height;
    const PixelPoint center{w / 2.0, h / 2.0};

    LabeledScene out;
    out.image = kernels::rotate_bilinear(scene.image, theta_deg, fill_value);
    for (std::size_t i = 0; i < scene.truths.size(); ++i) {
        const auto [tip0, mid0] = truth_keypoints(scene.truths[i]);
        const PixelPoint tip = rotate_point(tip0, theta_deg, center);
        const PixelPoint mid = rotate_point(mid0, theta_deg, center);
        if (!in_extent(tip, w, h) || !in_extent(mid, w, h)) {
            if (warnings)
                warnings->push_back("truth " + std::to_string(i) +
                                    " rotated out of canvas, dropped");
            continue;
        }
        if (std::abs(tip.x - mid.x) < kDegenerateEps ||
            std::abs(tip.y - mid.y) < kDegenerateEps) {
            if (warnings)
                warnings->push_back("truth " + std::to_string(i) +
                                    " rotated onto an image axis, dropped");
            continue;
        }
        out.truths.push_back(truth_from_keypoints(tip, mid));
    }
    return out;
}

LabeledScene corrupt(const LabeledScene& scene, double sigma, std::uint64_t seed) {
    validate_scene(scene);
    LabeledScene out;
    out.image = kernels::add_gaussian_noise(scene.image, sigma, seed);
    out.truths = scene.truths;
    return out;
}

}  // namespace needle::augment
