#include "needle/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "needle/kernels.hpp"
#include "needle/rng.hpp"

namespace needle::synth {

namespace {

constexpr double kPi = 3.14159265358979323846;

void validate_params(const SynthParams& p) {
    if (p.img_w < 1 || p.img_h < 1)
        throw std::invalid_argument("canvas dimensions must be positive");
    if (!(p.angle_deg > 0.0 && p.angle_deg < 90.0))
        throw std::invalid_argument("angle_deg must lie strictly inside (0, 90)");
    if (!(p.half_length > 0.0))
        throw std::invalid_argument("half_length must be positive");
    if (!(p.width_tip > 0.0 && p.width_tip < p.width_tail))
        throw std::invalid_argument("taper requires 0 < width_tip < width_tail");
    if (!(p.noise_sigma >= 0.0))
        throw std::invalid_argument("noise_sigma must be >= 0");
}

bool in_canvas(const PixelPoint& pt, int w, int h) {
    return pt.x >= 0.0 && pt.x <= w && pt.y >= 0.0 && pt.y <= h;
}

// Direction from tip toward tail so that the tip lands on the requested box
// corner: the midpoint must sit in the opposite quadrant.
void class_signs(TipClass c, double& sx, double& sy) {
    switch (c) {
        case TipClass::LT: sx = +1.0; sy = +1.0; return;
        case TipClass::LB: sx = +1.0; sy = -1.0; return;
        case TipClass::RT: sx = -1.0; sy = +1.0; return;
        case TipClass::RB: sx = -1.0; sy = -1.0; return;
    }
    throw std::invalid_argument("bad tip class");
}

ImageGray make_background(const SynthParams& p) {
    if (p.background) {
        ImageGray bg = read_pgm(*p.background);
        if (bg.width != p.img_w || bg.height != p.img_h)
            throw std::invalid_argument("background image size differs from canvas");
        return bg;
    }
    return ImageGray(p.img_w, p.img_h, p.bg_intensity);
}

}  // namespace

NeedlePose place_needle(const SynthParams& params) {
    validate_params(params);
    double sx = 0.0, sy = 0.0;
    class_signs(params.tip_class, sx, sy);
    const double theta = params.angle_deg * kPi / 180.0;
    const double dx = sx * std::cos(theta);
    const double dy = sy * std::sin(theta);

    NeedlePose pose;
    pose.tip = params.tip;
    pose.midpoint = {params.tip.x + params.half_length * dx,
                     params.tip.y + params.half_length * dy};
    pose.tip_class = classify_tip(pose.tip, pose.midpoint);
    pose.angle_deg = needle_angle(pose.tip, pose.midpoint);

    const PixelPoint tail = tail_point(pose);
    if (!in_canvas(pose.tip, params.img_w, params.img_h) ||
        !in_canvas(pose.midpoint, params.img_w, params.img_h) ||
        !in_canvas(tail, params.img_w, params.img_h))
        throw std::invalid_argument("needle geometry exceeds canvas");
    return pose;
}

SynthScene render(const SynthParams& params) {
    SynthScene scene;
    scene.truth_pose = place_needle(params);
    scene.truth_class = scene.truth_pose.tip_class;
    scene.truth_box = {std::min(scene.truth_pose.tip.x, scene.truth_pose.midpoint.x),
                       std::min(scene.truth_pose.tip.y, scene.truth_pose.midpoint.y),
                       std::max(scene.truth_pose.tip.x, scene.truth_pose.midpoint.x),
                       std::max(scene.truth_pose.tip.y, scene.truth_pose.midpoint.y)};

    scene.image = make_background(params);
    if (params.noise_sigma > 0.0)
        scene.image =
            kernels::add_gaussian_noise(scene.image, params.noise_sigma, params.seed);

    const PixelPoint tail = tail_point(scene.truth_pose);
    kernels::TaperedCapsule cap;
    cap.x0 = scene.truth_pose.tip.x;
    cap.y0 = scene.truth_pose.tip.y;
    cap.x1 = tail.x;
    cap.y1 = tail.y;
    cap.r0 = params.width_tip / 2.0;
    cap.r1 = params.width_tail / 2.0;
    kernels::composite_capsule(scene.image, cap, params.fg_intensity);
    return scene;
}

std::vector<SynthScene> generate_batch(int n, const BatchRanges& ranges,
                                       std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("batch size must be >= 1");
    if (!(ranges.angle_lo > 0.0 && ranges.angle_hi < 90.0 &&
          ranges.angle_lo <= ranges.angle_hi))
        throw std::invalid_argument("angle range must lie inside (0, 90)");
    if (!(ranges.half_length_lo > 0.0 && ranges.half_length_lo <= ranges.half_length_hi))
        throw std::invalid_argument("half_length range invalid");
    if (!(ranges.margin >= 0.0)) throw std::invalid_argument("margin must be >= 0");

    std::vector<SynthScene> scenes;
    scenes.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const std::uint64_t scene_seed = mix_seed(seed, static_cast<std::uint64_t>(i));
        SplitMix64 rng(scene_seed);

        SynthParams p;
        p.img_w = ranges.img_w;
        p.img_h = ranges.img_h;
        p.width_tip = ranges.width_tip;
        p.width_tail = ranges.width_tail;
        p.fg_intensity = ranges.fg_intensity;
        p.bg_intensity = ranges.bg_intensity;
        p.noise_sigma = ranges.noise_sigma;
        p.background = ranges.background;
        p.seed = scene_seed;
        p.tip_class = tip_class_from_index(static_cast<int>(rng.next_below(4)));
        p.angle_deg = rng.uniform(ranges.angle_lo, ranges.angle_hi);
        p.half_length = rng.uniform(ranges.half_length_lo, ranges.half_length_hi);

        // Feasible tip interval given that tail = tip + 2*half_length*dir.
        double sx = 0.0, sy = 0.0;
        class_signs(p.tip_class, sx, sy);
        const double theta = p.angle_deg * kPi / 180.0;
        const double reach_x = 2.0 * p.half_length * std::cos(theta);
        const double reach_y = 2.0 * p.half_length * std::sin(theta);
        const double x_lo = ranges.margin + (sx < 0.0 ? reach_x : 0.0);
        const double x_hi = p.img_w - ranges.margin - (sx > 0.0 ? reach_x : 0.0);
        const double y_lo = ranges.margin + (sy < 0.0 ? reach_y : 0.0);
        const double y_hi = p.img_h - ranges.margin - (sy > 0.0 ? reach_y : 0.0);
        if (!(x_lo <= x_hi && y_lo <= y_hi))
            throw std::invalid_argument(
                "ranges cannot fit needle " + std::to_string(i) + " inside the canvas");
        p.tip = {rng.uniform(x_lo, x_hi), rng.uniform(y_lo, y_hi)};

        scenes.push_back(render(p));
    }
    return scenes;
}

}  // namespace needle::synth
