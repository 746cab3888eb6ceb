#include <cmath>
#include <stdexcept>

#include <doctest.h>

#include "needle/kernels.hpp"
#include "needle/synthesis.hpp"
#include "test_util.hpp"

using namespace needle;
using synth::BatchRanges;
using synth::SynthParams;
using synth::SynthScene;

namespace {

constexpr double kPi = 3.14159265358979323846;

SynthParams small_params() {
    SynthParams p;
    p.img_w = 160;
    p.img_h = 160;
    p.tip = {30, 30};
    p.angle_deg = 45.0;
    p.half_length = 40.0;
    p.width_tip = 4.0;
    p.width_tail = 8.0;
    return p;
}

}  // namespace

TEST_SUITE("synthesis") {

TEST_CASE("place_needle solves the midpoint from angle and class") {
    SynthParams p;  // defaults: 692x516, tip (100,100), 45 deg, LT, hl 60
    const NeedlePose pose = synth::place_needle(p);
    CHECK(pose.tip == p.tip);
    const double expect = 60.0 * std::cos(45.0 * kPi / 180.0);
    CHECK(std::abs(pose.midpoint.x - (100.0 + expect)) < 1e-12);
    CHECK(std::abs(pose.midpoint.y - (100.0 + expect)) < 1e-12);
    CHECK(pose.tip_class == TipClass::LT);
    CHECK(pose.angle_deg == doctest::Approx(45.0).epsilon(1e-12));
}

TEST_CASE("each class pushes the midpoint into the opposite quadrant") {
    SynthParams p;
    p.tip = {300, 250};
    p.angle_deg = 30.0;
    for (int i = 0; i < kTipClassCount; ++i) {
        p.tip_class = tip_class_from_index(i);
        const NeedlePose pose = synth::place_needle(p);
        CHECK(pose.tip_class == p.tip_class);  // recomputed class agrees
        const bool right = pose.midpoint.x > pose.tip.x;
        const bool below = pose.midpoint.y > pose.tip.y;
        switch (p.tip_class) {
            case TipClass::LT: CHECK(right); CHECK(below); break;
            case TipClass::LB: CHECK(right); CHECK(!below); break;
            case TipClass::RT: CHECK(!right); CHECK(below); break;
            case TipClass::RB: CHECK(!right); CHECK(!below); break;
        }
        CHECK(pose.angle_deg == doctest::Approx(30.0).epsilon(1e-12));
    }
}

TEST_CASE("place_needle rejects out-of-range parameters") {
    SynthParams p;
    p.angle_deg = 0.0;
    CHECK_THROWS_AS(synth::place_needle(p), std::invalid_argument);
    p.angle_deg = 90.0;
    CHECK_THROWS_AS(synth::place_needle(p), std::invalid_argument);
    p = SynthParams{};
    p.half_length = 0.0;
    CHECK_THROWS_AS(synth::place_needle(p), std::invalid_argument);
    p = SynthParams{};
    p.width_tip = 6.0;  // not thinner than the tail
    CHECK_THROWS_AS(synth::place_needle(p), std::invalid_argument);
    p = SynthParams{};
    p.noise_sigma = -1.0;
    CHECK_THROWS_AS(synth::place_needle(p), std::invalid_argument);
}

TEST_CASE("place_needle rejects geometry leaving the canvas") {
    SynthParams p;
    p.tip = {650, 100};  // midpoint would pass x=692
    CHECK_THROWS_AS(synth::place_needle(p), std::invalid_argument);

    // midpoint fits but the tail does not: the whole needle must fit
    p = SynthParams{};
    p.tip = {600, 100};
    p.half_length = 66.0;  // mid at x=646.7, tail at x=693.3
    CHECK_THROWS_AS(synth::place_needle(p), std::invalid_argument);
    p.half_length = 60.0;  // tail at x=684.9: fits
    CHECK_NOTHROW(synth::place_needle(p));
}

TEST_CASE("render paints a dark taper on the flat background") {
    const SynthParams p = small_params();
    const SynthScene scene = synth::render(p);
    REQUIRE(scene.image.width == 160);
    REQUIRE(scene.image.height == 160);

    // truth box is the tip/mid hull and the pose matches its corners
    CHECK(tip_vertex(scene.truth_box, scene.truth_class) == scene.truth_pose.tip);
    CHECK(mid_vertex(scene.truth_box, scene.truth_class) == scene.truth_pose.midpoint);
    CHECK(scene.truth_class == TipClass::LT);

    CHECK(scene.image.at(5, 5) == p.bg_intensity);
    CHECK(scene.image.at(150, 10) == p.bg_intensity);
    // pixel centered on the spine halfway down the needle is pure foreground
    CHECK(scene.image.at(58, 58) == p.fg_intensity);
    // needle is darker than background along the whole spine
    CHECK(scene.image.at(40, 40) < p.bg_intensity);
    CHECK(scene.image.at(80, 80) < p.bg_intensity);
}

TEST_CASE("render keeps the needle clean over a noisy background") {
    SynthParams p = small_params();
    p.noise_sigma = 10.0;
    p.seed = 99;
    const SynthScene scene = synth::render(p);

    // the spine pixel has full coverage, so compositing overwrites the noise
    CHECK(scene.image.at(58, 58) == p.fg_intensity);
    // the background did pick up noise somewhere in the far corner
    bool disturbed = false;
    for (int y = 120; y < 130 && !disturbed; ++y)
        for (int x = 120; x < 130 && !disturbed; ++x)
            disturbed = scene.image.at(x, y) != p.bg_intensity;
    CHECK(disturbed);
    // same params, same bytes
    CHECK(scene.image == synth::render(p).image);
}

TEST_CASE("render can start from a background file") {
    testutil::TempDir tmp("synthbg");
    ImageGray bg(160, 160);
    for (int y = 0; y < 160; ++y)
        for (int x = 0; x < 160; ++x)
            bg.at(x, y) = static_cast<std::uint8_t>((x + y) / 2);
    const auto bg_path = tmp.path / "bg.pgm";
    write_pgm(bg, bg_path);

    SynthParams p = small_params();
    p.background = bg_path;
    const SynthScene scene = synth::render(p);
    CHECK(scene.image.at(5, 5) == bg.at(5, 5));
    CHECK(scene.image.at(150, 10) == bg.at(150, 10));
    CHECK(scene.image.at(58, 58) == p.fg_intensity);

    ImageGray wrong(64, 64, 0);
    const auto wrong_path = tmp.path / "wrong.pgm";
    write_pgm(wrong, wrong_path);
    p.background = wrong_path;
    CHECK_THROWS_AS(synth::render(p), std::invalid_argument);
}

TEST_CASE("generate_batch is deterministic and index-stable") {
    BatchRanges r;
    r.img_w = 200;
    r.img_h = 160;
    r.half_length_lo = 20.0;
    r.half_length_hi = 40.0;
    const auto batch = synth::generate_batch(6, r, 9);
    REQUIRE(batch.size() == 6);

    const auto again = synth::generate_batch(6, r, 9);
    for (int i = 0; i < 6; ++i) {
        CHECK(batch[i].image == again[i].image);
        CHECK(batch[i].truth_pose.tip == again[i].truth_pose.tip);
    }
    // scene i depends on (seed, i) only, not on how many scenes were asked for
    const auto prefix = synth::generate_batch(3, r, 9);
    CHECK(prefix[2].image == batch[2].image);
    CHECK(prefix[2].truth_pose.tip == batch[2].truth_pose.tip);
    // a different master seed moves the needles
    const auto other = synth::generate_batch(1, r, 10);
    CHECK(other[0].image != batch[0].image);
}

TEST_CASE("generate_batch respects margins and produces valid truths") {
    BatchRanges r;
    r.img_w = 200;
    r.img_h = 160;
    r.half_length_lo = 20.0;
    r.half_length_hi = 40.0;
    r.margin = 8.0;
    const auto batch = synth::generate_batch(100, r, 31);
    int class_seen[4] = {0, 0, 0, 0};
    for (const auto& scene : batch) {
        const NeedlePose& pose = scene.truth_pose;
        const PixelPoint tail = tail_point(pose);
        for (const PixelPoint& pt : {pose.tip, pose.midpoint, tail}) {
            CHECK(pt.x >= r.margin - 1e-9);
            CHECK(pt.x <= r.img_w - r.margin + 1e-9);
            CHECK(pt.y >= r.margin - 1e-9);
            CHECK(pt.y <= r.img_h - r.margin + 1e-9);
        }
        CHECK(pose.angle_deg > r.angle_lo - 1e-9);
        CHECK(pose.angle_deg < r.angle_hi + 1e-9);
        CHECK(classify_tip(pose.tip, pose.midpoint) == scene.truth_class);
        ++class_seen[tip_class_index(scene.truth_class)];
    }
    for (int c = 0; c < 4; ++c) CHECK(class_seen[c] > 0);
}

TEST_CASE("generate_batch rejects impossible or malformed ranges") {
    BatchRanges r;
    r.img_w = 100;
    r.img_h = 100;
    r.margin = 50.0;  // no room left for any needle
    CHECK_THROWS_AS(synth::generate_batch(1, r, 0), std::invalid_argument);

    r = BatchRanges{};
    r.angle_lo = 0.0;
    CHECK_THROWS_AS(synth::generate_batch(1, r, 0), std::invalid_argument);
    r = BatchRanges{};
    r.angle_hi = 90.0;
    CHECK_THROWS_AS(synth::generate_batch(1, r, 0), std::invalid_argument);
    r = BatchRanges{};
    r.half_length_lo = 60.0;
    r.half_length_hi = 50.0;
    CHECK_THROWS_AS(synth::generate_batch(1, r, 0), std::invalid_argument);
    CHECK_THROWS_AS(synth::generate_batch(0, BatchRanges{}, 0), std::invalid_argument);
}

}  // TEST_SUITE
