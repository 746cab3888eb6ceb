#include <cmath>
#include <stdexcept>

#include <doctest.h>

#include "needle/augment.hpp"
#include "needle/kernels.hpp"
#include "needle/rng.hpp"
#include "test_util.hpp"

using namespace needle;
using augment::LabeledScene;

namespace {

LabeledScene checker_scene(int w, int h, const std::vector<std::pair<BoundingBox, TipClass>>& truths) {
    LabeledScene scene{ImageGray(w, h), truths};
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            scene.image.at(x, y) = static_cast<std::uint8_t>((x * 7 + y * 13) % 251);
    return scene;
}

bool boxes_close(const BoundingBox& a, const BoundingBox& b, double tol) {
    return std::abs(a.x_min - b.x_min) <= tol && std::abs(a.y_min - b.y_min) <= tol &&
           std::abs(a.x_max - b.x_max) <= tol && std::abs(a.y_max - b.y_max) <= tol;
}

}  // namespace

TEST_SUITE("augment") {

TEST_CASE("scene validation rejects boxes outside the extent") {
    LabeledScene ok = checker_scene(64, 48, {{{10, 10, 30, 20}, TipClass::LT}});
    validate_scene(ok);
    LabeledScene spill = checker_scene(64, 48, {{{10, 10, 64.5, 20}, TipClass::LT}});
    CHECK_THROWS_AS(validate_scene(spill), std::invalid_argument);
}

TEST_CASE("median intensity picks the middle sample") {
    ImageGray img(3, 1);
    img.samples = {10, 200, 30};
    CHECK(augment::median_intensity(img) == 30);
    ImageGray flat(5, 5, 77);
    CHECK(augment::median_intensity(flat) == 77);
}

TEST_CASE("rotate_point matches the frozen worked example") {
    const PixelPoint p = augment::rotate_point({100, 100}, 30.0, {346, 258});
    CHECK(p.x == doctest::Approx(211.957750669028).epsilon(1e-9));
    CHECK(p.y == doctest::Approx(-1.832013797941).epsilon(1e-9));
    // zero rotation is the identity
    const PixelPoint q = augment::rotate_point({4.5, 9.25}, 0.0, {346, 258});
    CHECK(q.x == 4.5);
    CHECK(q.y == 9.25);
}

TEST_CASE("horizontal flip mirrors boxes and swaps left/right classes") {
    // 692-wide canvas, box (422,212)-(522,312): mirrored box is (170,...)-(270,...)
    const LabeledScene scene =
        checker_scene(692, 516, {{{422, 212, 522, 312}, TipClass::LT}});
    const LabeledScene flipped = augment::flip_h(scene);
    REQUIRE(flipped.truths.size() == 1);
    CHECK(boxes_close(flipped.truths[0].first, {170, 212, 270, 312}, 1e-12));
    CHECK(flipped.truths[0].second == TipClass::RT);
    CHECK(flipped.image == kernels::flip_h(scene.image));

    const LabeledScene back = augment::flip_h(flipped);
    CHECK(back.image == scene.image);
    CHECK(boxes_close(back.truths[0].first, scene.truths[0].first, 1e-9));
    CHECK(back.truths[0].second == TipClass::LT);
}

TEST_CASE("vertical flip swaps top/bottom classes and is an involution") {
    const LabeledScene scene =
        checker_scene(100, 80, {{{10, 20, 40, 50}, TipClass::RB},
                                {{60, 10, 90, 70}, TipClass::LT}});
    const LabeledScene flipped = augment::flip_v(scene);
    REQUIRE(flipped.truths.size() == 2);
    CHECK(flipped.truths[0].second == TipClass::RT);
    CHECK(flipped.truths[1].second == TipClass::LB);
    CHECK(boxes_close(flipped.truths[0].first, {10, 30, 40, 60}, 1e-12));

    const LabeledScene back = augment::flip_v(flipped);
    CHECK(back.image == scene.image);
    CHECK(boxes_close(back.truths[0].first, scene.truths[0].first, 1e-9));
    CHECK(back.truths[0].second == TipClass::RB);
}

TEST_CASE("quarter turns rotate keypoints and complement the angle") {
    const BoundingBox box{422, 212, 522, 262};  // 100 x 50: angle != 45
    const LabeledScene scene = checker_scene(692, 516, {{box, TipClass::LT}});
    const LabeledScene turned = augment::rot90(scene, 1);
    REQUIRE(turned.truths.size() == 1);
    CHECK(turned.image.width == 516);
    CHECK(turned.image.height == 692);
    // tip (422,212) -> (516-212, 422) = (304, 422); mid (522,262) -> (254, 522)
    const auto& [tbox, tcls] = turned.truths[0];
    CHECK(boxes_close(tbox, {254, 422, 304, 522}, 1e-12));
    CHECK(tcls == TipClass::RT);  // tip right of mid, above it

    const double a0 = needle_angle(tip_vertex(box, TipClass::LT),
                                   mid_vertex(box, TipClass::LT));
    const double a1 = needle_angle(tip_vertex(tbox, tcls), mid_vertex(tbox, tcls));
    CHECK(a1 == doctest::Approx(90.0 - a0).epsilon(1e-12));
}

TEST_CASE("rot90 cycles: four turns restore the scene, negatives wrap") {
    const LabeledScene scene =
        checker_scene(60, 44, {{{5, 7, 20, 30}, TipClass::LB}});
    LabeledScene cur = scene;
    for (int k = 0; k < 4; ++k) cur = augment::rot90(cur, 1);
    CHECK(cur.image == scene.image);
    CHECK(boxes_close(cur.truths[0].first, scene.truths[0].first, 1e-9));
    CHECK(cur.truths[0].second == TipClass::LB);

    const LabeledScene direct = augment::rot90(scene, 3);
    const LabeledScene wrapped = augment::rot90(scene, -1);
    CHECK(direct.image == wrapped.image);
    CHECK(boxes_close(direct.truths[0].first, wrapped.truths[0].first, 1e-12));
    CHECK(augment::rot90(scene, 0).image == scene.image);
}

TEST_CASE("rot90 keeps class self-consistency for every class") {
    SplitMix64 rng(41);
    for (int trial = 0; trial < 200; ++trial) {
        const BoundingBox box = testutil::random_box(rng, 90.0, 70.0, 1.0);
        const TipClass c = tip_class_from_index(static_cast<int>(rng.next_below(4)));
        const LabeledScene scene = checker_scene(90, 70, {{box, c}});
        const LabeledScene turned = augment::rot90(scene, 1 + static_cast<int>(rng.next_below(3)));
        REQUIRE(turned.truths.size() == 1);
        const auto& [tbox, tcls] = turned.truths[0];
        // stored class equals the class recomputed from the stored geometry
        CHECK(classify_tip(tip_vertex(tbox, tcls), mid_vertex(tbox, tcls)) == tcls);
    }
}

TEST_CASE("rotate_scene maps keypoints like rotate_point and keeps pixels close") {
    const BoundingBox box{300, 200, 400, 280};
    const LabeledScene scene = checker_scene(692, 516, {{box, TipClass::LT}});
    const double theta = 15.0;
    const LabeledScene rotated = augment::rotate_scene(scene, theta, 0);
    REQUIRE(rotated.truths.size() == 1);

    const PixelPoint center{692 / 2.0, 516 / 2.0};
    const PixelPoint tip = augment::rotate_point(tip_vertex(box, TipClass::LT), theta, center);
    const PixelPoint mid = augment::rotate_point(mid_vertex(box, TipClass::LT), theta, center);
    const auto& [rbox, rcls] = rotated.truths[0];
    CHECK(rcls == classify_tip(tip, mid));
    CHECK(boxes_close(rbox,
                      {std::min(tip.x, mid.x), std::min(tip.y, mid.y),
                       std::max(tip.x, mid.x), std::max(tip.y, mid.y)},
                      1e-9));
    CHECK(rotated.image == kernels::rotate_bilinear(scene.image, theta, 0));
}

TEST_CASE("rotate_scene drops truths pushed off the canvas") {
    // a box in the top-left corner swings off the top edge under a 40-degree
    // clockwise turn about the center; the central box stays put
    const LabeledScene scene = checker_scene(200, 200, {{{5, 5, 25, 25}, TipClass::LT},
                                                        {{90, 90, 110, 110}, TipClass::LT}});
    std::vector<std::string> warnings;
    const LabeledScene rotated = augment::rotate_scene(scene, 40.0, 0, &warnings);
    CHECK(rotated.truths.size() == 1);
    CHECK(warnings.size() == 1);
}

TEST_CASE("rotate_scene default fill is the median intensity") {
    // median 60 everywhere except bright corners; the uncovered output corner
    // must take the median, not anything sampled near the source corner
    ImageGray img(50, 50, 60);
    img.at(0, 0) = 200;
    img.at(49, 0) = 200;
    img.at(0, 49) = 200;
    img.at(49, 49) = 200;
    const LabeledScene rotated = augment::rotate_scene({img, {}}, 45.0);
    CHECK(rotated.image.at(0, 0) == 60);
}

TEST_CASE("rotation folds the needle angle back into [0,90]") {
    SplitMix64 rng(53);
    const PixelPoint center{100, 100};
    for (int trial = 0; trial < 500; ++trial) {
        // random needle as tip/mid pair, rotated by a random angle
        const PixelPoint tip{rng.uniform(60, 140), rng.uniform(60, 140)};
        const PixelPoint mid{rng.uniform(60, 140), rng.uniform(60, 140)};
        if (std::abs(tip.x - mid.x) < 1e-6 || std::abs(tip.y - mid.y) < 1e-6) continue;
        const double theta = rng.uniform(-180.0, 180.0);
        const PixelPoint rtip = augment::rotate_point(tip, theta, center);
        const PixelPoint rmid = augment::rotate_point(mid, theta, center);
        if (std::abs(rtip.x - rmid.x) < 1e-6 || std::abs(rtip.y - rmid.y) < 1e-6) continue;

        // signed angle of the segment advances by exactly theta (y-down, cw)
        const double before =
            std::atan2(mid.y - tip.y, mid.x - tip.x) * 180.0 / 3.14159265358979323846;
        const double after =
            std::atan2(rmid.y - rtip.y, rmid.x - rtip.x) * 180.0 / 3.14159265358979323846;
        double delta = std::fmod(after - before - theta, 360.0);
        if (delta > 180.0) delta -= 360.0;
        if (delta < -180.0) delta += 360.0;
        CHECK(std::abs(delta) < 1e-9);

        // unsigned angle stays the fold of the signed one
        const double unsigned_after = needle_angle(rtip, rmid);
        double fold = std::abs(std::fmod(std::abs(after), 180.0));
        if (fold > 90.0) fold = 180.0 - fold;
        CHECK(std::abs(unsigned_after - fold) < 1e-9);
    }
}

TEST_CASE("corrupt perturbs pixels deterministically and keeps labels") {
    const LabeledScene scene = checker_scene(64, 48, {{{10, 10, 30, 30}, TipClass::RB}});
    const LabeledScene noisy = augment::corrupt(scene, 8.0, 1234);
    CHECK(noisy.truths.size() == 1);
    CHECK(boxes_close(noisy.truths[0].first, scene.truths[0].first, 0.0));
    CHECK(noisy.truths[0].second == TipClass::RB);
    CHECK(noisy.image == augment::corrupt(scene, 8.0, 1234).image);
    CHECK(noisy.image != scene.image);
    CHECK(augment::corrupt(scene, 0.0, 7).image == scene.image);
}

}  // TEST_SUITE
