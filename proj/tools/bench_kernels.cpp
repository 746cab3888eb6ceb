// Times each raster kernel in its OpenMP form against the serial reference
// and verifies the outputs are byte-identical while at it.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include "needle/image.hpp"
#include "needle/kernels.hpp"
#include "needle/rng.hpp"

#ifdef NEEDLE_HAVE_OPENMP
#include <omp.h>
#endif

namespace {

using needle::ImageGray;
namespace kernels = needle::kernels;

ImageGray random_image(int w, int h, std::uint64_t seed) {
    ImageGray img(w, h);
    needle::SplitMix64 rng(seed);
    for (auto& s : img.samples) s = static_cast<std::uint8_t>(rng.next() & 0xFF);
    return img;
}

double time_ms(int reps, const std::function<void()>& fn) {
    fn();  // warm-up
    const auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < reps; ++i) fn();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

struct Case {
    const char* name;
    std::function<ImageGray(const ImageGray&)> parallel;
    std::function<ImageGray(const ImageGray&)> serial;
};

}  // namespace

int main(int argc, char** argv) {
    int w = 2048, h = 1536, reps = 5;
    for (int i = 1; i + 1 < argc; i += 2) {
        const std::string flag = argv[i];
        const int value = std::atoi(argv[i + 1]);
        if (flag == "--width") w = value;
        else if (flag == "--height") h = value;
        else if (flag == "--reps") reps = value;
    }
    if (w < 1 || h < 1 || reps < 1) {
        std::fprintf(stderr, "usage: bench_kernels [--width N] [--height N] [--reps N]\n");
        return 2;
    }

#ifdef NEEDLE_HAVE_OPENMP
    std::printf("OpenMP enabled, max threads %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP disabled; both columns run serial code\n");
#endif
    std::printf("canvas %dx%d, %d rep(s) per kernel\n\n", w, h, reps);

    const ImageGray src = random_image(w, h, 42);

    const std::vector<Case> cases = {
        {"flip_h", [](const ImageGray& s) { return kernels::flip_h(s); },
         [](const ImageGray& s) { return kernels::serial::flip_h(s); }},
        {"flip_v", [](const ImageGray& s) { return kernels::flip_v(s); },
         [](const ImageGray& s) { return kernels::serial::flip_v(s); }},
        {"rot90_cw", [](const ImageGray& s) { return kernels::rot90_cw(s); },
         [](const ImageGray& s) { return kernels::serial::rot90_cw(s); }},
        {"rotate_bilinear(17deg)",
         [](const ImageGray& s) { return kernels::rotate_bilinear(s, 17.0, 127); },
         [](const ImageGray& s) { return kernels::serial::rotate_bilinear(s, 17.0, 127); }},
        {"add_gaussian_noise(10)",
         [](const ImageGray& s) { return kernels::add_gaussian_noise(s, 10.0, 7); },
         [](const ImageGray& s) { return kernels::serial::add_gaussian_noise(s, 10.0, 7); }},
    };

    std::printf("%-24s %12s %12s %9s %6s\n", "kernel", "serial ms", "parallel ms",
                "speedup", "match");
    bool all_match = true;
    for (const auto& c : cases) {
        const ImageGray serial_out = c.serial(src);
        const ImageGray parallel_out = c.parallel(src);
        const bool match = serial_out == parallel_out;
        all_match = all_match && match;
        const double ts = time_ms(reps, [&] { (void)c.serial(src); });
        const double tp = time_ms(reps, [&] { (void)c.parallel(src); });
        std::printf("%-24s %12.2f %12.2f %8.2fx %6s\n", c.name, ts, tp,
                    ts / (tp > 0.0 ? tp : 1e-9), match ? "yes" : "NO");
    }

    // capsule compositing mutates the canvas: time it separately
    {
        kernels::TaperedCapsule cap{w * 0.15, h * 0.2, w * 0.8, h * 0.75, 2.0, 8.0};
        ImageGray canvas_s = src, canvas_p = src;
        kernels::serial::composite_capsule(canvas_s, cap, 30);
        kernels::composite_capsule(canvas_p, cap, 30);
        const bool match = canvas_s == canvas_p;
        all_match = all_match && match;
        const double ts = time_ms(reps, [&] {
            ImageGray c2 = src;
            kernels::serial::composite_capsule(c2, cap, 30);
        });
        const double tp = time_ms(reps, [&] {
            ImageGray c2 = src;
            kernels::composite_capsule(c2, cap, 30);
        });
        std::printf("%-24s %12.2f %12.2f %8.2fx %6s\n", "composite_capsule", ts, tp,
                    ts / (tp > 0.0 ? tp : 1e-9), match ? "yes" : "NO");
    }

    if (!all_match) {
        std::fprintf(stderr, "\nFAIL: parallel output differs from serial reference\n");
        return 1;
    }
    std::printf("\nall kernels byte-identical to the serial reference\n");
    return 0;
}
