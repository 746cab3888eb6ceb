#include "needle/detector.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "needle/geometry.hpp"

namespace needle {

namespace {

constexpr double kDegenerateEps = 1e-9;

struct Component {
    std::vector<int> pixels;  // linear indices, row-major scan order
};

bool is_foreground(std::uint8_t v, int threshold, bool darker) {
    return darker ? v <= threshold : v >= threshold;
}

// Largest 8-connected foreground component; ties resolved by scan order of
// the first pixel. BFS over a shared visited map keeps it linear.
Component largest_component(const ImageGray& img, int threshold, bool darker) {
    const int w = img.width;
    const int h = img.height;
    std::vector<std::uint8_t> visited(static_cast<std::size_t>(w) * h, 0);
    Component best;
    std::vector<int> queue;
    for (int start = 0; start < w * h; ++start) {
        if (visited[start]) continue;
        const int sx = start % w;
        const int sy = start / w;
        if (!is_foreground(img.at(sx, sy), threshold, darker)) continue;
        Component comp;
        queue.clear();
        queue.push_back(start);
        visited[start] = 1;
        while (!queue.empty()) {
            const int idx = queue.back();
            queue.pop_back();
            comp.pixels.push_back(idx);
            const int x = idx % w;
            const int y = idx / w;
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    if (dx == 0 && dy == 0) continue;
                    const int nx = x + dx;
                    const int ny = y + dy;
                    if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
                    const int nidx = ny * w + nx;
                    if (visited[nidx]) continue;
                    if (!is_foreground(img.at(nx, ny), threshold, darker)) continue;
                    visited[nidx] = 1;
                    queue.push_back(nidx);
                }
            }
        }
        if (comp.pixels.size() > best.pixels.size()) best = std::move(comp);
    }
    std::sort(best.pixels.begin(), best.pixels.end());
    return best;
}

PixelPoint pixel_center(int idx, int w) {
    return {idx % w + 0.5, idx / w + 0.5};
}

int mass_within(const Component& comp, int w, const PixelPoint& around, double radius) {
    const double r2 = radius * radius;
    int count = 0;
    for (int idx : comp.pixels) {
        const PixelPoint c = pixel_center(idx, w);
        const double dx = c.x - around.x;
        const double dy = c.y - around.y;
        if (dx * dx + dy * dy <= r2) ++count;
    }
    return count;
}

}  // namespace

int otsu_threshold(const ImageGray& img) {
    if (img.samples.empty()) throw std::invalid_argument("otsu over empty image");
    std::array<long long, 256> hist{};
    for (std::uint8_t v : img.samples) ++hist[v];
    const long long total = static_cast<long long>(img.samples.size());

    long long sum_all = 0;
    for (int v = 0; v < 256; ++v) sum_all += static_cast<long long>(v) * hist[v];

    long long w0 = 0;
    long long sum0 = 0;
    double best_var = -1.0;
    int best_t = 0;
    for (int t = 0; t < 256; ++t) {
        w0 += hist[t];
        if (w0 == 0) continue;
        const long long w1 = total - w0;
        if (w1 == 0) break;
        sum0 += static_cast<long long>(t) * hist[t];
        const double mu0 = static_cast<double>(sum0) / w0;
        const double mu1 = static_cast<double>(sum_all - sum0) / w1;
        const double var =
            static_cast<double>(w0) * static_cast<double>(w1) * (mu0 - mu1) * (mu0 - mu1);
        if (var > best_var) {
            best_var = var;
            best_t = t;
        }
    }
    return best_t;
}

std::vector<Detection> detect(const ImageGray& img, const DetectorConfig& cfg,
                              std::vector<std::string>* warnings) {
    if (cfg.min_component_px < 1)
        throw std::invalid_argument("min_component_px must be >= 1");
    if (!(cfg.tip_probe_radius > 0.0))
        throw std::invalid_argument("tip_probe_radius must be positive");
    if (!(cfg.confidence_floor >= 0.0 && cfg.confidence_floor <= 1.0))
        throw std::invalid_argument("confidence_floor outside [0,1]");
    if (img.samples.empty()) return {};

    const int threshold = cfg.fixed_threshold ? *cfg.fixed_threshold : otsu_threshold(img);
    const Component comp = largest_component(img, threshold, cfg.needle_darker);
    const long long n = static_cast<long long>(comp.pixels.size());
    if (n < cfg.min_component_px) return {};

    const int w = img.width;
    double mx = 0.0, my = 0.0;
    for (int idx : comp.pixels) {
        const PixelPoint c = pixel_center(idx, w);
        mx += c.x;
        my += c.y;
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);

    double mu20 = 0.0, mu02 = 0.0, mu11 = 0.0;
    for (int idx : comp.pixels) {
        const PixelPoint c = pixel_center(idx, w);
        const double dx = c.x - mx;
        const double dy = c.y - my;
        mu20 += dx * dx;
        mu02 += dy * dy;
        mu11 += dx * dy;
    }
    const double phi = 0.5 * std::atan2(2.0 * mu11, mu20 - mu02);
    const double ux = std::cos(phi);
    const double uy = std::sin(phi);

    // Extreme projections onto the principal axis give the endpoints.
    double proj_min = 0.0, proj_max = 0.0;
    PixelPoint end_min{}, end_max{};
    bool first = true;
    for (int idx : comp.pixels) {
        const PixelPoint c = pixel_center(idx, w);
        const double proj = (c.x - mx) * ux + (c.y - my) * uy;
        if (first || proj < proj_min) {
            proj_min = proj;
            end_min = c;
        }
        if (first || proj > proj_max) {
            proj_max = proj;
            end_max = c;
        }
        first = false;
    }

    const int mass_min = mass_within(comp, w, end_min, cfg.tip_probe_radius);
    const int mass_max = mass_within(comp, w, end_max, cfg.tip_probe_radius);
    const PixelPoint tip = mass_min <= mass_max ? end_min : end_max;
    const PixelPoint other = mass_min <= mass_max ? end_max : end_min;
    const PixelPoint mid{(tip.x + other.x) / 2.0, (tip.y + other.y) / 2.0};

    if (std::abs(tip.x - mid.x) < kDegenerateEps ||
        std::abs(tip.y - mid.y) < kDegenerateEps) {
        if (warnings)
            warnings->push_back("detected needle is axis-aligned; no box can encode it");
        return {};
    }

    Detection det;
    det.box = {std::min(tip.x, mid.x), std::min(tip.y, mid.y), std::max(tip.x, mid.x),
               std::max(tip.y, mid.y)};
    det.tip_class = classify_tip(tip, mid);

    // Shape consistency as confidence: fraction of component pixels inside a
    // capsule around the fitted axis, radius = mean width so a tapered
    // needle still scores close to 1 while blobs score low.
    const double ex = other.x - tip.x;
    const double ey = other.y - tip.y;
    const double len2 = ex * ex + ey * ey;
    const double len = std::sqrt(len2);
    const double r_fit = std::max(1.0, static_cast<double>(n) / std::max(len, 1.0));
    long long inside = 0;
    for (int idx : comp.pixels) {
        const PixelPoint c = pixel_center(idx, w);
        double t = ((c.x - tip.x) * ex + (c.y - tip.y) * ey) / len2;
        t = std::clamp(t, 0.0, 1.0);
        const double qx = tip.x + t * ex;
        const double qy = tip.y + t * ey;
        const double dx = c.x - qx;
        const double dy = c.y - qy;
        if (dx * dx + dy * dy <= r_fit * r_fit) ++inside;
    }
    det.confidence = std::max(cfg.confidence_floor,
                              static_cast<double>(inside) / static_cast<double>(n));
    det.confidence = std::min(det.confidence, 1.0);
    validate_detection(det);
    return {det};
}

std::optional<NeedlePose> detect_to_pose(const ImageGray& img, const DetectorConfig& cfg,
                                         std::vector<std::string>* warnings) {
    const auto dets = detect(img, cfg, warnings);
    const auto best = select_best(dets, 0.0);
    if (!best) return std::nullopt;
    return pose_from_detection(best->box, best->tip_class);
}

}  // namespace needle
