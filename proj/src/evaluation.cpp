#include "needle/evaluation.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "needle/csv.hpp"

namespace needle {

namespace {

void check_point(const PixelPoint& p, const char* what) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
        throw std::invalid_argument(std::string(what) + ": non-finite coordinate");
}

void check_angle(double deg, const char* what) {
    if (!(deg >= 0.0 && deg <= 90.0))
        throw std::invalid_argument(std::string(what) + ": angle outside [0,90]");
}

// Tips print as "(x,y)" — bare integers when whole, else 2 decimals.
std::string format_tip(const PixelPoint& p) {
    char buf[64];
    const auto coord = [](double v, char* dst, std::size_t n) {
        if (v == std::floor(v) && std::abs(v) < 1e15)
            std::snprintf(dst, n, "%.0f", v);
        else
            std::snprintf(dst, n, "%.2f", v);
    };
    char xs[24], ys[24];
    coord(p.x, xs, sizeof xs);
    coord(p.y, ys, sizeof ys);
    std::snprintf(buf, sizeof buf, "(%s,%s)", xs, ys);
    return buf;
}

const char* kColumns[] = {"Image",    "Det Tip",  "Real Tip", "Det Ang",
                          "Real Ang", "Tip Dist", "Ang Err"};

std::vector<std::string> record_cells(const EvalRecord& r) {
    return {
        r.image_id,
        r.det_tip ? format_tip(*r.det_tip) : "-",
        format_tip(r.real_tip),
        r.det_angle ? format_2dp(*r.det_angle) : "-",
        format_2dp(r.real_angle),
        r.tip_dist ? format_2dp(*r.tip_dist) : "-",
        r.ang_err ? format_2dp(*r.ang_err) : "-",
    };
}

std::vector<std::string> summary_cells(const EvalSummary& s) {
    return {"average", "-", "-", "-", "-", format_2dp(s.mean_tip_dist),
            format_2dp(s.mean_ang_err)};
}

std::string emit_csv(const std::vector<EvalRecord>& records, const EvalSummary& s) {
    std::string out = csv_join({kColumns, kColumns + 7}) + "\n";
    for (const auto& r : records) out += csv_join(record_cells(r)) + "\n";
    out += csv_join(summary_cells(s)) + "\n";
    return out;
}

std::string emit_markdown(const std::vector<EvalRecord>& records, const EvalSummary& s) {
    const auto row = [](const std::vector<std::string>& cells) {
        std::string line = "|";
        for (const auto& c : cells) line += " " + c + " |";
        return line + "\n";
    };
    std::string out = row({kColumns, kColumns + 7});
    out += "|---|---|---|---|---|---|---|\n";
    for (const auto& r : records) out += row(record_cells(r));
    out += row(summary_cells(s));
    return out;
}

}  // namespace

double tip_distance(const PixelPoint& det, const PixelPoint& real) {
    check_point(det, "det tip");
    check_point(real, "real tip");
    return std::hypot(det.x - real.x, det.y - real.y);
}

double angle_error(double det_deg, double real_deg) {
    check_angle(det_deg, "det angle");
    check_angle(real_deg, "real angle");
    return std::abs(det_deg - real_deg);
}

std::pair<std::vector<EvalRecord>, EvalSummary> evaluate_pairs(
    const std::vector<EvalPair>& pairs) {
    if (pairs.empty()) throw std::invalid_argument("evaluate_pairs: no pairs given");

    std::vector<EvalRecord> records;
    records.reserve(pairs.size());
    EvalSummary summary;
    summary.n = static_cast<int>(pairs.size());

    double dist_sum = 0.0;
    double err_sum = 0.0;
    int class_pairs = 0;
    int class_hits = 0;

    for (const auto& p : pairs) {
        if (p.image_id.empty())
            throw std::invalid_argument("evaluate_pairs: empty image_id");
        check_point(p.truth.tip, "real tip");
        check_angle(p.truth.angle_deg, "real angle");

        EvalRecord rec;
        rec.image_id = p.image_id;
        rec.real_tip = p.truth.tip;
        rec.real_angle = p.truth.angle_deg;
        rec.real_class = p.truth.tip_class;
        if (p.det) {
            rec.det_tip = p.det->tip;
            rec.det_angle = p.det->angle_deg;
            rec.det_class = p.det->tip_class;
            rec.tip_dist = tip_distance(p.det->tip, p.truth.tip);
            rec.ang_err = angle_error(p.det->angle_deg, p.truth.angle_deg);
            dist_sum += *rec.tip_dist;
            err_sum += *rec.ang_err;
            summary.max_tip_dist = std::max(summary.max_tip_dist, *rec.tip_dist);
            if (rec.det_class && rec.real_class) {
                ++class_pairs;
                if (*rec.det_class == *rec.real_class) ++class_hits;
            }
        } else {
            ++summary.misses;
        }
        records.push_back(std::move(rec));
    }

    const int present = summary.n - summary.misses;
    if (present > 0) {
        summary.mean_tip_dist = dist_sum / present;
        summary.mean_ang_err = err_sum / present;
    }
    if (class_pairs > 0)
        summary.class_accuracy = static_cast<double>(class_hits) / class_pairs;
    return {std::move(records), summary};
}

std::string format_2dp(double v) {
    if (!std::isfinite(v)) throw std::invalid_argument("format_2dp: non-finite value");
    const long long cents = std::llround(v * 100.0);  // half away from zero
    const long long whole = cents / 100;
    const long long frac = std::llabs(cents % 100);
    char buf[40];
    std::snprintf(buf, sizeof buf, "%s%lld.%02lld",
                  (cents < 0 && whole == 0) ? "-" : "", whole, frac);
    return buf;
}

std::string emit_report(const std::vector<EvalRecord>& records,
                        const EvalSummary& summary, ReportFormat format) {
    for (const auto& r : records)
        if (r.image_id.empty())
            throw std::invalid_argument("emit_report: empty image_id");
    return format == ReportFormat::csv ? emit_csv(records, summary)
                                       : emit_markdown(records, summary);
}

}  // namespace needle
