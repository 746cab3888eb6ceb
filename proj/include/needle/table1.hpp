#pragma once

#include <filesystem>
#include <vector>

#include "needle/geometry.hpp"

namespace needle {

/// One published evaluation row: detected/true tip, detected/true angle, and
/// the distance/error values printed alongside them.
struct Table1Row {
    int index = 0;
    PixelPoint det_tip;
    PixelPoint real_tip;
    double det_ang = 0.0;
    double real_ang = 0.0;
    double printed_dist = 0.0;
    double printed_err = 0.0;
};

/// The embedded 24-row reference fixture.
const std::vector<Table1Row>& table1_rows();

/// Loads a fixture CSV with columns
/// image,det_x,det_y,real_x,real_y,det_ang,real_ang,tip_dist,ang_err
/// (header row required) — the same data as the embedded fixture.
std::vector<Table1Row> load_table1_csv(const std::filesystem::path& path);

inline constexpr double kTable1RowTolerance = 0.005;   // vs printed 2-decimal values
inline constexpr double kTable1MeanTolerance = 0.01;   // vs published averages
inline constexpr double kTable1MeanDist = 4.80;        // px
inline constexpr double kTable1MeanErr = 0.85;         // degrees

struct Table1RowCheck {
    Table1Row row;
    double dist = 0.0;  // recomputed
    double err = 0.0;   // recomputed
    bool dist_ok = false;
    bool err_ok = false;
};

struct Table1Result {
    std::vector<Table1RowCheck> rows;
    double mean_dist = 0.0;
    double mean_err = 0.0;
    bool means_ok = false;
    bool all_ok = false;
};

/// Recomputes every row's distance/error from the coordinates and compares
/// them to the printed values (row tolerance) and the published averages
/// (mean tolerance).
Table1Result check_table1(const std::vector<Table1Row>& rows);

}  // namespace needle
