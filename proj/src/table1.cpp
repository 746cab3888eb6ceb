#include "needle/table1.hpp"

#include <cmath>
#include <stdexcept>

#include "needle/csv.hpp"
#include "needle/evaluation.hpp"

namespace needle {

const std::vector<Table1Row>& table1_rows() {
    // clang-format off
    static const std::vector<Table1Row> rows = {
        { 1, {424, 215}, {422, 212}, 30.81, 31.04,  3.61, 0.23},
        { 2, {385, 438}, {388, 436}, 23.44, 23.59,  3.61, 0.15},
        { 3, {469, 336}, {469, 338}, 43.27, 42.73,  2.00, 0.54},
        { 4, {460, 325}, {468, 335}, 42.13, 42.66, 12.81, 0.53},
        { 5, {372, 247}, {372, 247}, 44.13, 43.79,  0.00, 0.34},
        { 6, {362, 218}, {361, 215}, 43.35, 44.04,  3.16, 0.69},
        { 7, {424, 138}, {426, 138}, 44.23, 44.19,  2.00, 0.04},
        { 8, {326, 292}, {329, 293}, 45.00, 44.07,  3.16, 0.93},
        { 9, {367, 345}, {364, 346}, 51.30, 51.04,  3.16, 0.26},
        {10, {358, 354}, {364, 345}, 50.66, 51.53, 10.82, 0.87},
        {11, {451, 199}, {456, 195}, 50.43, 50.24,  6.40, 0.19},
        {12, {534, 275}, {531, 276}, 49.07, 50.89,  3.16, 1.82},
        {13, {383, 177}, {379, 178}, 48.55, 49.24,  4.12, 0.69},
        {14, {377, 203}, {376, 204}, 49.19, 50.99,  1.41, 1.80},
        {15, {319, 308}, {317, 311}, 50.03, 51.13,  3.61, 1.10},
        {16, {453,  92}, {452,  91}, 38.87, 38.34,  1.41, 0.53},
        {17, {337, 136}, {337, 139}, 38.37, 37.69,  3.00, 0.68},
        {18, {367, 359}, {371, 361}, 38.51, 37.99,  4.47, 0.52},
        {19, {572, 190}, {570, 187}, 36.16, 37.20,  3.61, 1.04},
        {20, {254, 299}, {257, 298}, 66.75, 68.03,  3.16, 1.28},
        {21, {446, 174}, {449, 171}, 65.98, 67.28,  4.24, 1.30},
        {22, {322, 250}, {326, 251}, 66.97, 67.41,  4.12, 0.44},
        {23, {324, 246}, {326, 223}, 67.11, 70.89, 23.09, 3.78},
        {24, { 90, 254}, { 86, 251}, 62.07, 61.39,  5.00, 0.68},
    };
    // clang-format on
    return rows;
}

std::vector<Table1Row> load_table1_csv(const std::filesystem::path& path) {
    const auto cells = read_csv(path);
    if (cells.empty()) throw std::invalid_argument("fixture csv is empty");
    std::vector<Table1Row> rows;
    const auto num = [&](const std::string& s, std::size_t lineno) {
        try {
            std::size_t used = 0;
            const double v = std::stod(s, &used);
            if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            throw std::invalid_argument(path.string() + ": bad number '" + s +
                                        "' on row " + std::to_string(lineno));
        }
    };
    for (std::size_t i = 1; i < cells.size(); ++i) {  // row 0 is the header
        const auto& row = cells[i];
        if (row.size() != 9)
            throw std::invalid_argument(path.string() + ": expected 9 columns on row " +
                                        std::to_string(i + 1));
        Table1Row out;
        out.index = static_cast<int>(num(row[0], i + 1));
        out.det_tip = {num(row[1], i + 1), num(row[2], i + 1)};
        out.real_tip = {num(row[3], i + 1), num(row[4], i + 1)};
        out.det_ang = num(row[5], i + 1);
        out.real_ang = num(row[6], i + 1);
        out.printed_dist = num(row[7], i + 1);
        out.printed_err = num(row[8], i + 1);
        rows.push_back(out);
    }
    if (rows.empty()) throw std::invalid_argument(path.string() + ": no data rows");
    return rows;
}

Table1Result check_table1(const std::vector<Table1Row>& rows) {
    if (rows.empty()) throw std::invalid_argument("check_table1: no rows");
    Table1Result result;
    double dist_sum = 0.0;
    double err_sum = 0.0;
    bool rows_ok = true;
    for (const auto& row : rows) {
        Table1RowCheck check;
        check.row = row;
        check.dist = tip_distance(row.det_tip, row.real_tip);
        check.err = angle_error(row.det_ang, row.real_ang);
        // tiny slack so exact-boundary values are not lost to representation
        check.dist_ok = std::abs(check.dist - row.printed_dist) <= kTable1RowTolerance + 1e-12;
        check.err_ok = std::abs(check.err - row.printed_err) <= kTable1RowTolerance + 1e-12;
        rows_ok = rows_ok && check.dist_ok && check.err_ok;
        dist_sum += check.dist;
        err_sum += check.err;
        result.rows.push_back(check);
    }
    result.mean_dist = dist_sum / static_cast<double>(rows.size());
    result.mean_err = err_sum / static_cast<double>(rows.size());
    result.means_ok = std::abs(result.mean_dist - kTable1MeanDist) <= kTable1MeanTolerance &&
                      std::abs(result.mean_err - kTable1MeanErr) <= kTable1MeanTolerance;
    result.all_ok = rows_ok && result.means_ok;
    return result;
}

}  // namespace needle
