#include "needle/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "needle/augment.hpp"
#include "needle/csv.hpp"
#include "needle/detection.hpp"
#include "needle/detector.hpp"
#include "needle/evaluation.hpp"
#include "needle/geometry.hpp"
#include "needle/image.hpp"
#include "needle/manifest.hpp"
#include "needle/overlay.hpp"
#include "needle/rng.hpp"
#include "needle/synthesis.hpp"
#include "needle/table1.hpp"
#include "needle/yolo.hpp"

namespace needle {

namespace fs = std::filesystem;

namespace {

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    return h;
}

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_number(const std::string& s, const std::string& context) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument(context + ": bad number '" + s + "'");
    }
}

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                     t0)
        .count();
}

/// Persists the options given on the command line so a run can be reproduced
/// from its output directory alone (unset options re-resolve to the same
/// built-in defaults). Sectioned by subcommand so --config can re-read it.
void echo_config(CLI::App* sub, const fs::path& out_dir) {
    std::ofstream out(out_dir / "run_config.ini", std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + (out_dir / "run_config.ini").string());
    out << "[" << sub->get_name() << "]\n" << sub->config_to_str(false, false);
}

// --- pose/truth tables -----------------------------------------------------
// truths.csv / poses.csv columns:
//   image_id,tip_class,tip_x,tip_y,mid_x,mid_y,angle_deg[,confidence]
// Full-precision coordinates so evaluation sees exactly what was generated.

struct PoseRow {
    std::string id;
    NeedlePose pose;
    std::optional<double> confidence;
};

void write_pose_csv(const fs::path& path, const std::vector<PoseRow>& rows,
                    bool with_confidence) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    std::vector<std::string> header = {"image_id", "tip_class", "tip_x",    "tip_y",
                                       "mid_x",    "mid_y",     "angle_deg"};
    if (with_confidence) header.push_back("confidence");
    out << csv_join(header) << "\n";
    for (const auto& row : rows) {
        std::vector<std::string> cells = {row.id,
                                          to_string(row.pose.tip_class),
                                          g17(row.pose.tip.x),
                                          g17(row.pose.tip.y),
                                          g17(row.pose.midpoint.x),
                                          g17(row.pose.midpoint.y),
                                          g17(row.pose.angle_deg)};
        if (with_confidence) cells.push_back(g17(row.confidence.value_or(0.0)));
        out << csv_join(cells) << "\n";
    }
    if (!out) throw std::runtime_error("short write: " + path.string());
}

struct PoseTable {
    std::vector<std::string> order;  // ids in file order
    std::map<std::string, PoseObservation> by_id;
};

PoseTable read_pose_csv(const fs::path& path) {
    const auto rows = read_csv(path);
    if (rows.empty() || rows[0].empty() || rows[0][0] != "image_id")
        throw std::invalid_argument(path.string() +
                                    ": expected header starting with image_id");
    PoseTable table;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& row = rows[i];
        if (row.size() < 7)
            throw std::invalid_argument(path.string() + ": row " + std::to_string(i + 1) +
                                        " has fewer than 7 columns");
        const std::string& id = row[0];
        if (id.empty())
            throw std::invalid_argument(path.string() + ": empty image_id on row " +
                                        std::to_string(i + 1));
        if (table.by_id.count(id))
            throw std::invalid_argument(path.string() + ": duplicate image_id '" + id +
                                        "'");
        PoseObservation obs;
        obs.tip_class = tip_class_from_string(row[1]);
        obs.tip = {parse_number(row[2], path.string()), parse_number(row[3], path.string())};
        obs.angle_deg = parse_number(row[6], path.string());
        table.order.push_back(id);
        table.by_id.emplace(id, obs);
    }
    return table;
}

// --- synth ------------------------------------------------------------------

struct SynthCmd {
    int n = 120;
    int train_count = -1;  // default: 4/5 of n
    std::uint64_t seed = 7;
    std::string out;
    synth::BatchRanges ranges;
    int fg = 40;  // staged as int so config echo/parse stays numeric
    int bg = 200;
    std::string background;
    double px_per_mm = 20.0;
    double diameter_mm = 0.0;  // > 0 overrides width_tail via px_per_mm
};

void write_scene(const fs::path& split_dir, const std::string& stem,
                 const synth::SynthScene& scene) {
    write_pgm(scene.image, split_dir / "images" / (stem + ".pgm"));
    const std::string line = encode_yolo(scene.truth_box, scene.truth_class,
                                         scene.image.width, scene.image.height);
    std::ofstream lbl(split_dir / "labels" / (stem + ".txt"), std::ios::binary);
    if (!lbl) throw std::runtime_error("cannot write label for " + stem);
    lbl << line << "\n";
}

void run_synth(const SynthCmd& cmd, CLI::App* sub, std::ostream& out, std::ostream&) {
    if (cmd.n < 1) throw std::invalid_argument("--n must be >= 1");
    const int train_count = cmd.train_count < 0 ? cmd.n * 4 / 5 : cmd.train_count;
    if (train_count > cmd.n)
        throw std::invalid_argument("--train-count cannot exceed --n");

    synth::BatchRanges ranges = cmd.ranges;
    ranges.fg_intensity = static_cast<std::uint8_t>(cmd.fg);
    ranges.bg_intensity = static_cast<std::uint8_t>(cmd.bg);
    if (!cmd.background.empty()) ranges.background = fs::path(cmd.background);
    if (cmd.diameter_mm > 0.0) {
        if (!(cmd.px_per_mm > 0.0))
            throw std::invalid_argument("--px-per-mm must be positive");
        ranges.width_tail = cmd.diameter_mm * cmd.px_per_mm;
    }

    const auto scenes = synth::generate_batch(cmd.n, ranges, cmd.seed);

    const fs::path root(cmd.out);
    const fs::path train = root / "train";
    const fs::path test = root / "test";
    for (const fs::path& split : {train, test}) {
        fs::create_directories(split / "images");
        fs::create_directories(split / "labels");
    }

    const int width = std::max<int>(3, std::to_string(cmd.n - 1).size());
    std::vector<PoseRow> train_rows, test_rows;
    for (int i = 0; i < cmd.n; ++i) {
        std::ostringstream name;
        name << "scene_" << std::setw(width) << std::setfill('0') << i;
        const std::string stem = name.str();
        const bool in_train = i < train_count;
        write_scene(in_train ? train : test, stem, scenes[static_cast<std::size_t>(i)]);
        (in_train ? train_rows : test_rows)
            .push_back({stem, scenes[static_cast<std::size_t>(i)].truth_pose, {}});
    }
    write_pose_csv(train / "truths.csv", train_rows, false);
    write_pose_csv(test / "truths.csv", test_rows, false);
    echo_config(sub, root);
    out << "wrote " << train_rows.size() << " train and " << test_rows.size()
        << " test scenes under " << root.string() << "\n";
}

// --- augment ------------------------------------------------------------------

struct AugOp {
    enum class Kind { identity, flip_h, flip_v, rot90, rotate, noise };
    Kind kind = Kind::identity;
    int turns = 1;       // rot90
    double value = 0.0;  // degrees or sigma
    std::string suffix;  // appended to the stem ("" for identity)
};

std::string trim_token(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    const auto e = s.find_last_not_of(" \t");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

std::string compact_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", std::abs(v));
    return buf;
}

AugOp parse_aug_op(const std::string& raw) {
    const std::string tok = trim_token(raw);
    const auto starts = [&](const char* p) { return tok.rfind(p, 0) == 0; };
    AugOp op;
    if (tok == "id" || tok == "identity") {
        op.kind = AugOp::Kind::identity;
        return op;
    }
    if (tok == "fh" || tok == "flip_h") {
        op.kind = AugOp::Kind::flip_h;
        op.suffix = "_fh";
        return op;
    }
    if (tok == "fv" || tok == "flip_v") {
        op.kind = AugOp::Kind::flip_v;
        op.suffix = "_fv";
        return op;
    }
    if (tok == "rot90" || starts("r90x")) {
        op.kind = AugOp::Kind::rot90;
        op.turns = tok == "rot90"
                       ? 1
                       : static_cast<int>(parse_number(tok.substr(4), "op " + tok));
        op.suffix = "_r90x" + std::to_string(((op.turns % 4) + 4) % 4);
        return op;
    }
    for (const char* prefix : {"rotate", "rotm", "rot"}) {
        if (starts(prefix) && tok.size() > std::strlen(prefix)) {
            std::string num = tok.substr(std::strlen(prefix));
            double sign = 1.0;
            if (std::string(prefix) == "rotm") sign = -1.0;
            op.kind = AugOp::Kind::rotate;
            op.value = sign * parse_number(num, "op " + tok);
            op.suffix = (op.value < 0.0 ? "_rotm" : "_rot") + compact_number(op.value);
            return op;
        }
    }
    for (const char* prefix : {"noise", "n"}) {
        if (starts(prefix) && tok.size() > std::strlen(prefix)) {
            op.kind = AugOp::Kind::noise;
            op.value = parse_number(tok.substr(std::strlen(prefix)), "op " + tok);
            if (op.value < 0.0) throw std::invalid_argument("op " + tok + ": sigma < 0");
            op.suffix = "_n" + compact_number(op.value);
            return op;
        }
    }
    throw std::invalid_argument("unknown augmentation op '" + tok + "'");
}

std::vector<AugOp> parse_ops(const std::string& list) {
    std::vector<AugOp> ops;
    std::stringstream ss(list);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!trim_token(tok).empty()) ops.push_back(parse_aug_op(tok));
    if (ops.empty()) throw std::invalid_argument("--ops resolved to an empty list");
    return ops;
}

struct AugmentCmd {
    std::string in;
    std::string out;
    std::string ops = "id,fh,fv,r90x1,rot15,n10";
    std::uint64_t seed = 7;
    int fill = -1;  // < 0 -> median of each image
};

void run_augment(const AugmentCmd& cmd, CLI::App* sub, std::ostream& out,
                 std::ostream& err) {
    const auto ops = parse_ops(cmd.ops);
    std::vector<std::string> warnings;
    const auto items = load_manifest(cmd.in, &warnings);
    for (const auto& w : warnings) err << "warning: " << w << "\n";
    if (items.empty()) throw std::invalid_argument("no usable items under " + cmd.in);

    const fs::path root(cmd.out);
    fs::create_directories(root / "images");
    fs::create_directories(root / "labels");

    std::optional<std::uint8_t> fill;
    if (cmd.fill >= 0) fill = static_cast<std::uint8_t>(std::min(cmd.fill, 255));

    std::size_t written = 0;
    for (const auto& item : items) {
        augment::LabeledScene scene;
        scene.image = read_pgm(item.image_path);
        for (const auto& rec : item.records)
            scene.truths.emplace_back(record_to_box(rec, scene.image.width, scene.image.height),
                                      tip_class_from_index(rec.class_index));

        for (std::size_t oi = 0; oi < ops.size(); ++oi) {
            const AugOp& op = ops[oi];
            augment::LabeledScene result;
            std::vector<std::string> op_warnings;
            switch (op.kind) {
                case AugOp::Kind::identity: result = scene; break;
                case AugOp::Kind::flip_h: result = augment::flip_h(scene); break;
                case AugOp::Kind::flip_v: result = augment::flip_v(scene); break;
                case AugOp::Kind::rot90: result = augment::rot90(scene, op.turns); break;
                case AugOp::Kind::rotate:
                    result = augment::rotate_scene(scene, op.value, fill, &op_warnings);
                    break;
                case AugOp::Kind::noise:
                    result = augment::corrupt(
                        scene, op.value,
                        mix_seed(mix_seed(cmd.seed, fnv1a(item.image_id)), oi));
                    break;
            }
            for (const auto& w : op_warnings)
                err << "warning: " << item.image_id << op.suffix << ": " << w << "\n";

            const std::string stem = item.image_id + op.suffix;
            write_pgm(result.image, root / "images" / (stem + ".pgm"));
            std::vector<YoloRecord> records;
            for (const auto& [box, cls] : result.truths)
                records.push_back(parse_yolo_line(
                    encode_yolo(box, cls, result.image.width, result.image.height)));
            write_label_file(records, root / "labels" / (stem + ".txt"));
            ++written;
        }
    }
    echo_config(sub, root);
    out << "augmented " << items.size() << " items into " << written << " outputs under "
        << root.string() << "\n";
}

// --- detect ---------------------------------------------------------------

struct DetectCmd {
    std::string in;
    std::string image;
    std::string from_file;
    std::string out;
    int threshold = -1;  // < 0 -> Otsu
    bool brighter = false;
    int min_component = 30;
    double probe_radius = 12.0;
    double conf_floor = 0.05;
    double nms_iou = 0.45;
    double conf = 0.25;
};

std::vector<fs::path> collect_images(const DetectCmd& cmd) {
    if (!cmd.image.empty()) return {fs::path(cmd.image)};
    if (cmd.in.empty())
        throw std::invalid_argument("detect needs --in <dir> or --image <file>");
    fs::path dir(cmd.in);
    if (fs::is_directory(dir / "images")) dir /= "images";
    if (!fs::is_directory(dir))
        throw std::invalid_argument("input directory not found: " + dir.string());
    std::vector<fs::path> paths;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".pgm")
            paths.push_back(entry.path());
    std::sort(paths.begin(), paths.end());
    if (paths.empty())
        throw std::invalid_argument("no .pgm images under " + dir.string());
    return paths;
}

void run_detect(const DetectCmd& cmd, CLI::App* sub, std::ostream& out,
                std::ostream& err) {
    if (!cmd.from_file.empty() && cmd.image.empty())
        throw std::invalid_argument("--from-file requires --image");

    DetectorConfig cfg;
    if (cmd.threshold >= 0) cfg.fixed_threshold = std::min(cmd.threshold, 255);
    cfg.needle_darker = !cmd.brighter;
    cfg.min_component_px = cmd.min_component;
    cfg.tip_probe_radius = cmd.probe_radius;
    cfg.confidence_floor = cmd.conf_floor;

    const auto paths = collect_images(cmd);
    const fs::path root(cmd.out);
    fs::create_directories(root / "detections");

    std::vector<PoseRow> poses;
    int misses = 0;
    const auto t_all = std::chrono::steady_clock::now();
    for (const auto& path : paths) {
        const std::string stem = path.stem().string();
        const auto t0 = std::chrono::steady_clock::now();
        std::vector<std::string> warnings;
        std::vector<Detection> dets = cmd.from_file.empty()
                                          ? detect(read_pgm(path), cfg, &warnings)
                                          : read_detection_file(cmd.from_file);
        dets = nms(dets, cmd.nms_iou);
        const auto best = select_best(dets, cmd.conf);
        const double ms = elapsed_ms(t0);

        for (const auto& w : warnings) err << "warning: " << stem << ": " << w << "\n";
        write_detection_file(dets, root / "detections" / (stem + ".txt"));
        if (best) {
            poses.push_back(
                {stem, pose_from_detection(best->box, best->tip_class), best->confidence});
            out << stem << ": " << dets.size() << " detection(s), "
                << format_2dp(ms) << " ms\n";
        } else {
            ++misses;
            out << stem << ": no detection, " << format_2dp(ms) << " ms\n";
        }
    }
    write_pose_csv(root / "poses.csv", poses, true);
    echo_config(sub, root);
    out << "wrote " << poses.size() << " pose(s), " << misses << " miss(es), total "
        << format_2dp(elapsed_ms(t_all)) << " ms\n";
}

// --- eval -------------------------------------------------------------------

struct EvalCmd {
    std::string truths;
    std::string poses;
    std::string out;
    std::string pairs = "files";  // or "fixture"
};

std::vector<EvalPair> fixture_pairs() {
    std::vector<EvalPair> pairs;
    for (const auto& row : table1_rows()) {
        EvalPair p;
        p.image_id = std::to_string(row.index);
        p.det = PoseObservation{row.det_tip, row.det_ang, std::nullopt};
        p.truth = PoseObservation{row.real_tip, row.real_ang, std::nullopt};
        pairs.push_back(std::move(p));
    }
    return pairs;
}

void run_eval(const EvalCmd& cmd, CLI::App* sub, std::ostream& out, std::ostream&) {
    std::vector<EvalPair> pairs;
    if (cmd.pairs == "fixture") {
        pairs = fixture_pairs();
    } else if (cmd.pairs == "files") {
        if (cmd.truths.empty() || cmd.poses.empty())
            throw std::invalid_argument("eval needs --truths and --poses");
        const PoseTable truths = read_pose_csv(cmd.truths);
        const PoseTable dets = read_pose_csv(cmd.poses);
        int joinable = 0;
        for (const auto& id : truths.order) {
            EvalPair p;
            p.image_id = id;
            p.truth = truths.by_id.at(id);
            const auto it = dets.by_id.find(id);
            if (it != dets.by_id.end()) {
                p.det = it->second;
                ++joinable;
            }
            pairs.push_back(std::move(p));
        }
        if (joinable == 0)
            throw std::invalid_argument("no image_id appears in both --truths and --poses");
    } else {
        throw std::invalid_argument("--pairs must be 'files' or 'fixture'");
    }

    const auto [records, summary] = evaluate_pairs(pairs);
    if (!cmd.out.empty()) {
        const fs::path root(cmd.out);
        fs::create_directories(root);
        for (const auto& [name, format] :
             {std::pair{"report.csv", ReportFormat::csv},
              std::pair{"report.md", ReportFormat::markdown}}) {
            std::ofstream f(root / name, std::ios::binary);
            if (!f) throw std::runtime_error("cannot write " + (root / name).string());
            f << emit_report(records, summary, format);
        }
        echo_config(sub, root);
    }
    out << "mean_tip_dist=" << format_2dp(summary.mean_tip_dist) << "px"
        << " mean_ang_err=" << format_2dp(summary.mean_ang_err) << "deg"
        << " class_acc="
        << (summary.class_accuracy ? format_2dp(*summary.class_accuracy) : "n/a") << "\n";
    if (summary.misses > 0)
        out << "misses=" << summary.misses << " of " << summary.n << "\n";
}

// --- table1 -----------------------------------------------------------------

struct Table1Cmd {
    std::string fixture;
    int row = 0;  // 0 = all rows
};

int run_table1(const Table1Cmd& cmd, std::ostream& out) {
    const std::vector<Table1Row> rows =
        cmd.fixture.empty() ? table1_rows() : load_table1_csv(cmd.fixture);
    const Table1Result result = check_table1(rows);

    const auto print_row = [&](const Table1RowCheck& check) {
        out << "row " << check.row.index << ": dist=" << format_2dp(check.dist)
            << " (printed " << format_2dp(check.row.printed_dist) << ") "
            << (check.dist_ok ? "PASS" : "FAIL") << ", err=" << format_2dp(check.err)
            << " (printed " << format_2dp(check.row.printed_err) << ") "
            << (check.err_ok ? "PASS" : "FAIL") << "\n";
    };

    if (cmd.row > 0) {
        if (cmd.row > static_cast<int>(result.rows.size()))
            throw std::invalid_argument("--row out of range 1.." +
                                        std::to_string(result.rows.size()));
        const auto& check = result.rows[static_cast<std::size_t>(cmd.row - 1)];
        print_row(check);
        return check.dist_ok && check.err_ok ? 0 : 1;
    }
    for (const auto& check : result.rows) print_row(check);
    out << "averages: tip_dist=" << format_2dp(result.mean_dist)
        << " ang_err=" << format_2dp(result.mean_err) << " (expect "
        << format_2dp(kTable1MeanDist) << "/" << format_2dp(kTable1MeanErr) << ") "
        << (result.means_ok ? "PASS" : "FAIL") << "\n";
    return result.all_ok ? 0 : 1;
}

// --- overlay ------------------------------------------------------------------

struct OverlayCmd {
    std::string image;
    std::string dets;
    std::string out = "overlay.ppm";
    double nms_iou = 0.45;
    double conf = 0.25;
};

void run_overlay(const OverlayCmd& cmd, std::ostream& out) {
    const ImageGray img = read_pgm(cmd.image);
    std::optional<Detection> best;
    if (!cmd.dets.empty()) {
        auto dets = read_detection_file(cmd.dets);
        dets = nms(dets, cmd.nms_iou);
        best = select_best(dets, cmd.conf);
    }
    write_ppm(render_overlay(img, best), cmd.out);
    out << "wrote " << cmd.out << "\n";
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"needle pose toolkit: synthesize, augment, detect and evaluate "
                 "vertex-anchored needle datasets"};
    app.name("needlekit");
    app.require_subcommand(1);
    app.set_config("--config", "",
                   "key=value file with one section per subcommand ([synth], "
                   "[detect], ...), as echoed to run_config.ini");
    int table1_status = 0;

    auto synth_cmd = std::make_shared<SynthCmd>();
    CLI::App* synth_app =
        app.add_subcommand("synth", "generate a synthetic labeled dataset");
    synth_app->add_option("--n", synth_cmd->n, "total scene count")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    synth_app->add_option("--train-count", synth_cmd->train_count,
                          "scenes in the train split (default: 4/5 of --n)");
    synth_app->add_option("--seed", synth_cmd->seed, "master seed")->capture_default_str();
    synth_app->add_option("--out", synth_cmd->out, "output dataset root")->required();
    synth_app->add_option("--img-w", synth_cmd->ranges.img_w, "canvas width")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    synth_app->add_option("--img-h", synth_cmd->ranges.img_h, "canvas height")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    synth_app->add_option("--angle-lo", synth_cmd->ranges.angle_lo, "min needle angle, deg")
        ->capture_default_str();
    synth_app->add_option("--angle-hi", synth_cmd->ranges.angle_hi, "max needle angle, deg")
        ->capture_default_str();
    synth_app
        ->add_option("--hl-lo", synth_cmd->ranges.half_length_lo,
                     "min tip-to-midpoint distance, px")
        ->capture_default_str();
    synth_app
        ->add_option("--hl-hi", synth_cmd->ranges.half_length_hi,
                     "max tip-to-midpoint distance, px")
        ->capture_default_str();
    synth_app->add_option("--width-tip", synth_cmd->ranges.width_tip, "needle width at the tip, px")
        ->capture_default_str();
    synth_app
        ->add_option("--width-tail", synth_cmd->ranges.width_tail,
                     "needle width at the tail, px")
        ->capture_default_str();
    synth_app->add_option("--fg", synth_cmd->fg, "needle intensity")
        ->capture_default_str()
        ->check(CLI::Range(0, 255));
    synth_app->add_option("--bg", synth_cmd->bg, "background intensity")
        ->capture_default_str()
        ->check(CLI::Range(0, 255));
    synth_app
        ->add_option("--noise-sigma", synth_cmd->ranges.noise_sigma,
                     "background Gaussian noise std")
        ->capture_default_str();
    synth_app->add_option("--margin", synth_cmd->ranges.margin, "border clearance, px")
        ->capture_default_str();
    synth_app->add_option("--background", synth_cmd->background,
                          "P5 image used as the background");
    synth_app
        ->add_option("--px-per-mm", synth_cmd->px_per_mm,
                     "pixel scale used with --diameter-mm")
        ->capture_default_str();
    synth_app->add_option("--diameter-mm", synth_cmd->diameter_mm,
                          "physical tail diameter; overrides --width-tail");
    synth_app->fallthrough();  // lets a trailing --config reach the parent app
    synth_app->callback(
        [synth_cmd, synth_app, &out, &err] { run_synth(*synth_cmd, synth_app, out, err); });

    auto augment_cmd = std::make_shared<AugmentCmd>();
    CLI::App* augment_app = app.add_subcommand(
        "augment", "apply flip/rotation/noise variants to a labeled dataset");
    augment_app->add_option("--in", augment_cmd->in, "dataset root (images/ + labels/)")
        ->required();
    augment_app->add_option("--out", augment_cmd->out, "output dataset root")->required();
    augment_app
        ->add_option("--ops", augment_cmd->ops,
                     "comma list: id,fh,fv,r90x<k>,rot<deg>,rotm<deg>,n<sigma>")
        ->capture_default_str();
    augment_app->add_option("--seed", augment_cmd->seed, "noise seed")->capture_default_str();
    augment_app->add_option("--fill", augment_cmd->fill,
                            "rotation fill 0..255 (default: image median)");
    augment_app->fallthrough();
    augment_app->callback([augment_cmd, augment_app, &out, &err] {
        run_augment(*augment_cmd, augment_app, out, err);
    });

    auto detect_cmd = std::make_shared<DetectCmd>();
    CLI::App* detect_app = app.add_subcommand(
        "detect", "run the classical detector (or ingest external detections)");
    detect_app->add_option("--in", detect_cmd->in, "directory of .pgm images");
    detect_app->add_option("--image", detect_cmd->image, "single image input");
    detect_app->add_option("--from-file", detect_cmd->from_file,
                           "detection exchange file (bypasses the detector)");
    detect_app->add_option("--out", detect_cmd->out, "output directory")->required();
    detect_app->add_option("--threshold", detect_cmd->threshold,
                           "fixed binarization level (default: Otsu)");
    detect_app->add_flag("--brighter", detect_cmd->brighter,
                         "needle is brighter than the background");
    detect_app
        ->add_option("--min-component", detect_cmd->min_component,
                     "min component size, px")
        ->capture_default_str();
    detect_app
        ->add_option("--probe-radius", detect_cmd->probe_radius,
                     "tip-probe radius, px")
        ->capture_default_str();
    detect_app->add_option("--conf-floor", detect_cmd->conf_floor, "confidence floor")
        ->capture_default_str();
    detect_app->add_option("--nms-iou", detect_cmd->nms_iou, "NMS IoU threshold")
        ->capture_default_str();
    detect_app->add_option("--conf", detect_cmd->conf, "selection confidence threshold")
        ->capture_default_str();
    detect_app->fallthrough();
    detect_app->callback([detect_cmd, detect_app, &out, &err] {
        run_detect(*detect_cmd, detect_app, out, err);
    });

    auto eval_cmd = std::make_shared<EvalCmd>();
    CLI::App* eval_app =
        app.add_subcommand("eval", "score detected poses against ground truth");
    eval_app->add_option("--truths", eval_cmd->truths, "truths.csv path");
    eval_app->add_option("--poses", eval_cmd->poses, "poses.csv path");
    eval_app->add_option("--out", eval_cmd->out, "report output directory");
    eval_app
        ->add_option("--pairs", eval_cmd->pairs,
                     "'files' (join csv files) or 'fixture' (embedded reference rows)")
        ->capture_default_str();
    eval_app->fallthrough();
    eval_app->callback(
        [eval_cmd, eval_app, &out, &err] { run_eval(*eval_cmd, eval_app, out, err); });

    auto table1_cmd = std::make_shared<Table1Cmd>();
    CLI::App* table1_app = app.add_subcommand(
        "table1", "recompute the reference evaluation rows and check them");
    table1_app->add_option("--fixture", table1_cmd->fixture,
                           "fixture csv (default: embedded rows)");
    table1_app->add_option("--row", table1_cmd->row, "check one 1-based row only");
    table1_app->callback(
        [table1_cmd, &out, &table1_status] { table1_status = run_table1(*table1_cmd, out); });

    auto overlay_cmd = std::make_shared<OverlayCmd>();
    CLI::App* overlay_app =
        app.add_subcommand("overlay", "write an annotated P6 view of a detection");
    overlay_app->add_option("--image", overlay_cmd->image, "P5 input image")->required();
    overlay_app->add_option("--dets", overlay_cmd->dets, "detection exchange file");
    overlay_app->add_option("--out", overlay_cmd->out, "output .ppm path")
        ->capture_default_str();
    overlay_app->add_option("--nms-iou", overlay_cmd->nms_iou, "NMS IoU threshold")
        ->capture_default_str();
    overlay_app->add_option("--conf", overlay_cmd->conf, "selection confidence threshold")
        ->capture_default_str();
    overlay_app->callback([overlay_cmd, &out] { run_overlay(*overlay_cmd, out); });

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return 0;
    } catch (const CLI::CallForAllHelp& e) {
        app.exit(e, out, err);
        return 0;
    } catch (const CLI::CallForVersion& e) {
        app.exit(e, out, err);
        return 0;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::out_of_range& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return table1_status;
}

}  // namespace needle
