#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "needle/cli.hpp"
#include "needle/csv.hpp"
#include "needle/detection.hpp"
#include "needle/image.hpp"
#include "needle/manifest.hpp"
#include "test_util.hpp"

using namespace needle;
namespace fs = std::filesystem;

namespace {

struct CliRun {
    int status = 0;
    std::string out;
    std::string err;
};

CliRun cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    CliRun run;
    run.status = run_cli(args, out, err);
    run.out = out.str();
    run.err = err.str();
    return run;
}

int count_files(const fs::path& dir, const std::string& ext) {
    if (!fs::is_directory(dir)) return -1;
    int n = 0;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ext) ++n;
    return n;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// small fast dataset; needles long enough for a reliable tip call
std::vector<std::string> synth_args(const fs::path& out, int n, unsigned seed) {
    return {"synth",  "--n",     std::to_string(n),   "--out",   out.string(),
            "--seed", std::to_string(seed),           "--img-w", "200",
            "--img-h", "160",    "--hl-lo", "30",     "--hl-hi", "40"};
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("help prints usage and exits cleanly") {
    const CliRun run = cli({"--help"});
    CHECK(run.status == 0);
    CHECK(run.out.find("needlekit") != std::string::npos);
    CHECK(run.out.find("synth") != std::string::npos);
    CHECK(run.out.find("eval") != std::string::npos);
}

TEST_CASE("bad invocations exit with the usage status") {
    CHECK(cli({}).status == 2);                        // subcommand required
    CHECK(cli({"synth", "--bogus"}).status == 2);      // unknown flag
    CHECK(cli({"synth"}).status == 2);                 // missing --out
    CHECK(cli({"frobnicate"}).status == 2);            // unknown subcommand
    const CliRun run = cli({"eval", "--pairs", "nonsense"});
    CHECK(run.status == 2);
    CHECK(run.err.find("error:") != std::string::npos);
}

TEST_CASE("reference check passes on the embedded fixture") {
    const CliRun run = cli({"table1"});
    CHECK(run.status == 0);
    CHECK(run.out.find("row 1:") != std::string::npos);
    CHECK(run.out.find("row 24:") != std::string::npos);
    CHECK(run.out.find("averages:") != std::string::npos);
    CHECK(run.out.find("PASS") != std::string::npos);
    CHECK(run.out.find("FAIL") == std::string::npos);

    const CliRun one = cli({"table1", "--row", "3"});
    CHECK(one.status == 0);
    CHECK(one.out.find("row 3:") == 0);
    CHECK(one.out.find("averages:") == std::string::npos);

    CHECK(cli({"table1", "--row", "99"}).status == 2);
}

TEST_CASE("reference check flags an inconsistent fixture") {
    testutil::TempDir tmp("fixture");
    const auto path = tmp.path / "rows.csv";
    {
        std::ofstream f(path);
        f << "image,det_x,det_y,real_x,real_y,det_ang,real_ang,tip_dist,ang_err\n";
        f << "1,3,4,0,0,30,31,5.00,1.00\n";     // consistent row
        f << "2,10,10,10,22,50,49,3.00,1.00\n";  // true distance is 12, not 3
    }
    const CliRun all = cli({"table1", "--fixture", path.string()});
    CHECK(all.status == 1);
    CHECK(all.out.find("FAIL") != std::string::npos);

    const CliRun first = cli({"table1", "--fixture", path.string(), "--row", "1"});
    CHECK(first.status == 0);  // the consistent row alone passes
    const CliRun second = cli({"table1", "--fixture", path.string(), "--row", "2"});
    CHECK(second.status == 1);
}

TEST_CASE("synth writes a paired train/test dataset deterministically") {
    testutil::TempDir tmp("synth");
    const fs::path ds = tmp.path / "ds";
    const CliRun run = cli(synth_args(ds, 10, 3));
    REQUIRE(run.status == 0);
    CHECK(run.out.find("wrote 8 train and 2 test scenes") != std::string::npos);

    CHECK(count_files(ds / "train" / "images", ".pgm") == 8);
    CHECK(count_files(ds / "train" / "labels", ".txt") == 8);
    CHECK(count_files(ds / "test" / "images", ".pgm") == 2);
    CHECK(count_files(ds / "test" / "labels", ".txt") == 2);
    CHECK(fs::exists(ds / "run_config.ini"));

    // manifests pair up and labels parse
    const auto train_items = load_manifest(ds / "train", nullptr);
    REQUIRE(train_items.size() == 8);
    CHECK(train_items[0].image_id == "scene_000");
    CHECK(train_items[0].records.size() == 1);

    // truths.csv carries one row per scene
    const auto truth_rows = read_csv(ds / "test" / "truths.csv");
    REQUIRE(truth_rows.size() == 3);  // header + 2
    CHECK(truth_rows[0][0] == "image_id");
    CHECK(truth_rows[1][0] == "scene_008");

    // a second run with the same seed reproduces the bytes
    const fs::path ds2 = tmp.path / "ds2";
    REQUIRE(cli(synth_args(ds2, 10, 3)).status == 0);
    CHECK(slurp(ds / "train" / "images" / "scene_000.pgm") ==
          slurp(ds2 / "train" / "images" / "scene_000.pgm"));
    CHECK(slurp(ds / "test" / "truths.csv") == slurp(ds2 / "test" / "truths.csv"));

    // a different seed moves the needles
    const fs::path ds3 = tmp.path / "ds3";
    REQUIRE(cli(synth_args(ds3, 10, 4)).status == 0);
    CHECK(slurp(ds / "train" / "images" / "scene_000.pgm") !=
          slurp(ds3 / "train" / "images" / "scene_000.pgm"));
}

TEST_CASE("the echoed config reproduces a synth run") {
    testutil::TempDir tmp("config");
    const fs::path ds = tmp.path / "ds";
    REQUIRE(cli(synth_args(ds, 6, 11)).status == 0);

    const fs::path ds2 = tmp.path / "ds2";
    const CliRun rerun = cli({"synth", "--config", (ds / "run_config.ini").string(),
                              "--out", ds2.string()});
    REQUIRE(rerun.status == 0);
    CHECK(slurp(ds / "train" / "images" / "scene_000.pgm") ==
          slurp(ds2 / "train" / "images" / "scene_000.pgm"));
    CHECK(slurp(ds / "test" / "truths.csv") == slurp(ds2 / "test" / "truths.csv"));
}

TEST_CASE("synth, detect and eval chain into a scored report") {
    testutil::TempDir tmp("chain");
    const fs::path ds = tmp.path / "ds";
    REQUIRE(cli(synth_args(ds, 10, 5)).status == 0);

    const fs::path det = tmp.path / "det";
    const CliRun drun = cli({"detect", "--in", (ds / "test").string(), "--out",
                             det.string(), "--threshold", "120"});
    REQUIRE(drun.status == 0);
    CHECK(count_files(det / "detections", ".txt") == 2);
    CHECK(drun.out.find("wrote 2 pose(s), 0 miss(es)") != std::string::npos);

    const auto pose_rows = read_csv(det / "poses.csv");
    REQUIRE(pose_rows.size() == 3);  // header + 2
    CHECK(pose_rows[0].size() == 8);  // includes confidence
    CHECK(pose_rows[0][7] == "confidence");

    const fs::path rep = tmp.path / "rep";
    const CliRun erun = cli({"eval", "--truths", (ds / "test" / "truths.csv").string(),
                             "--poses", (det / "poses.csv").string(), "--out",
                             rep.string()});
    REQUIRE(erun.status == 0);
    CHECK(erun.out.find("mean_tip_dist=") != std::string::npos);
    CHECK(erun.out.find("class_acc=1.00") != std::string::npos);
    CHECK(erun.out.find("misses=") == std::string::npos);

    const auto report = read_csv(rep / "report.csv");
    REQUIRE(report.size() == 4);  // header + 2 scenes + average
    CHECK(report[0][0] == "Image");
    CHECK(report[3][0] == "average");
    CHECK(fs::exists(rep / "report.md"));
}

TEST_CASE("augment fans a dataset out through the requested ops") {
    testutil::TempDir tmp("augcli");
    const fs::path ds = tmp.path / "ds";
    REQUIRE(cli(synth_args(ds, 4, 21)).status == 0);  // 3 train + 1 test

    const fs::path aug = tmp.path / "aug";
    const CliRun run = cli({"augment", "--in", (ds / "train").string(), "--out",
                            aug.string(), "--ops", "id,fh,r90x2,n5", "--seed", "9"});
    REQUIRE(run.status == 0);
    CHECK(run.out.find("augmented 3 items into 12 outputs") != std::string::npos);
    CHECK(count_files(aug / "images", ".pgm") == 12);
    CHECK(count_files(aug / "labels", ".txt") == 12);
    CHECK(fs::exists(aug / "images" / "scene_000.pgm"));
    CHECK(fs::exists(aug / "images" / "scene_000_fh.pgm"));
    CHECK(fs::exists(aug / "images" / "scene_000_r90x2.pgm"));
    CHECK(fs::exists(aug / "images" / "scene_000_n5.pgm"));
    CHECK(load_manifest(aug, nullptr).size() == 12);

    // identity op copies the pixels; noise is reproducible run to run
    CHECK(slurp(aug / "images" / "scene_000.pgm") ==
          slurp(ds / "train" / "images" / "scene_000.pgm"));
    const fs::path aug2 = tmp.path / "aug2";
    REQUIRE(cli({"augment", "--in", (ds / "train").string(), "--out", aug2.string(),
                 "--ops", "id,fh,r90x2,n5", "--seed", "9"})
                .status == 0);
    CHECK(slurp(aug / "images" / "scene_000_n5.pgm") ==
          slurp(aug2 / "images" / "scene_000_n5.pgm"));

    CHECK(cli({"augment", "--in", (ds / "train").string(), "--out", aug.string(),
               "--ops", "warp"})
              .status == 2);
}

TEST_CASE("detect ingests exchange files for a single image") {
    testutil::TempDir tmp("ingest");
    const ImageGray img(32, 32, 128);
    const fs::path img_path = tmp.path / "probe.pgm";
    write_pgm(img, img_path);

    const fs::path dets_path = tmp.path / "dets.txt";
    {
        std::ofstream f(dets_path);
        f << "0 0.900000 10 10 30 30\n";
        f << "1 0.800000 12 12 32 32\n";  // IoU 0.68 with the first: suppressed
        f << "3 0.200000 5 5 9 9\n";      // survives NMS, below --conf
    }
    const fs::path out = tmp.path / "out";
    const CliRun run = cli({"detect", "--image", img_path.string(), "--from-file",
                            dets_path.string(), "--out", out.string()});
    REQUIRE(run.status == 0);
    CHECK(run.out.find("probe: 2 detection(s)") != std::string::npos);

    const auto kept = read_detection_file(out / "detections" / "probe.txt");
    REQUIRE(kept.size() == 2);
    CHECK(kept[0].confidence == 0.9);
    CHECK(kept[1].confidence == 0.2);

    const auto rows = read_csv(out / "poses.csv");
    REQUIRE(rows.size() == 2);  // header + the one above --conf
    CHECK(rows[1][1] == "LT");

    // --from-file without --image is refused
    CHECK(cli({"detect", "--from-file", dets_path.string(), "--out", out.string()})
              .status == 2);
}

TEST_CASE("eval with the embedded fixture reports the reference averages") {
    const CliRun run = cli({"eval", "--pairs", "fixture"});
    CHECK(run.status == 0);
    CHECK(run.out.find("mean_tip_dist=4.80px") != std::string::npos);
    CHECK(run.out.find("mean_ang_err=0.85deg") != std::string::npos);
    CHECK(run.out.find("class_acc=n/a") != std::string::npos);
    CHECK(run.out.find("misses=") == std::string::npos);
}

TEST_CASE("eval refuses unjoinable pose tables") {
    testutil::TempDir tmp("joinless");
    const auto header = "image_id,tip_class,tip_x,tip_y,mid_x,mid_y,angle_deg\n";
    {
        std::ofstream t(tmp.path / "truths.csv");
        t << header << "a,LT,1,2,11,12,45\n";
        std::ofstream p(tmp.path / "poses.csv");
        p << header << "zzz,LT,1,2,11,12,45\n";
    }
    const CliRun run = cli({"eval", "--truths", (tmp.path / "truths.csv").string(),
                            "--poses", (tmp.path / "poses.csv").string()});
    CHECK(run.status == 2);
    CHECK(run.err.find("error:") != std::string::npos);
}

TEST_CASE("overlay renders detection markers or a miss banner") {
    testutil::TempDir tmp("overlaycli");
    const ImageGray img(64, 48, 128);
    const fs::path img_path = tmp.path / "view.pgm";
    write_pgm(img, img_path);

    const fs::path dets_path = tmp.path / "dets.txt";
    {
        std::ofstream f(dets_path);
        f << "2 0.750000 10 8 40 30\n";
    }
    const fs::path marked = tmp.path / "marked.ppm";
    const CliRun run = cli({"overlay", "--image", img_path.string(), "--dets",
                            dets_path.string(), "--out", marked.string()});
    REQUIRE(run.status == 0);
    ImageRgb rgb = read_ppm(marked);
    REQUIRE(rgb.width == 64);
    REQUIRE(rgb.height == 48);
    const auto count_color = [](ImageRgb& img, std::uint8_t r, std::uint8_t g,
                                std::uint8_t b) {
        int n = 0;
        for (int y = 0; y < img.height; ++y)
            for (int x = 0; x < img.width; ++x) {
                const std::uint8_t* px = img.px(x, y);
                n += px[0] == r && px[1] == g && px[2] == b;
            }
        return n;
    };
    CHECK(count_color(rgb, 0, 220, 0) > 0);      // box outline
    CHECK(count_color(rgb, 235, 40, 40) > 0);    // tip cross
    CHECK(count_color(rgb, 60, 100, 255) > 0);   // midpoint disc
    CHECK(count_color(rgb, 255, 230, 40) > 0);   // class/angle tag

    const fs::path banner = tmp.path / "banner.ppm";
    REQUIRE(cli({"overlay", "--image", img_path.string(), "--out", banner.string()})
                .status == 0);
    ImageRgb plain = read_ppm(banner);
    CHECK(count_color(plain, 255, 230, 40) > 0);  // "NO DETECTION" banner
    CHECK(count_color(plain, 0, 220, 0) == 0);    // and no box drawn
}

}  // TEST_SUITE
