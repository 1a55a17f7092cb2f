#include <doctest.h>

#include <cstdlib>
#include <map>

#include "colorenh/image_io.hpp"
#include "colorenh/pipeline.hpp"
#include "colorenh/synthetic.hpp"
#include "support.hpp"

using namespace colorenh;
namespace fs = std::filesystem;

namespace {

std::vector<Technique> all_techniques() {
    EnhanceSettings s;
    return {make_technique("he", s), make_technique("hist-spec", s), make_technique("ahe", s),
            make_technique("bsb-clahe", s)};
}

std::size_t count_files(const fs::path& dir, const std::string& suffix) {
    std::size_t n = 0;
    for (const auto& e : fs::directory_iterator(dir)) {
        n += e.path().string().ends_with(suffix);
    }
    return n;
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

}  // namespace

TEST_CASE("technique names and aliases") {
    EnhanceSettings s;
    CHECK(technique_name(make_technique("histeq", s)) == "he");
    CHECK(technique_name(make_technique("hist-match", s)) == "hist-spec");
    CHECK(technique_name(make_technique("clahe", s)) == "bsb-clahe");
    CHECK(technique_name(make_technique("ahe", s)) == "ahe");
    CHECK_THROWS_AS(make_technique("sharpen", s), InvalidInput);
}

TEST_CASE("equalizing a luma-uniform image changes little") {
    const auto img = synthetic::uniform_gray_levels();
    const auto out = enhance_image(img, ColorSpace::Hsv, HistEq{});
    for (std::size_t i = 0; i < img.data().size(); ++i) {
        REQUIRE(std::abs(int(out.data()[i]) - int(img.data()[i])) <= 2);
    }
}

TEST_CASE("constant color stays constant under every technique") {
    const RgbImage img(24, 24, [] {
        std::vector<std::uint8_t> d;
        for (int i = 0; i < 24 * 24; ++i) d.insert(d.end(), {180, 90, 30});
        return d;
    }());
    for (auto space : {ColorSpace::Hsv, ColorSpace::Lab}) {
        for (const auto& t : all_techniques()) {
            const auto out = enhance_image(img, space, t);
            const auto first = out.pixel(0, 0);
            for (int y = 0; y < 24; ++y)
                for (int x = 0; x < 24; ++x) REQUIRE(out.pixel(x, y) == first);
        }
    }
}

TEST_CASE("equalizing a compressed ramp uses the full value range") {
    const auto img = synthetic::low_contrast_ramp(256, 32, 0.4, 0.6);
    const auto out = enhance_image(img, ColorSpace::Hsv, HistEq{});
    const auto v = build_histogram(luma_plane(rgb_to_hsv(out)), 256);
    int top = 255;
    while (v.counts[top] == 0) --top;
    CHECK(top == 255);
}

TEST_CASE("enhance_image only touches luma") {
    const auto img = synthetic::peppers_like(64, 48);
    for (const auto& t : all_techniques()) {
        const auto hsv = rgb_to_hsv(img);
        const auto edited = replace_luma(hsv, enhance_luma(luma_plane(hsv), t));
        CHECK(edited.h == hsv.h);
        CHECK(edited.s == hsv.s);
        CHECK(hsv_to_rgb(edited) == enhance_image(img, ColorSpace::Hsv, t));

        const auto lab = rgb_to_lab(img);
        const auto edited_lab = replace_luma(lab, enhance_luma(luma_plane(lab), t));
        CHECK(edited_lab.a == lab.a);
        CHECK(edited_lab.b == lab.b);
        CHECK(lab_to_rgb(edited_lab) == enhance_image(img, ColorSpace::Lab, t));
    }
}

TEST_CASE("enhancement suite counting and determinism") {
    testing::TempDir dir("suite");
    ExperimentConfig cfg;
    cfg.images = {{"peppers", "synthetic:peppers"}};
    cfg.techniques = all_techniques();
    cfg.output_dir = dir.path() / "a";

    const auto report = run_enhancement_suite(cfg);
    REQUIRE(report.rows.size() == 8);
    CHECK(count_files(cfg.output_dir / "enhance", ".png") == 8);
    CHECK(count_files(cfg.output_dir / "enhance", "_hist.csv") == 16);
    for (const auto& r : report.rows) {
        CHECK(r.error.empty());
        CHECK(r.noise == "clean");
        CHECK(r.entropy_bits > 0.0);
    }

    const auto hist = lines(testing::slurp(cfg.output_dir / "enhance" / "peppers_hsv_he_clean_luma_hist.csv"));
    CHECK(hist.front() == "bin_index,count_before,count_after");
    CHECK(hist.size() == 257);

    write_report(report, cfg.output_dir / "report.csv", false);
    cfg.output_dir = dir.path() / "b";
    write_report(run_enhancement_suite(cfg), cfg.output_dir / "report.csv", false);
    CHECK(testing::slurp(dir.path() / "a" / "report.csv") == testing::slurp(dir.path() / "b" / "report.csv"));
    CHECK(testing::slurp(dir.path() / "a" / "report.json") == testing::slurp(dir.path() / "b" / "report.json"));

    const auto csv = lines(testing::slurp(dir.path() / "a" / "report.csv"));
    CHECK(csv.front() == kReportHeader);
    CHECK(csv.size() == 9);
    CHECK(csv[1].starts_with("peppers,hsv,he,clean,"));
    CHECK(csv[1].ends_with(","));
}

TEST_CASE("suite validation and per-image errors") {
    testing::TempDir dir("errors");
    ExperimentConfig cfg;
    cfg.output_dir = dir.path();
    cfg.images = {{"peppers", "synthetic:peppers"}};
    CHECK_THROWS_AS(run_enhancement_suite(cfg), InvalidInput);

    cfg.techniques = {HistEq{}};
    cfg.color_spaces.clear();
    CHECK_THROWS_AS(run_enhancement_suite(cfg), InvalidInput);

    cfg.color_spaces = {ColorSpace::Hsv};
    cfg.images.clear();
    CHECK_THROWS_AS(run_enhancement_suite(cfg), InvalidInput);

    cfg.images = {{"missing", (dir.path() / "missing.png").string()}, {"ramp", "synthetic:ramp"}};
    const auto report = run_enhancement_suite(cfg);
    REQUIRE(report.rows.size() == 2);
    CHECK(!report.rows[0].error.empty());
    CHECK(report.rows[1].error.empty());
    CHECK(report.metadata["errors"].size() == 1);
    CHECK(lines(report_csv(report, false))[1] == "missing,hsv,he,clean,error,error,");

    CHECK_THROWS_AS(run_segmentation_suite(cfg), InvalidInput);
}

TEST_CASE("segmentation suite rows") {
    testing::TempDir dir("seg");
    ExperimentConfig cfg;
    cfg.images = {{"peppers", "synthetic:peppers"}};
    cfg.techniques = all_techniques();
    cfg.output_dir = dir.path();
    cfg.segmentation = KMeansParams{4, 50, 1e-6, 0, 2};

    const auto clean = run_segmentation_suite(cfg);
    REQUIRE(clean.rows.size() == 8);
    CHECK(count_files(dir.path() / "segment", "_labels.pgm") == 8);
    CHECK(count_files(dir.path() / "segment", "_render.png") == 8);

    cfg.noise = parse_noise("gaussian:0:0.01", 0);
    const auto both = run_segmentation_suite(cfg);
    REQUIRE(both.rows.size() == 16);
    std::map<std::string, double> clean_mssim;
    for (const auto& r : both.rows) {
        REQUIRE(r.error.empty());
        REQUIRE(r.mssim >= -1.0);
        REQUIRE(r.mssim <= 1.0);
        if (r.noise == "clean") {
            clean_mssim[r.color_space + r.technique] = r.mssim;
        }
    }
    CHECK(clean_mssim.size() == 8);
    for (const auto& r : both.rows) {
        if (r.noise != "clean") {
            CHECK(r.noise == "gaussian:0:0.01");
            CHECK(clean_mssim.at(r.color_space + r.technique) >= r.mssim);
        }
    }
}

TEST_CASE("timing column") {
    ExperimentReport report;
    report.rows.push_back({"x", "hsv", "he", "clean", 1.5, 0.25, 12.3456, ""});
    CHECK(lines(report_csv(report, false))[1] == "x,hsv,he,clean,1.500000,0.250000,");
    CHECK(lines(report_csv(report, true))[1] == "x,hsv,he,clean,1.500000,0.250000,12.346");
}

TEST_CASE("config files") {
    testing::TempDir dir("config");
    fs::create_directories(dir.path() / "imgs");
    write_png(synthetic::two_tone_blobs(32, 32), dir.path() / "imgs" / "blobs.png");
    {
        std::ofstream f(dir / "exp.toml");
        f << R"(seed = 5
output_dir = "out"
color_spaces = ["lab"]
techniques = ["he", "clahe"]
noise = "salt-pepper:0.1"

[enhance]
tiles_x = 2
tiles_y = 3
clip_limit = 3.5

[segmentation]
k = 3

[[images]]
id = "blobs"
path = "imgs/blobs.png"

[[images]]
path = "synthetic:ramp"
)";
    }
    const auto cfg = load_config(dir / "exp.toml");
    CHECK(cfg.seed == 5);
    CHECK(cfg.color_spaces == std::vector<ColorSpace>{ColorSpace::Lab});
    REQUIRE(cfg.techniques.size() == 2);
    const auto& clahe = std::get<ClaheParams>(cfg.techniques[1]);
    CHECK(clahe.tiles_x == 2);
    CHECK(clahe.tiles_y == 3);
    CHECK(clahe.clip_limit == 3.5);
    REQUIRE(cfg.noise.has_value());
    CHECK(noise_label(*cfg.noise) == "salt-pepper:0.1");
    CHECK(cfg.segmentation->k == 3);
    CHECK(cfg.segmentation->seed == 5);
    REQUIRE(cfg.images.size() == 2);
    CHECK(cfg.images[0].path == (dir.path() / "imgs" / "blobs.png").string());
    CHECK(cfg.images[1].path == "synthetic:ramp");
    CHECK(load_source(cfg.images[0]) == synthetic::two_tone_blobs(32, 32));

    {
        std::ofstream f(dir / "exp.json");
        f << R"({"techniques": ["ahe"], "images": [{"path": "synthetic:peppers"}], "enhance": {"window_radius": 3}})";
    }
    const auto from_json = load_config(dir / "exp.json");
    CHECK(std::get<AheParams>(from_json.techniques[0]).window_radius == 3);
    CHECK(from_json.images[0].id == "peppers");

    for (const char* bad : {"unknown_key = 1\n", "[enhance]\nbogus = 2\n", "seed = \"five\"\n", "this is not toml"}) {
        std::ofstream(dir / "bad.toml") << bad;
        CHECK_THROWS_AS(load_config(dir / "bad.toml"), InvalidInput);
    }
    CHECK_THROWS_AS(load_config(dir / "nope.toml"), InvalidInput);
}

TEST_CASE("default output directory") {
    unsetenv("COLORENH_OUTPUT_DIR");
    CHECK(default_output_dir() == "colorenh_out");
    setenv("COLORENH_OUTPUT_DIR", "/tmp/elsewhere", 1);
    CHECK(default_output_dir() == "/tmp/elsewhere");
    unsetenv("COLORENH_OUTPUT_DIR");
}
