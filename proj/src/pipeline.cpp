#include "colorenh/pipeline.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

#include "colorenh/image_io.hpp"
#include "colorenh/synthetic.hpp"

namespace colorenh {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::string_view kSyntheticPrefix = "synthetic:";

struct LumaResult {
    RgbImage image;
    ChannelPlane before;
    ChannelPlane after;
};

LumaResult enhance_with_planes(const RgbImage& img, ColorSpace space, const Technique& t) {
    if (space == ColorSpace::Hsv) {
        const HsvImage hsv = rgb_to_hsv(img);
        ChannelPlane before = luma_plane(hsv);
        ChannelPlane after = enhance_luma(before, t);
        RgbImage out = hsv_to_rgb(replace_luma(hsv, after));
        return {std::move(out), std::move(before), std::move(after)};
    }
    const LabImage lab = rgb_to_lab(img);
    ChannelPlane before = luma_plane(lab);
    ChannelPlane after = enhance_luma(before, t);
    RgbImage out = lab_to_rgb(replace_luma(lab, after));
    return {std::move(out), std::move(before), std::move(after)};
}

std::string sanitize(std::string s) {
    for (char& c : s) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                        c == '-' || c == '_' || c == '.';
        if (!ok) {
            c = '_';
        }
    }
    return s;
}

std::string fmt(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

void write_hist_csv(const std::vector<double>& before, const std::vector<double>& after,
                    const fs::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write '" + path.string() + "'");
    }
    out << "bin_index,count_before,count_after\n";
    for (std::size_t k = 0; k < before.size(); ++k) {
        out << k << ',' << fmt(before[k], 0) << ',' << fmt(after[k], 0) << '\n';
    }
}

std::vector<double> pooled_rgb_counts(const RgbImage& img) {
    std::vector<double> counts(256, 0.0);
    for (std::uint8_t s : img.data()) {
        counts[s] += 1.0;
    }
    return counts;
}

struct Cell {
    std::size_t image;
    int noise;  // -1 clean, 0 configured noise
    ColorSpace space;
    std::size_t technique;
};

std::vector<Cell> matrix_cells(const ExperimentConfig& cfg) {
    std::vector<Cell> cells;
    const int conditions = cfg.noise ? 2 : 1;
    for (std::size_t i = 0; i < cfg.images.size(); ++i) {
        for (int n = 0; n < conditions; ++n) {
            for (ColorSpace cs : cfg.color_spaces) {
                for (std::size_t t = 0; t < cfg.techniques.size(); ++t) {
                    cells.push_back({i, n == 0 ? -1 : 0, cs, t});
                }
            }
        }
    }
    return cells;
}

std::string noise_tag(const ExperimentConfig& cfg, int noise) {
    return noise < 0 ? "clean" : noise_label(*cfg.noise);
}

json technique_json(const Technique& t) {
    return std::visit(
        [](const auto& v) -> json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, HistEq>) {
                return {{"name", "he"}, {"bins", v.bin_count}};
            } else if constexpr (std::is_same_v<T, HistSpec>) {
                return {{"name", "hist-spec"}, {"bins", v.target.bin_count()}, {"target", v.target_name}};
            } else if constexpr (std::is_same_v<T, AheParams>) {
                return {{"name", "ahe"}, {"bins", v.bin_count}, {"window_radius", v.window_radius}};
            } else {
                return {{"name", "bsb-clahe"},
                        {"bins", v.bin_count},
                        {"tiles_x", v.tiles_x},
                        {"tiles_y", v.tiles_y},
                        {"clip_limit", v.clip_limit},
                        {"epsilon_mean_count_units", v.epsilon}};
            }
        },
        t);
}

json base_metadata(const ExperimentConfig& cfg, std::string_view suite) {
    json techniques = json::array();
    for (const auto& t : cfg.techniques) {
        techniques.push_back(technique_json(t));
    }
    json spaces = json::array();
    for (ColorSpace cs : cfg.color_spaces) {
        spaces.push_back(std::string(to_string(cs)));
    }
    json images = json::array();
    for (const auto& img : cfg.images) {
        images.push_back({{"id", img.id}, {"path", img.path}});
    }
    json meta = {
        {"tool", "colorenh"},
        {"version", std::string(kToolVersion)},
        {"suite", std::string(suite)},
        {"seed", cfg.seed},
        {"noise_rng", std::string(kNoiseRngName)},
        {"kmeans_rng", "std::mt19937_64, D^2-weighted seeding"},
        {"noise", cfg.noise ? json(noise_label(*cfg.noise)) : json(nullptr)},
        {"color_spaces", spaces},
        {"techniques", techniques},
        {"images", images},
        {"entropy", "pooled RGB samples, 256 bins, log2"},
        {"ssim",
         {{"window", cfg.ssim.window},
          {"k1", cfg.ssim.k1},
          {"k2", cfg.ssim.k2},
          {"dynamic_range", cfg.ssim.dynamic_range},
          {"windowing", "non-overlapping uniform, partial edge windows dropped"},
          {"gray", "0.299R+0.587G+0.114B"}}},
        {"colorspace", "sRGB D65; hue in radians; LAB gamut clamp in linear RGB"},
        {"timing", cfg.timing},
    };
    if (cfg.segmentation) {
        meta["kmeans"] = {{"k", cfg.segmentation->k},
                          {"max_iters", cfg.segmentation->max_iters},
                          {"tol", cfg.segmentation->tol},
                          {"restarts", cfg.segmentation->restarts},
                          {"feature_mode", std::string(to_string(cfg.feature_mode))}};
    }
    return meta;
}

// Loads every image once; failures become per-image error strings.
std::vector<std::optional<RgbImage>> load_all(const ExperimentConfig& cfg,
                                              std::vector<std::string>& errors) {
    std::vector<std::optional<RgbImage>> out(cfg.images.size());
    errors.assign(cfg.images.size(), "");
    for (std::size_t i = 0; i < cfg.images.size(); ++i) {
        try {
            out[i] = load_source(cfg.images[i]);
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    }
    return out;
}

template <typename CellFn>
ExperimentReport run_matrix(const ExperimentConfig& cfg, std::string_view suite, CellFn&& fn) {
    validate(cfg);
    std::vector<std::string> load_errors;
    const auto images = load_all(cfg, load_errors);
    const auto cells = matrix_cells(cfg);

    // Noisy inputs are generated once per image so every cell sees the same pixels.
    std::vector<std::optional<RgbImage>> noisy(cfg.images.size());
    if (cfg.noise) {
        for (std::size_t i = 0; i < images.size(); ++i) {
            if (images[i]) {
                NoiseSpec spec = *cfg.noise;
                spec.seed = cfg.seed + i;
                noisy[i] = apply_noise(*images[i], spec);
            }
        }
    }

    ExperimentReport report;
    report.rows.resize(cells.size());
    const auto n = static_cast<std::ptrdiff_t>(cells.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t c = 0; c < n; ++c) {
        const Cell& cell = cells[c];
        QualityRow& row = report.rows[c];
        row.image_id = cfg.images[cell.image].id;
        row.color_space = std::string(to_string(cell.space));
        row.technique = technique_name(cfg.techniques[cell.technique]);
        row.noise = noise_tag(cfg, cell.noise);
        if (!images[cell.image]) {
            row.error = load_errors[cell.image];
            continue;
        }
        const RgbImage& clean = *images[cell.image];
        const RgbImage& input = cell.noise < 0 ? clean : *noisy[cell.image];
        const std::string stem = sanitize(row.image_id + "_" + row.color_space + "_" +
                                          row.technique + "_" + row.noise);
        try {
            const auto t0 = std::chrono::steady_clock::now();
            fn(cell, clean, input, stem, row);
            const auto t1 = std::chrono::steady_clock::now();
            row.runtime_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
        } catch (const std::exception& e) {
            row.error = e.what();
        }
    }

    report.metadata = base_metadata(cfg, suite);
    json errors = json::array();
    for (const auto& row : report.rows) {
        if (!row.error.empty()) {
            errors.push_back({{"image_id", row.image_id},
                              {"color_space", row.color_space},
                              {"technique", row.technique},
                              {"noise", row.noise},
                              {"error", row.error}});
        }
    }
    report.metadata["errors"] = errors;
    report.metadata["rows"] = report.rows.size();
    return report;
}

void check_keys(const json& j, std::initializer_list<std::string_view> allowed, std::string_view where) {
    for (const auto& [key, _] : j.items()) {
        bool known = false;
        for (auto a : allowed) {
            known = known || key == a;
        }
        if (!known) {
            throw InvalidInput("unknown config key '" + key + "' in " + std::string(where));
        }
    }
}

}  // namespace

std::string technique_name(const Technique& t) {
    switch (t.index()) {
        case 0: return "he";
        case 1: return "hist-spec";
        case 2: return "ahe";
        default: return "bsb-clahe";
    }
}

Technique make_technique(std::string_view name, const EnhanceSettings& s) {
    if (name == "he" || name == "histeq") {
        return HistEq{s.bin_count};
    }
    if (name == "hist-spec" || name == "hist-match") {
        HistSpec spec;
        if (s.target_path) {
            spec.target = load_target_histogram(*s.target_path);
            spec.target_name = s.target_path->filename().string();
            if (spec.target.bin_count() != s.bin_count) {
                throw InvalidInput("target histogram has " + std::to_string(spec.target.bin_count()) +
                                   " bins, expected " + std::to_string(s.bin_count));
            }
        } else if (s.bin_count != kDefaultBins) {
            spec.target = gaussian_target(s.bin_count, (s.bin_count - 1) / 2.0,
                                          48.0 * s.bin_count / kDefaultBins);
        }
        return spec;
    }
    if (name == "ahe") {
        return AheParams{s.window_radius, s.bin_count};
    }
    if (name == "bsb-clahe" || name == "clahe") {
        return ClaheParams{s.tiles_x, s.tiles_y, s.clip_limit, s.bin_count, s.epsilon};
    }
    throw InvalidInput("unknown technique '" + std::string(name) +
                       "' (expected he, hist-spec, ahe or bsb-clahe)");
}

ChannelPlane enhance_luma(const ChannelPlane& luma, const Technique& t) {
    return std::visit(
        [&luma](const auto& v) -> ChannelPlane {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, HistEq>) {
                return equalize(luma, v.bin_count);
            } else if constexpr (std::is_same_v<T, HistSpec>) {
                return specify(luma, v.target, v.target.bin_count());
            } else if constexpr (std::is_same_v<T, AheParams>) {
                return ahe(luma, v);
            } else {
                return clahe(luma, v);
            }
        },
        t);
}

RgbImage enhance_image(const RgbImage& img, ColorSpace space, const Technique& t) {
    return enhance_with_planes(img, space, t).image;
}

RgbImage load_source(const ImageSource& src) {
    if (src.path.starts_with(kSyntheticPrefix)) {
        return synthetic::generate(std::string_view(src.path).substr(kSyntheticPrefix.size()));
    }
    return read_image(src.path);
}

void validate(const ExperimentConfig& cfg) {
    if (cfg.images.empty()) {
        throw InvalidInput("experiment needs at least one image");
    }
    if (cfg.color_spaces.empty()) {
        throw InvalidInput("experiment needs at least one color space");
    }
    if (cfg.techniques.empty()) {
        throw InvalidInput("experiment needs at least one technique");
    }
    for (const auto& t : cfg.techniques) {
        if (const auto* c = std::get_if<ClaheParams>(&t)) {
            if (c->tiles_x < 1 || c->tiles_y < 1 || !(c->clip_limit >= 1.0) || !(c->epsilon > 0.0)) {
                throw InvalidInput("bsb-clahe needs tiles >= 1, clip_limit >= 1, epsilon > 0");
            }
        } else if (const auto* a = std::get_if<AheParams>(&t)) {
            if (a->window_radius < 1 || a->bin_count < 2) {
                throw InvalidInput("ahe needs window_radius >= 1 and bins >= 2");
            }
        }
    }
    if (cfg.segmentation) {
        const auto& k = *cfg.segmentation;
        if (k.k < 1 || k.max_iters < 1 || k.restarts < 1 || !(k.tol >= 0.0)) {
            throw InvalidInput("segmentation needs k, max_iters, restarts >= 1 and tol >= 0");
        }
    }
    if (cfg.ssim.window < 2) {
        throw InvalidInput("ssim window must be >= 2");
    }
}

ExperimentConfig config_from_json(const json& j) {
    check_keys(j,
               {"seed", "output_dir", "timing", "artifacts", "color_spaces", "techniques", "noise",
                "feature_mode", "images", "enhance", "segmentation", "ssim", "base_dir"},
               "config");
    ExperimentConfig cfg;
    const fs::path base = j.value("base_dir", std::string{});
    auto resolve = [&base](const std::string& p) {
        if (p.starts_with(kSyntheticPrefix) || base.empty() || fs::path(p).is_absolute()) {
            return p;
        }
        return (base / p).string();
    };

    cfg.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("output_dir")) {
        cfg.output_dir = j.at("output_dir").get<std::string>();
    } else {
        cfg.output_dir = default_output_dir();
    }
    cfg.timing = j.value("timing", false);
    cfg.write_artifacts = j.value("artifacts", true);

    if (j.contains("color_spaces")) {
        cfg.color_spaces.clear();
        for (const auto& s : j.at("color_spaces")) {
            cfg.color_spaces.push_back(parse_color_space(s.get<std::string>()));
        }
    }
    if (j.contains("enhance")) {
        const json& e = j.at("enhance");
        check_keys(e, {"bins", "window_radius", "tiles_x", "tiles_y", "clip_limit", "epsilon", "target"},
                   "[enhance]");
        cfg.enhance.bin_count = e.value("bins", cfg.enhance.bin_count);
        cfg.enhance.window_radius = e.value("window_radius", cfg.enhance.window_radius);
        cfg.enhance.tiles_x = e.value("tiles_x", cfg.enhance.tiles_x);
        cfg.enhance.tiles_y = e.value("tiles_y", cfg.enhance.tiles_y);
        cfg.enhance.clip_limit = e.value("clip_limit", cfg.enhance.clip_limit);
        cfg.enhance.epsilon = e.value("epsilon", cfg.enhance.epsilon);
        if (e.contains("target")) {
            cfg.enhance.target_path = resolve(e.at("target").get<std::string>());
        }
    }
    std::vector<std::string> names{"he", "hist-spec", "ahe", "bsb-clahe"};
    if (j.contains("techniques")) {
        names = j.at("techniques").get<std::vector<std::string>>();
    }
    for (const auto& name : names) {
        cfg.techniques.push_back(make_technique(name, cfg.enhance));
    }
    if (j.contains("noise") && !j.at("noise").is_null()) {
        const auto text = j.at("noise").get<std::string>();
        if (!text.empty() && text != "none") {
            cfg.noise = parse_noise(text, cfg.seed);
        }
    }
    if (j.contains("feature_mode")) {
        cfg.feature_mode = parse_feature_mode(j.at("feature_mode").get<std::string>());
    }
    if (j.contains("segmentation") && !j.at("segmentation").is_null()) {
        const json& s = j.at("segmentation");
        check_keys(s, {"k", "max_iters", "tol", "restarts"}, "[segmentation]");
        KMeansParams k;
        k.k = s.value("k", k.k);
        k.max_iters = s.value("max_iters", k.max_iters);
        k.tol = s.value("tol", k.tol);
        k.restarts = s.value("restarts", k.restarts);
        k.seed = cfg.seed;
        cfg.segmentation = k;
    }
    if (j.contains("ssim")) {
        const json& s = j.at("ssim");
        check_keys(s, {"window", "k1", "k2", "dynamic_range"}, "[ssim]");
        cfg.ssim.window = s.value("window", cfg.ssim.window);
        cfg.ssim.k1 = s.value("k1", cfg.ssim.k1);
        cfg.ssim.k2 = s.value("k2", cfg.ssim.k2);
        cfg.ssim.dynamic_range = s.value("dynamic_range", cfg.ssim.dynamic_range);
    }
    if (j.contains("images")) {
        for (const auto& img : j.at("images")) {
            check_keys(img, {"id", "path"}, "[[images]]");
            ImageSource src;
            src.path = resolve(img.at("path").get<std::string>());
            if (img.contains("id")) {
                src.id = img.at("id").get<std::string>();
            } else if (src.path.starts_with(kSyntheticPrefix)) {
                src.id = src.path.substr(kSyntheticPrefix.size());
            } else {
                src.id = fs::path(src.path).stem().string();
            }
            cfg.images.push_back(std::move(src));
        }
    }
    return cfg;
}

json read_config_json(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidInput("cannot open config '" + path.string() + "'");
    }
    json j;
    try {
        if (path.extension() == ".json") {
            j = json::parse(in);
        } else {
            const toml::table tbl = toml::parse(in, path.string());
            std::ostringstream os;
            os << toml::json_formatter{tbl};
            j = json::parse(os.str());
        }
    } catch (const toml::parse_error& e) {
        throw InvalidInput("config parse error: " + std::string(e.description()));
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("config parse error: ") + e.what());
    }
    if (!j.is_object()) {
        throw InvalidInput("config root must be a table");
    }
    if (!j.contains("base_dir")) {
        j["base_dir"] = path.parent_path().string();
    }
    return j;
}

ExperimentConfig load_config(const fs::path& path) {
    const json j = read_config_json(path);
    try {
        return config_from_json(j);
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("config type error: ") + e.what());
    }
}

ExperimentReport run_enhancement_suite(const ExperimentConfig& cfg) {
    const fs::path dir = cfg.output_dir / "enhance";
    if (cfg.write_artifacts) {
        fs::create_directories(dir);
    }
    const int bins = cfg.enhance.bin_count;
    return run_matrix(cfg, "enhancement",
                      [&](const Cell& cell, const RgbImage& clean, const RgbImage& input,
                          const std::string& stem, QualityRow& row) {
                          const auto& tech = cfg.techniques[cell.technique];
                          const LumaResult res = enhance_with_planes(input, cell.space, tech);
                          row.entropy_bits = entropy(res.image);
                          row.mssim = mssim(clean, res.image, cfg.ssim);
                          if (!cfg.write_artifacts) {
                              return;
                          }
                          write_png(res.image, dir / (stem + ".png"));
                          write_hist_csv(build_histogram(res.before, bins).counts,
                                         build_histogram(res.after, bins).counts,
                                         dir / (stem + "_luma_hist.csv"));
                          write_hist_csv(pooled_rgb_counts(input), pooled_rgb_counts(res.image),
                                         dir / (stem + "_rgb_hist.csv"));
                      });
}

ExperimentReport run_segmentation_suite(const ExperimentConfig& cfg) {
    if (!cfg.segmentation) {
        throw InvalidInput("segmentation suite needs k-means parameters");
    }
    const fs::path dir = cfg.output_dir / "segment";
    if (cfg.write_artifacts) {
        fs::create_directories(dir);
    }
    KMeansParams kp = *cfg.segmentation;
    kp.seed = cfg.seed;
    return run_matrix(cfg, "segmentation",
                      [&](const Cell& cell, const RgbImage& clean, const RgbImage& input,
                          const std::string& stem, QualityRow& row) {
                          const auto& tech = cfg.techniques[cell.technique];
                          const RgbImage enhanced = enhance_image(input, cell.space, tech);
                          const LabelMap lm = segment_image(enhanced, cell.space, kp, cfg.feature_mode);
                          const RgbImage rendered = render_segmentation(enhanced, lm);
                          row.entropy_bits = entropy(enhanced);
                          row.mssim = mssim(clean, rendered, cfg.ssim);
                          if (!cfg.write_artifacts) {
                              return;
                          }
                          write_label_pgm(lm, dir / (stem + "_labels.pgm"));
                          write_png(rendered, dir / (stem + "_render.png"));
                      });
}

std::string report_csv(const ExperimentReport& report, bool timing) {
    std::ostringstream os;
    os << kReportHeader << '\n';
    for (const auto& r : report.rows) {
        os << r.image_id << ',' << r.color_space << ',' << r.technique << ',' << r.noise << ',';
        if (r.error.empty()) {
            os << fmt(r.entropy_bits, 6) << ',' << fmt(r.mssim, 6) << ',';
        } else {
            os << "error,error,";
        }
        if (timing) {
            os << fmt(r.runtime_ms, 3);
        }
        os << '\n';
    }
    return os.str();
}

void write_report(const ExperimentReport& report, const fs::path& csv_path, bool timing) {
    if (csv_path.has_parent_path()) {
        fs::create_directories(csv_path.parent_path());
    }
    std::ofstream csv(csv_path, std::ios::binary);
    if (!csv) {
        throw IoError("cannot write '" + csv_path.string() + "'");
    }
    csv << report_csv(report, timing);
    fs::path meta_path = csv_path;
    meta_path.replace_extension(".json");
    std::ofstream meta(meta_path, std::ios::binary);
    if (!meta) {
        throw IoError("cannot write '" + meta_path.string() + "'");
    }
    meta << report.metadata.dump(2) << '\n';
}

fs::path default_output_dir() {
    if (const char* env = std::getenv("COLORENH_OUTPUT_DIR"); env != nullptr && *env != '\0') {
        return env;
    }
    return "colorenh_out";
}

}  // namespace colorenh
