#include "colorenh/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "colorenh/image_io.hpp"
#include "colorenh/pipeline.hpp"
#include "colorenh/synthetic.hpp"

namespace colorenh {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct EnhanceFlags {
    int bins = kDefaultBins;
    int radius = 8;
    std::string tiles = "8x8";
    double clip = 2.0;
    double epsilon = 1e-3;
    std::string target;
};

void add_enhance_flags(CLI::App* cmd, EnhanceFlags& f) {
    cmd->add_option("--bins", f.bins, "Histogram bins")->check(CLI::Range(2, 65536));
    cmd->add_option("--radius", f.radius, "AHE window radius (window is 2r+1 square)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--tiles", f.tiles, "CLAHE tile grid, WxH");
    cmd->add_option("--clip", f.clip, "CLAHE clip limit in multiples of the mean bin count (>= 1)");
    cmd->add_option("--epsilon", f.epsilon, "Clip search tolerance in mean-bin-count units")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--target", f.target, "Target histogram CSV for hist-spec")
        ->check(CLI::ExistingFile);
}

std::pair<int, int> parse_tiles(const std::string& text) {
    int tx = 0;
    int ty = 0;
    char sep = 0;
    std::istringstream in(text);
    if (!(in >> tx >> sep >> ty) || (sep != 'x' && sep != 'X') || tx < 1 || ty < 1) {
        throw InvalidInput("--tiles expects WxH with positive integers, got '" + text + "'");
    }
    return {tx, ty};
}

EnhanceSettings settings_from(const EnhanceFlags& f) {
    EnhanceSettings s;
    s.bin_count = f.bins;
    s.window_radius = f.radius;
    std::tie(s.tiles_x, s.tiles_y) = parse_tiles(f.tiles);
    s.clip_limit = f.clip;
    if (!(f.clip >= 1.0)) {
        throw InvalidInput("--clip must be >= 1");
    }
    s.epsilon = f.epsilon;
    if (!f.target.empty()) {
        s.target_path = f.target;
    }
    return s;
}

void write_text(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw IoError("cannot write '" + path + "'");
    }
    f << text;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Luma-channel contrast enhancement, K-Means color segmentation and quality metrics"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolVersion));

    // enhance
    std::string enh_in, enh_out, enh_space = "hsv", enh_tech = "bsb-clahe";
    EnhanceFlags enh_flags;
    auto* enhance_cmd = app.add_subcommand("enhance", "Enhance the luma channel of one image");
    enhance_cmd->add_option("--in", enh_in, "Input PNG/PPM")->required()->check(CLI::ExistingFile);
    enhance_cmd->add_option("--out", enh_out, "Output image (.png or .ppm)")->required();
    enhance_cmd->add_option("--space", enh_space, "hsv | lab");
    enhance_cmd->add_option("--technique", enh_tech, "he | hist-spec | ahe | bsb-clahe");
    add_enhance_flags(enhance_cmd, enh_flags);

    // segment
    std::string seg_in, seg_out, seg_labels, seg_space = "hsv", seg_tech = "none",
                                               seg_mode = "chroma-luma";
    KMeansParams seg_params;
    EnhanceFlags seg_flags;
    auto* segment_cmd = app.add_subcommand("segment", "K-Means color segmentation of one image");
    segment_cmd->add_option("--in", seg_in, "Input PNG/PPM")->required()->check(CLI::ExistingFile);
    segment_cmd->add_option("--out", seg_out, "Rendered segmentation image")->required();
    segment_cmd->add_option("--labels", seg_labels, "Label map output (PGM)");
    segment_cmd->add_option("--space", seg_space, "hsv | lab");
    segment_cmd->add_option("--technique", seg_tech, "Preprocessing: none | he | hist-spec | ahe | bsb-clahe");
    segment_cmd->add_option("--mode", seg_mode, "chroma-luma | chroma | raw");
    segment_cmd->add_option("--k", seg_params.k, "Cluster count")->check(CLI::PositiveNumber);
    segment_cmd->add_option("--max-iters", seg_params.max_iters)->check(CLI::PositiveNumber);
    segment_cmd->add_option("--tol", seg_params.tol, "Relative objective improvement to stop")
        ->check(CLI::NonNegativeNumber);
    segment_cmd->add_option("--restarts", seg_params.restarts)->check(CLI::PositiveNumber);
    segment_cmd->add_option("--seed", seg_params.seed);
    add_enhance_flags(segment_cmd, seg_flags);

    // suite
    std::string suite_config, suite_out, suite_noise;
    std::optional<std::uint64_t> suite_seed;
    std::optional<int> suite_k;
    std::vector<std::string> suite_images, suite_spaces, suite_techs;
    bool suite_timing = false, suite_no_artifacts = false, suite_segment = false;
    auto* suite_cmd = app.add_subcommand("suite", "Run the enhancement (and segmentation) experiment matrix");
    suite_cmd->add_option("--config", suite_config, "TOML or JSON experiment config")
        ->check(CLI::ExistingFile);
    suite_cmd->add_option("--out", suite_out, "Output directory (default $COLORENH_OUTPUT_DIR or ./colorenh_out)");
    suite_cmd->add_option("--image", suite_images, "Image as path or id=path; synthetic:<scene> allowed");
    suite_cmd->add_option("--space", suite_spaces, "Color spaces (repeatable)");
    suite_cmd->add_option("--technique", suite_techs, "Techniques (repeatable)");
    suite_cmd->add_option("--noise", suite_noise, "salt-pepper:<density> | gaussian:<mean>:<variance> | none");
    suite_cmd->add_option("--seed", suite_seed);
    suite_cmd->add_option("--k", suite_k, "Enable segmentation with k clusters")->check(CLI::PositiveNumber);
    suite_cmd->add_flag("--segment", suite_segment, "Enable segmentation with default k-means parameters");
    suite_cmd->add_flag("--timing", suite_timing, "Fill runtime_ms (reports are then not byte-reproducible)");
    suite_cmd->add_flag("--no-artifacts", suite_no_artifacts, "Only write the reports");

    // histogram
    std::string hist_in, hist_out, hist_space = "hsv";
    int hist_bins = kDefaultBins;
    auto* hist_cmd = app.add_subcommand("histogram", "Dump a luma (hsv/lab) or per-channel (rgb) histogram as CSV");
    hist_cmd->add_option("--in", hist_in)->required()->check(CLI::ExistingFile);
    hist_cmd->add_option("--space", hist_space, "hsv | lab | rgb");
    hist_cmd->add_option("--bins", hist_bins)->check(CLI::Range(2, 65536));
    hist_cmd->add_option("--out", hist_out, "CSV path (stdout if omitted)");

    // noise
    std::string noise_in, noise_out, noise_text;
    std::uint64_t noise_seed = 0;
    auto* noise_cmd = app.add_subcommand("noise", "Inject salt & pepper or Gaussian noise");
    noise_cmd->add_option("--in", noise_in)->required()->check(CLI::ExistingFile);
    noise_cmd->add_option("--out", noise_out)->required();
    noise_cmd->add_option("--noise", noise_text,
                          "salt-pepper:<density> | gaussian:<mean>:<variance> (variance on the [0,1] scale)")
        ->required();
    noise_cmd->add_option("--seed", noise_seed);

    // metrics
    std::string met_ref, met_test, met_entropy = "pooled";
    SsimParams met_ssim;
    bool met_mse = false;
    auto* metrics_cmd = app.add_subcommand("metrics", "MSSIM between two images and entropy of the test image");
    metrics_cmd->add_option("--ref", met_ref)->required()->check(CLI::ExistingFile);
    metrics_cmd->add_option("--test", met_test)->required()->check(CLI::ExistingFile);
    metrics_cmd->add_option("--window", met_ssim.window)->check(CLI::Range(2, 4096));
    metrics_cmd->add_option("--entropy-mode", met_entropy, "pooled | channel-mean");
    metrics_cmd->add_flag("--mse", met_mse, "Also print MSE (debug)");

    // synth
    std::string synth_scene, synth_out;
    auto* synth_cmd = app.add_subcommand("synth", "Write a bundled synthetic test scene");
    synth_cmd->add_option("--scene", synth_scene, "ramp | two-tone | peppers | uniform-gray")->required();
    synth_cmd->add_option("--out", synth_out)->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) {
        reversed.pop_back();  // program name
    }
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    // Parameter validation failures are usage errors; anything after that is a
    // processing failure.
    try {
        if (*enhance_cmd) {
            const ColorSpace cs = parse_color_space(enh_space);
            const Technique t = make_technique(enh_tech, settings_from(enh_flags));
            const RgbImage img = read_image(enh_in);
            write_image(enhance_image(img, cs, t), enh_out);
            return kExitOk;
        }
        if (*segment_cmd) {
            const ColorSpace cs = parse_color_space(seg_space);
            const FeatureMode mode = parse_feature_mode(seg_mode);
            std::optional<Technique> pre;
            if (seg_tech != "none") {
                pre = make_technique(seg_tech, settings_from(seg_flags));
            }
            RgbImage img = read_image(seg_in);
            if (pre) {
                img = enhance_image(img, cs, *pre);
            }
            const LabelMap lm = segment_image(img, cs, seg_params, mode);
            write_image(render_segmentation(img, lm), seg_out);
            if (!seg_labels.empty()) {
                write_label_pgm(lm, seg_labels);
            }
            out << "objective " << lm.objective << "\niterations " << lm.iterations << '\n';
            return kExitOk;
        }
        if (*suite_cmd) {
            json j = suite_config.empty() ? json::object() : read_config_json(suite_config);
            if (!suite_out.empty()) j["output_dir"] = suite_out;
            if (suite_seed) j["seed"] = *suite_seed;
            if (!suite_noise.empty()) j["noise"] = suite_noise;
            if (suite_timing) j["timing"] = true;
            if (suite_no_artifacts) j["artifacts"] = false;
            if (!suite_spaces.empty()) j["color_spaces"] = suite_spaces;
            if (!suite_techs.empty()) j["techniques"] = suite_techs;
            if (!suite_images.empty()) {
                json imgs = json::array();
                // Flag paths are relative to the working directory, not the config file.
                auto from_cwd = [](const std::string& p) {
                    return p.starts_with("synthetic:") ? p : fs::absolute(p).string();
                };
                for (const auto& spec : suite_images) {
                    const auto eq = spec.find('=');
                    if (eq == std::string::npos) {
                        json entry = {{"path", from_cwd(spec)}};
                        if (!spec.starts_with("synthetic:")) {
                            entry["id"] = fs::path(spec).stem().string();
                        }
                        imgs.push_back(entry);
                    } else {
                        imgs.push_back({{"id", spec.substr(0, eq)}, {"path", from_cwd(spec.substr(eq + 1))}});
                    }
                }
                j["images"] = imgs;
            }
            if (suite_k || suite_segment) {
                if (!j.contains("segmentation") || j["segmentation"].is_null()) {
                    j["segmentation"] = json::object();
                }
                if (suite_k) j["segmentation"]["k"] = *suite_k;
            }
            ExperimentConfig cfg;
            try {
                cfg = config_from_json(j);
            } catch (const json::exception& e) {
                throw InvalidInput(std::string("config error: ") + e.what());
            }
            validate(cfg);

            const ExperimentReport enh = run_enhancement_suite(cfg);
            write_report(enh, cfg.output_dir / "report.csv", cfg.timing);
            std::size_t failed = enh.metadata["errors"].size();
            out << "wrote " << (cfg.output_dir / "report.csv").string() << " (" << enh.rows.size()
                << " rows)\n";
            if (cfg.segmentation) {
                const ExperimentReport seg = run_segmentation_suite(cfg);
                write_report(seg, cfg.output_dir / "segmentation_report.csv", cfg.timing);
                failed += seg.metadata["errors"].size();
                out << "wrote " << (cfg.output_dir / "segmentation_report.csv").string() << " ("
                    << seg.rows.size() << " rows)\n";
            }
            if (failed > 0) {
                err << "colorenh: " << failed << " matrix cell(s) failed; see report metadata\n";
                return kExitFailure;
            }
            return kExitOk;
        }
        if (*hist_cmd) {
            std::ostringstream csv;
            const RgbImage img = read_image(hist_in);
            if (hist_space == "rgb") {
                const auto planes = split_channels(img);
                const Histogram r = build_histogram(planes[0], hist_bins);
                const Histogram g = build_histogram(planes[1], hist_bins);
                const Histogram b = build_histogram(planes[2], hist_bins);
                csv << "bin_index,count_r,count_g,count_b\n";
                for (int k = 0; k < hist_bins; ++k) {
                    csv << k << ',' << r.counts[k] << ',' << g.counts[k] << ',' << b.counts[k] << '\n';
                }
            } else {
                const ColorSpace cs = parse_color_space(hist_space);
                const ChannelPlane luma =
                    cs == ColorSpace::Hsv ? luma_plane(rgb_to_hsv(img)) : luma_plane(rgb_to_lab(img));
                const Histogram h = build_histogram(luma, hist_bins);
                csv << "bin_index,count\n";
                for (int k = 0; k < hist_bins; ++k) {
                    csv << k << ',' << h.counts[k] << '\n';
                }
            }
            write_text(csv.str(), hist_out, out);
            return kExitOk;
        }
        if (*noise_cmd) {
            const NoiseSpec spec = parse_noise(noise_text, noise_seed);
            write_image(apply_noise(read_image(noise_in), spec), noise_out);
            return kExitOk;
        }
        if (*metrics_cmd) {
            EntropyMode mode = EntropyMode::Pooled;
            if (met_entropy == "channel-mean") {
                mode = EntropyMode::ChannelMean;
            } else if (met_entropy != "pooled") {
                throw InvalidInput("--entropy-mode must be pooled or channel-mean");
            }
            const RgbImage ref = read_image(met_ref);
            const RgbImage test = read_image(met_test);
            char line[128];
            std::snprintf(line, sizeof line, "mssim %.6f\n", mssim(ref, test, met_ssim));
            out << line;
            std::snprintf(line, sizeof line, "entropy %.6f\n", entropy(test, mode));
            out << line;
            std::snprintf(line, sizeof line, "entropy_ref %.6f\n", entropy(ref, mode));
            out << line;
            if (met_mse) {
                std::snprintf(line, sizeof line, "mse %.6f\n", colorenh::mse(ref, test));
                out << line;
            }
            return kExitOk;
        }
        if (*synth_cmd) {
            write_image(synthetic::generate(synth_scene), synth_out);
            return kExitOk;
        }
    } catch (const InvalidInput& e) {
        err << "colorenh: " << e.what() << '\n';
        return kExitUsage;
    } catch (const json::exception& e) {
        err << "colorenh: config parse error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "colorenh: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitUsage;
}

int cli_main(int argc, const char* const* argv) {
    return cli_main(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}

}  // namespace colorenh
