#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "colorenh/colorspace.hpp"
#include "colorenh/degrade.hpp"
#include "colorenh/global_enhance.hpp"
#include "colorenh/local_enhance.hpp"
#include "colorenh/metrics.hpp"
#include "colorenh/segment.hpp"

namespace colorenh {

inline constexpr std::string_view kToolVersion = "0.3.0";

struct HistEq {
    int bin_count = kDefaultBins;
};

struct HistSpec {
    Histogram target = gaussian_target();
    std::string target_name = "gaussian(mean=127.5,sigma=48)";
};

using Technique = std::variant<HistEq, HistSpec, AheParams, ClaheParams>;

/// "he", "hist-spec", "ahe" or "bsb-clahe".
std::string technique_name(const Technique& t);

/// Tunables shared by the technique factories.
struct EnhanceSettings {
    int bin_count = kDefaultBins;
    int window_radius = 8;
    int tiles_x = 8;
    int tiles_y = 8;
    double clip_limit = 2.0;
    double epsilon = 1e-3;
    std::optional<std::filesystem::path> target_path;
};

/// Builds a technique from its CLI name. Accepts the aliases "histeq",
/// "hist-match", "clahe".
Technique make_technique(std::string_view name, const EnhanceSettings& s);

/// Luma-only enhancement: convert, enhance L or V, put it back, convert back.
RgbImage enhance_image(const RgbImage& img, ColorSpace space, const Technique& t);

/// Enhanced luma plane, exposed for histogram reporting.
ChannelPlane enhance_luma(const ChannelPlane& luma, const Technique& t);

struct ImageSource {
    std::string id;
    /// File path, or "synthetic:<name>" for a bundled scene.
    std::string path;
};

RgbImage load_source(const ImageSource& src);

struct ExperimentConfig {
    std::vector<ImageSource> images;
    std::vector<ColorSpace> color_spaces{ColorSpace::Hsv, ColorSpace::Lab};
    std::vector<Technique> techniques;
    std::optional<NoiseSpec> noise;
    std::optional<KMeansParams> segmentation;
    FeatureMode feature_mode = FeatureMode::ChromaLuma;
    EnhanceSettings enhance;
    SsimParams ssim;
    std::filesystem::path output_dir = "colorenh_out";
    std::uint64_t seed = 0;
    /// Fills runtime_ms. Off by default so reports stay byte-identical.
    bool timing = false;
    bool write_artifacts = true;
};

/// Throws InvalidInput when the matrix is empty or a parameter is out of range.
void validate(const ExperimentConfig& cfg);

/// Parses a TOML or JSON config file (chosen by extension) into its JSON form,
/// recording the file's directory as "base_dir" for relative paths.
nlohmann::json read_config_json(const std::filesystem::path& path);

/// Defaults for every field, then overridden by the config file.
ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig config_from_json(const nlohmann::json& j);

struct QualityRow {
    std::string image_id;
    std::string color_space;
    std::string technique;
    std::string noise;
    double entropy_bits = 0.0;
    double mssim = 0.0;
    double runtime_ms = 0.0;
    /// Empty on success.
    std::string error;
};

struct ExperimentReport {
    nlohmann::json metadata;
    std::vector<QualityRow> rows;
};

inline constexpr std::string_view kReportHeader =
    "image_id,color_space,technique,noise,entropy_bits,mssim,runtime_ms";

/// Enhancement matrix: writes enhanced images plus luma and pooled-RGB
/// histogram CSVs per cell; rows carry entropy of the enhanced image and MSSIM
/// against the clean input.
ExperimentReport run_enhancement_suite(const ExperimentConfig& cfg);

/// Segmentation matrix: noise, enhance, segment, render; rows carry the
/// entropy of the enhanced image and MSSIM of clean input vs rendering.
ExperimentReport run_segmentation_suite(const ExperimentConfig& cfg);

std::string report_csv(const ExperimentReport& report, bool timing);
void write_report(const ExperimentReport& report, const std::filesystem::path& csv_path,
                  bool timing);

/// Output directory from $COLORENH_OUTPUT_DIR, else "colorenh_out".
std::filesystem::path default_output_dir();

}  // namespace colorenh
