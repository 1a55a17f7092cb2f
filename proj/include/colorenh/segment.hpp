#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "colorenh/colorspace.hpp"
#include "colorenh/image.hpp"

namespace colorenh {

enum class FeatureMode {
    /// Chroma plus luma, every column scaled to [0, 1]. HSV hue enters as
    /// (S cos H, S sin H) so the wraparound at 2pi is continuous.
    ChromaLuma,
    /// As ChromaLuma without the luma column.
    Chroma,
    /// Native channels rescaled to [0, 1], hue as a plain scalar. Ablation only.
    Raw,
};

std::string_view to_string(FeatureMode mode);
FeatureMode parse_feature_mode(std::string_view name);

/// Row-major features, one row per pixel.
struct FeatureMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;
    int width = 0;
    int height = 0;
    std::string provenance;

    double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
};

struct KMeansParams {
    int k = 4;
    int max_iters = 100;
    double tol = 1e-6;
    std::uint64_t seed = 0;
    int restarts = 5;
};

struct LabelMap {
    int width = 0;
    int height = 0;
    std::vector<int> labels;
    std::vector<std::vector<double>> centers;
    double objective = 0.0;
    /// Within-cluster SSE after each Lloyd iteration of the winning restart.
    std::vector<double> objective_history;
    int iterations = 0;
};

FeatureMatrix extract_features(const HsvImage& img, FeatureMode mode);
FeatureMatrix extract_features(const LabImage& img, FeatureMode mode);

/// Number of pairwise-distinct rows.
std::size_t distinct_rows(const FeatureMatrix& f);

/// Lloyd iterations from D^2-weighted seeding, best of `restarts`. Labels are
/// renumbered by first occurrence. Throws InvalidInput if k exceeds the number
/// of distinct rows; throws std::logic_error if the objective ever rises.
LabelMap kmeans(const FeatureMatrix& f, const KMeansParams& p);

LabelMap segment_image(const RgbImage& img, ColorSpace space, const KMeansParams& p,
                       FeatureMode mode = FeatureMode::ChromaLuma);

/// Every pixel replaced by the rounded mean RGB of its cluster.
RgbImage render_segmentation(const RgbImage& img, const LabelMap& lm);

/// Labels as an 8-bit PGM (maxval = k - 1, at least 1).
void write_label_pgm(const LabelMap& lm, const std::filesystem::path& path);

}  // namespace colorenh
