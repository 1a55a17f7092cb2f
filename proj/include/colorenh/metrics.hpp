#pragma once

#include <span>
#include <vector>

#include "colorenh/image.hpp"

namespace colorenh {

struct SsimParams {
    int window = 8;
    double k1 = 0.01;
    double k2 = 0.03;
    double dynamic_range = 255.0;
};

enum class EntropyMode {
    /// All R, G and B samples pooled into one 256-bin histogram.
    Pooled,
    /// Mean of the three per-channel entropies.
    ChannelMean,
};

/// Shannon entropy in bits, -sum p log2 p over nonzero bins.
double entropy(const RgbImage& img, EntropyMode mode = EntropyMode::Pooled);

/// Single-window SSIM with 1/n sample statistics.
double ssim_window(std::span<const double> a, std::span<const double> b, const SsimParams& p = {});

/// 0.299 R + 0.587 G + 0.114 B, unrounded, on the 0..255 scale.
std::vector<double> gray_plane(const RgbImage& img);

/// Mean SSIM over non-overlapping window x window tiles of the gray images;
/// partial tiles at the right and bottom edges are dropped.
double mssim(const RgbImage& a, const RgbImage& b, const SsimParams& p = {});

/// Debug only.
double mse(const RgbImage& a, const RgbImage& b);

}  // namespace colorenh
