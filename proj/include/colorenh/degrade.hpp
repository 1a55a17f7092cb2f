#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

#include "colorenh/image.hpp"

namespace colorenh {

struct SaltPepper {
    double density = 0.2;
};

/// Additive noise on the normalized [0, 1] sample scale.
struct Gaussian {
    double mean = 0.0;
    double variance = 0.01;
};

struct NoiseSpec {
    std::variant<SaltPepper, Gaussian> kind;
    std::uint64_t seed = 0;
};

/// Name of the generator that drives all noise, recorded in report metadata.
inline constexpr std::string_view kNoiseRngName = "std::mt19937_64 seeded per row via splitmix64(seed, row)";

/// Each pixel is hit with probability `density`; a hit pixel becomes pure
/// black or pure white (all channels jointly) with equal odds.
RgbImage add_salt_pepper(const RgbImage& img, double density, std::uint64_t seed);

/// Independent N(mean, variance) per channel per pixel on the s/255 scale,
/// clamped to [0, 1] and requantized.
RgbImage add_gaussian(const RgbImage& img, double mean, double variance, std::uint64_t seed);

RgbImage apply_noise(const RgbImage& img, const NoiseSpec& spec);

/// Parses "salt-pepper:<density>" or "gaussian:<mean>:<variance>".
NoiseSpec parse_noise(std::string_view text, std::uint64_t seed = 0);

/// Canonical label, e.g. "salt-pepper:0.2" or "gaussian:0:0.01".
std::string noise_label(const NoiseSpec& spec);

}  // namespace colorenh
