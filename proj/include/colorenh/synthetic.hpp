#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "colorenh/image.hpp"

// Deterministic stand-ins for the photographic test images. Every generator
// is a pure function of its arguments.
namespace colorenh::synthetic {

/// Horizontal gray ramp compressed into [lo, hi] (unit scale).
RgbImage low_contrast_ramp(int width, int height, double lo = 0.4, double hi = 0.6);

/// Two flat colors: a disc and a bar on a uniform background of `a`.
RgbImage two_tone_blobs(int width, int height, std::array<std::uint8_t, 3> a = {40, 60, 150},
                        std::array<std::uint8_t, 3> b = {220, 180, 40});

/// Red, green, yellow and orange shaded ellipses over a dim olive backdrop,
/// with soft highlights and a mild low-contrast veil.
RgbImage peppers_like(int width = 192, int height = 160);

/// Gray image whose 8-bit levels each appear equally often (width*height must
/// be a multiple of 256).
RgbImage uniform_gray_levels(int width = 256, int height = 64);

/// Names accepted by `generate`: ramp, two-tone, peppers, uniform-gray.
std::vector<std::string> names();

/// Builds a bundled scene at its default size. Throws InvalidInput on unknown names.
RgbImage generate(std::string_view name);

}  // namespace colorenh::synthetic
