#pragma once

#include <numbers>
#include <string>
#include <string_view>

#include "colorenh/image.hpp"

namespace colorenh {

enum class ColorSpace { Hsv, Lab };

std::string_view to_string(ColorSpace cs);
/// Accepts "hsv" / "lab" (case-insensitive).
ColorSpace parse_color_space(std::string_view name);

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline constexpr Range kHueRange{0.0, kTwoPi};
inline constexpr Range kUnitRange{0.0, 1.0};
inline constexpr Range kLightnessRange{0.0, 100.0};
// Nominal; sRGB colors stay well inside, but the planes are not clamped to it.
inline constexpr Range kChromaRange{-128.0, 127.0};

/// Hue in radians [0, 2pi); saturation and value in [0, 1].
struct HsvImage {
    ChannelPlane h;
    ChannelPlane s;
    ChannelPlane v;

    int width() const { return v.width(); }
    int height() const { return v.height(); }
    friend bool operator==(const HsvImage&, const HsvImage&) = default;
};

/// CIELAB relative to sRGB / D65. L in [0, 100].
struct LabImage {
    ChannelPlane l;
    ChannelPlane a;
    ChannelPlane b;

    int width() const { return l.width(); }
    int height() const { return l.height(); }
    friend bool operator==(const LabImage&, const LabImage&) = default;
};

struct Hsv {
    double h, s, v;
};
struct Lab {
    double l, a, b;
};

// Per-pixel conversions on unit-range RGB.
Hsv rgb_to_hsv(double r, double g, double b);
void hsv_to_rgb(const Hsv& hsv, double& r, double& g, double& b);
Lab rgb_to_lab(double r, double g, double b);
/// Out-of-gamut results are clamped to [0, 1] in linear RGB.
void lab_to_rgb(const Lab& lab, double& r, double& g, double& b);

HsvImage rgb_to_hsv(const RgbImage& img);
RgbImage hsv_to_rgb(const HsvImage& img);
LabImage rgb_to_lab(const RgbImage& img);
RgbImage lab_to_rgb(const LabImage& img);

ChannelPlane luma_plane(const HsvImage& img);
ChannelPlane luma_plane(const LabImage& img);

/// Chroma planes are carried over untouched. The new plane must match the
/// image's dimensions and the space's luma range.
HsvImage replace_luma(const HsvImage& img, ChannelPlane new_luma);
LabImage replace_luma(const LabImage& img, ChannelPlane new_luma);

Range luma_range(ColorSpace cs);

}  // namespace colorenh
