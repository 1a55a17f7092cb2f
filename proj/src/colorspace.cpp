#include "colorenh/colorspace.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace colorenh {

namespace {

// sRGB primaries, D65.
constexpr double kRgbToXyz[3][3] = {
    {0.4124564, 0.3575761, 0.1804375},
    {0.2126729, 0.7151522, 0.0721750},
    {0.0193339, 0.1191920, 0.9503041},
};
constexpr double kXyzToRgb[3][3] = {
    {3.2404542, -1.5371385, -0.4985314},
    {-0.9692660, 1.8760108, 0.0415560},
    {0.0556434, -0.2040259, 1.0572252},
};
// Reference white as the image of linear RGB (1,1,1), so grays land on a = b = 0.
constexpr double kWhiteX = kRgbToXyz[0][0] + kRgbToXyz[0][1] + kRgbToXyz[0][2];
constexpr double kWhiteY = kRgbToXyz[1][0] + kRgbToXyz[1][1] + kRgbToXyz[1][2];
constexpr double kWhiteZ = kRgbToXyz[2][0] + kRgbToXyz[2][1] + kRgbToXyz[2][2];

constexpr double kLabEpsilon = 216.0 / 24389.0;
constexpr double kLabKappa = 24389.0 / 27.0;

double srgb_to_linear(double c) {
    return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

double linear_to_srgb(double c) {
    return c <= 0.0031308 ? 12.92 * c : 1.055 * std::pow(c, 1.0 / 2.4) - 0.055;
}

double lab_f(double t) {
    return t > kLabEpsilon ? std::cbrt(t) : (kLabKappa * t + 16.0) / 116.0;
}

double lab_f_inv(double f) {
    const double f3 = f * f * f;
    return f3 > kLabEpsilon ? f3 : (116.0 * f - 16.0) / kLabKappa;
}

void check_same_dims(const ChannelPlane& a, const ChannelPlane& b) {
    if (a.width() != b.width() || a.height() != b.height()) {
        throw InvalidInput("luma plane dimensions differ from the image");
    }
}

}  // namespace

std::string_view to_string(ColorSpace cs) {
    return cs == ColorSpace::Hsv ? "hsv" : "lab";
}

ColorSpace parse_color_space(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "hsv") {
        return ColorSpace::Hsv;
    }
    if (lower == "lab") {
        return ColorSpace::Lab;
    }
    throw InvalidInput("unknown color space '" + std::string(name) + "' (expected hsv or lab)");
}

Range luma_range(ColorSpace cs) {
    return cs == ColorSpace::Hsv ? kUnitRange : kLightnessRange;
}

Hsv rgb_to_hsv(double r, double g, double b) {
    const double mx = std::max({r, g, b});
    const double mn = std::min({r, g, b});
    const double delta = mx - mn;
    Hsv out{0.0, mx > 0.0 ? delta / mx : 0.0, mx};
    if (delta <= 0.0) {
        return out;  // achromatic: hue pinned to 0
    }
    double sector;
    if (mx == r) {
        sector = (g - b) / delta;
    } else if (mx == g) {
        sector = 2.0 + (b - r) / delta;
    } else {
        sector = 4.0 + (r - g) / delta;
    }
    double h = sector * (kTwoPi / 6.0);
    if (h < 0.0) {
        h += kTwoPi;
    }
    if (h >= kTwoPi) {
        h = 0.0;
    }
    out.h = h;
    return out;
}

void hsv_to_rgb(const Hsv& hsv, double& r, double& g, double& b) {
    const double v = hsv.v;
    if (hsv.s <= 0.0) {
        r = g = b = v;
        return;
    }
    const double hh = hsv.h / (kTwoPi / 6.0);
    const int sector = static_cast<int>(std::floor(hh)) % 6;
    const double f = hh - std::floor(hh);
    const double p = v * (1.0 - hsv.s);
    const double q = v * (1.0 - hsv.s * f);
    const double t = v * (1.0 - hsv.s * (1.0 - f));
    switch (sector) {
        case 0: r = v; g = t; b = p; break;
        case 1: r = q; g = v; b = p; break;
        case 2: r = p; g = v; b = t; break;
        case 3: r = p; g = q; b = v; break;
        case 4: r = t; g = p; b = v; break;
        default: r = v; g = p; b = q; break;
    }
}

Lab rgb_to_lab(double r, double g, double b) {
    const double lr = srgb_to_linear(r);
    const double lg = srgb_to_linear(g);
    const double lb = srgb_to_linear(b);
    const double x = kRgbToXyz[0][0] * lr + kRgbToXyz[0][1] * lg + kRgbToXyz[0][2] * lb;
    const double y = kRgbToXyz[1][0] * lr + kRgbToXyz[1][1] * lg + kRgbToXyz[1][2] * lb;
    const double z = kRgbToXyz[2][0] * lr + kRgbToXyz[2][1] * lg + kRgbToXyz[2][2] * lb;
    const double fx = lab_f(x / kWhiteX);
    const double fy = lab_f(y / kWhiteY);
    const double fz = lab_f(z / kWhiteZ);
    return {std::clamp(116.0 * fy - 16.0, 0.0, 100.0), 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

void lab_to_rgb(const Lab& lab, double& r, double& g, double& b) {
    const double fy = (lab.l + 16.0) / 116.0;
    const double fx = fy + lab.a / 500.0;
    const double fz = fy - lab.b / 200.0;
    const double x = lab_f_inv(fx) * kWhiteX;
    const double y = lab_f_inv(fy) * kWhiteY;
    const double z = lab_f_inv(fz) * kWhiteZ;
    const double lin[3] = {
        kXyzToRgb[0][0] * x + kXyzToRgb[0][1] * y + kXyzToRgb[0][2] * z,
        kXyzToRgb[1][0] * x + kXyzToRgb[1][1] * y + kXyzToRgb[1][2] * z,
        kXyzToRgb[2][0] * x + kXyzToRgb[2][1] * y + kXyzToRgb[2][2] * z,
    };
    r = linear_to_srgb(std::clamp(lin[0], 0.0, 1.0));
    g = linear_to_srgb(std::clamp(lin[1], 0.0, 1.0));
    b = linear_to_srgb(std::clamp(lin[2], 0.0, 1.0));
}

HsvImage rgb_to_hsv(const RgbImage& img) {
    const std::size_t n = img.pixel_count();
    std::vector<double> h(n), s(n), v(n);
    const auto data = img.data();
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
        const Hsv px = rgb_to_hsv(data[i * 3] / 255.0, data[i * 3 + 1] / 255.0,
                                  data[i * 3 + 2] / 255.0);
        h[i] = px.h;
        s[i] = px.s;
        v[i] = px.v;
    }
    const int w = img.width();
    const int ht = img.height();
    return {ChannelPlane(w, ht, kHueRange, std::move(h)),
            ChannelPlane(w, ht, kUnitRange, std::move(s)),
            ChannelPlane(w, ht, kUnitRange, std::move(v))};
}

RgbImage hsv_to_rgb(const HsvImage& img) {
    RgbImage out(img.width(), img.height());
    auto data = out.data();
    const auto h = img.h.samples();
    const auto s = img.s.samples();
    const auto v = img.v.samples();
    const auto n = static_cast<std::ptrdiff_t>(out.pixel_count());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        double r, g, b;
        hsv_to_rgb(Hsv{h[i], s[i], v[i]}, r, g, b);
        data[i * 3] = quantize_unit(r);
        data[i * 3 + 1] = quantize_unit(g);
        data[i * 3 + 2] = quantize_unit(b);
    }
    return out;
}

LabImage rgb_to_lab(const RgbImage& img) {
    const std::size_t n = img.pixel_count();
    std::vector<double> l(n), a(n), b(n);
    const auto data = img.data();
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
        const Lab px = rgb_to_lab(data[i * 3] / 255.0, data[i * 3 + 1] / 255.0,
                                  data[i * 3 + 2] / 255.0);
        l[i] = px.l;
        a[i] = px.a;
        b[i] = px.b;
    }
    const int w = img.width();
    const int ht = img.height();
    return {ChannelPlane(w, ht, kLightnessRange, std::move(l)),
            ChannelPlane(w, ht, kChromaRange, std::move(a)),
            ChannelPlane(w, ht, kChromaRange, std::move(b))};
}

RgbImage lab_to_rgb(const LabImage& img) {
    RgbImage out(img.width(), img.height());
    auto data = out.data();
    const auto l = img.l.samples();
    const auto a = img.a.samples();
    const auto b = img.b.samples();
    const auto n = static_cast<std::ptrdiff_t>(out.pixel_count());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        double r, g, bl;
        lab_to_rgb(Lab{l[i], a[i], b[i]}, r, g, bl);
        data[i * 3] = quantize_unit(r);
        data[i * 3 + 1] = quantize_unit(g);
        data[i * 3 + 2] = quantize_unit(bl);
    }
    return out;
}

ChannelPlane luma_plane(const HsvImage& img) { return img.v; }
ChannelPlane luma_plane(const LabImage& img) { return img.l; }

HsvImage replace_luma(const HsvImage& img, ChannelPlane new_luma) {
    check_same_dims(img.v, new_luma);
    if (new_luma.range() != kUnitRange) {
        throw InvalidInput("HSV luma plane must have range [0, 1]");
    }
    return {img.h, img.s, std::move(new_luma)};
}

LabImage replace_luma(const LabImage& img, ChannelPlane new_luma) {
    check_same_dims(img.l, new_luma);
    if (new_luma.range() != kLightnessRange) {
        throw InvalidInput("LAB luma plane must have range [0, 100]");
    }
    return {std::move(new_luma), img.a, img.b};
}

}  // namespace colorenh
