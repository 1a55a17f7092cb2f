#include "colorenh/synthetic.hpp"

#include <algorithm>
#include <cmath>

namespace colorenh::synthetic {

namespace {

struct Pepper {
    double cx, cy, rx, ry, angle;
    double r, g, b;
};

// Cheap deterministic texture so flat regions are not perfectly constant.
double texture(int x, int y) {
    return 0.5 * std::sin(0.37 * x + 0.11 * y) * std::sin(0.23 * y - 0.05 * x);
}

}  // namespace

RgbImage low_contrast_ramp(int width, int height, double lo, double hi) {
    RgbImage img(width, height);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const double t = width > 1 ? static_cast<double>(x) / (width - 1) : 0.0;
            const std::uint8_t v = quantize_unit(lo + t * (hi - lo));
            img.set_pixel(x, y, {v, v, v});
        }
    }
    return img;
}

RgbImage two_tone_blobs(int width, int height, std::array<std::uint8_t, 3> a,
                        std::array<std::uint8_t, 3> b) {
    RgbImage img(width, height);
    const double cx = width * 0.35;
    const double cy = height * 0.5;
    const double rad = std::min(width, height) * 0.25;
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const double dx = x - cx;
            const double dy = y - cy;
            const bool disc = dx * dx + dy * dy <= rad * rad;
            const bool bar = x >= width * 0.7 && x < width * 0.85;
            img.set_pixel(x, y, (disc || bar) ? b : a);
        }
    }
    return img;
}

RgbImage peppers_like(int width, int height) {
    const Pepper peppers[] = {
        {0.28, 0.42, 0.22, 0.30, 0.4, 0.78, 0.12, 0.10},
        {0.62, 0.35, 0.20, 0.26, -0.3, 0.20, 0.55, 0.15},
        {0.45, 0.75, 0.24, 0.17, 0.1, 0.85, 0.75, 0.15},
        {0.82, 0.72, 0.15, 0.22, 0.6, 0.88, 0.45, 0.10},
        {0.12, 0.82, 0.12, 0.14, -0.5, 0.70, 0.10, 0.12},
    };
    RgbImage img(width, height);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const double u = (x + 0.5) / width;
            const double v = (y + 0.5) / height;
            // Backdrop: dim olive with a vertical falloff.
            double r = 0.30 - 0.08 * v;
            double g = 0.33 - 0.06 * v;
            double b = 0.18;
            for (const Pepper& p : peppers) {
                const double ca = std::cos(p.angle);
                const double sa = std::sin(p.angle);
                const double du = (u - p.cx) * ca + (v - p.cy) * sa;
                const double dv = -(u - p.cx) * sa + (v - p.cy) * ca;
                const double d = (du * du) / (p.rx * p.rx) + (dv * dv) / (p.ry * p.ry);
                if (d > 1.0) {
                    continue;
                }
                const double shade = 0.55 + 0.45 * std::sqrt(1.0 - d);
                const double hx = du / p.rx + 0.35;
                const double hy = dv / p.ry + 0.35;
                const double highlight = 0.35 * std::exp(-12.0 * (hx * hx + hy * hy));
                r = std::min(1.0, p.r * shade + highlight);
                g = std::min(1.0, p.g * shade + highlight);
                b = std::min(1.0, p.b * shade + highlight);
            }
            const double tex = 0.03 * texture(x, y);
            // Low-contrast veil: compress toward mid-gray.
            auto veil = [tex](double c) { return 0.2 + 0.6 * std::clamp(c + tex, 0.0, 1.0); };
            img.set_pixel(x, y, {quantize_unit(veil(r)), quantize_unit(veil(g)), quantize_unit(veil(b))});
        }
    }
    return img;
}

RgbImage uniform_gray_levels(int width, int height) {
    const std::size_t n = static_cast<std::size_t>(width) * height;
    if (n % 256 != 0) {
        throw InvalidInput("uniform gray image needs a pixel count divisible by 256");
    }
    RgbImage img(width, height);
    auto d = img.data();
    const std::size_t per_level = n / 256;
    for (std::size_t i = 0; i < n; ++i) {
        const auto level = static_cast<std::uint8_t>(i / per_level);
        d[i * 3] = d[i * 3 + 1] = d[i * 3 + 2] = level;
    }
    return img;
}

std::vector<std::string> names() { return {"ramp", "two-tone", "peppers", "uniform-gray"}; }

RgbImage generate(std::string_view name) {
    if (name == "ramp") return low_contrast_ramp(256, 64);
    if (name == "two-tone") return two_tone_blobs(128, 96);
    if (name == "peppers") return peppers_like();
    if (name == "uniform-gray") return uniform_gray_levels();
    throw InvalidInput("unknown synthetic scene '" + std::string(name) + "'");
}

}  // namespace colorenh::synthetic
