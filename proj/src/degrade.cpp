#include "colorenh/degrade.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <random>
#include <sstream>
#include <vector>

namespace colorenh {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Independent stream per row so rows can be generated in any order.
std::mt19937_64 row_stream(std::uint64_t seed, int row) {
    return std::mt19937_64(splitmix64(splitmix64(seed) ^ static_cast<std::uint64_t>(row)));
}

double parse_number(std::string_view s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw InvalidInput("bad number '" + std::string(s) + "' in noise spec");
    }
    return v;
}

std::string format_number(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

}  // namespace

RgbImage add_salt_pepper(const RgbImage& img, double density, std::uint64_t seed) {
    if (!(density >= 0.0 && density <= 1.0)) {
        throw InvalidInput("salt & pepper density must lie in [0, 1]");
    }
    RgbImage out = img;
    auto data = out.data();
    const int w = img.width();
#pragma omp parallel for schedule(static)
    for (int y = 0; y < img.height(); ++y) {
        auto rng = row_stream(seed, y);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (int x = 0; x < w; ++x) {
            const bool hit = unit(rng) < density;
            const bool white = unit(rng) < 0.5;
            if (hit) {
                const std::uint8_t v = white ? 255 : 0;
                const std::size_t i = (static_cast<std::size_t>(y) * w + x) * 3;
                data[i] = data[i + 1] = data[i + 2] = v;
            }
        }
    }
    return out;
}

RgbImage add_gaussian(const RgbImage& img, double mean, double variance, std::uint64_t seed) {
    if (!(variance >= 0.0)) {
        throw InvalidInput("gaussian variance must be non-negative");
    }
    const double sigma = std::sqrt(variance);
    RgbImage out = img;
    auto data = out.data();
    const std::size_t row_len = static_cast<std::size_t>(img.width()) * 3;
#pragma omp parallel for schedule(static)
    for (int y = 0; y < img.height(); ++y) {
        auto rng = row_stream(seed, y);
        std::normal_distribution<double> normal(0.0, 1.0);
        for (std::size_t j = 0; j < row_len; ++j) {
            const std::size_t i = y * row_len + j;
            const double v = data[i] / 255.0 + mean + sigma * normal(rng);
            data[i] = quantize_unit(std::clamp(v, 0.0, 1.0));
        }
    }
    return out;
}

RgbImage apply_noise(const RgbImage& img, const NoiseSpec& spec) {
    if (const auto* sp = std::get_if<SaltPepper>(&spec.kind)) {
        return add_salt_pepper(img, sp->density, spec.seed);
    }
    const auto& g = std::get<Gaussian>(spec.kind);
    return add_gaussian(img, g.mean, g.variance, spec.seed);
}

NoiseSpec parse_noise(std::string_view text, std::uint64_t seed) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto colon = text.find(':', start);
        parts.push_back(text.substr(start, colon - start));
        if (colon == std::string_view::npos) {
            break;
        }
        start = colon + 1;
    }
    NoiseSpec spec;
    spec.seed = seed;
    if ((parts[0] == "salt-pepper" || parts[0] == "saltpepper" || parts[0] == "sp") &&
        parts.size() == 2) {
        const double density = parse_number(parts[1]);
        if (!(density >= 0.0 && density <= 1.0)) {
            throw InvalidInput("salt & pepper density must lie in [0, 1]");
        }
        spec.kind = SaltPepper{density};
        return spec;
    }
    if (parts[0] == "gaussian" && parts.size() == 3) {
        const double variance = parse_number(parts[2]);
        if (!(variance >= 0.0)) {
            throw InvalidInput("gaussian variance must be non-negative");
        }
        spec.kind = Gaussian{parse_number(parts[1]), variance};
        return spec;
    }
    throw InvalidInput("noise spec must be salt-pepper:<density> or gaussian:<mean>:<variance>, got '" +
                       std::string(text) + "'");
}

std::string noise_label(const NoiseSpec& spec) {
    if (const auto* sp = std::get_if<SaltPepper>(&spec.kind)) {
        return "salt-pepper:" + format_number(sp->density);
    }
    const auto& g = std::get<Gaussian>(spec.kind);
    return "gaussian:" + format_number(g.mean) + ":" + format_number(g.variance);
}

}  // namespace colorenh
