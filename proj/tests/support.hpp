#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "colorenh/image.hpp"

namespace testing {

inline colorenh::RgbImage random_image(int w, int h, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> byte(0, 255);
    std::vector<std::uint8_t> data(static_cast<std::size_t>(w) * h * 3);
    for (auto& v : data) {
        v = static_cast<std::uint8_t>(byte(rng));
    }
    return colorenh::RgbImage(w, h, std::move(data));
}

/// Smooth gradients plus mild noise: closer to a photograph than white noise.
inline colorenh::RgbImage textured_image(int w, int h, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> jitter(-12, 12);
    colorenh::RgbImage img(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            auto clamp = [](int v) { return static_cast<std::uint8_t>(std::clamp(v, 0, 255)); };
            img.set_pixel(x, y, {clamp(x * 255 / w + jitter(rng)), clamp(y * 255 / h + jitter(rng)),
                                 clamp(((x ^ y) & 31) * 6 + 40 + jitter(rng))});
        }
    }
    return img;
}

inline colorenh::ChannelPlane random_plane(int w, int h, colorenh::Range range, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(range.lo, range.hi);
    std::vector<double> data(static_cast<std::size_t>(w) * h);
    for (auto& v : data) {
        v = u(rng);
    }
    return colorenh::ChannelPlane(w, h, range, std::move(data));
}

/// Samples drawn from a handful of levels so histograms have empty bins and ties.
inline colorenh::ChannelPlane clustered_plane(int w, int h, int bins, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const int levels = std::uniform_int_distribution<int>(1, bins)(rng);
    std::vector<int> palette(static_cast<std::size_t>(levels));
    for (auto& p : palette) {
        p = std::uniform_int_distribution<int>(0, bins - 1)(rng);
    }
    std::uniform_int_distribution<int> pick(0, levels - 1);
    std::vector<double> data(static_cast<std::size_t>(w) * h);
    for (auto& v : data) {
        v = colorenh::bin_center(palette[static_cast<std::size_t>(pick(rng))], colorenh::Range{0.0, 1.0}, bins);
    }
    return colorenh::ChannelPlane(w, h, colorenh::Range{0.0, 1.0}, std::move(data));
}

class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() /
                ("colorenh_" + tag + "_" + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace testing
