#include "colorenh/metrics.hpp"

#include <array>
#include <cmath>
#include <numeric>

namespace colorenh {

namespace {

double entropy_of(const std::array<double, 256>& counts) {
    const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
    double e = 0.0;
    for (double c : counts) {
        if (c > 0.0) {
            const double p = c / total;
            e -= p * std::log2(p);
        }
    }
    return e;
}

void check_params(const SsimParams& p) {
    if (p.window < 2 || !(p.k1 > 0.0) || !(p.k2 > 0.0) || !(p.dynamic_range > 0.0)) {
        throw InvalidInput("SSIM needs window >= 2 and positive k1, k2, dynamic range");
    }
}

}  // namespace

double entropy(const RgbImage& img, EntropyMode mode) {
    const auto data = img.data();
    if (mode == EntropyMode::Pooled) {
        std::array<double, 256> counts{};
        for (std::uint8_t s : data) {
            counts[s] += 1.0;
        }
        return entropy_of(counts);
    }
    double sum = 0.0;
    for (int c = 0; c < 3; ++c) {
        std::array<double, 256> counts{};
        for (std::size_t i = static_cast<std::size_t>(c); i < data.size(); i += 3) {
            counts[data[i]] += 1.0;
        }
        sum += entropy_of(counts);
    }
    return sum / 3.0;
}

double ssim_window(std::span<const double> a, std::span<const double> b, const SsimParams& p) {
    if (a.size() != b.size() || a.empty()) {
        throw InvalidInput("SSIM windows must be non-empty and equal in size");
    }
    check_params(p);
    const double n = static_cast<double>(a.size());
    double mu_a = 0.0;
    double mu_b = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        mu_a += a[i];
        mu_b += b[i];
    }
    mu_a /= n;
    mu_b /= n;
    double var_a = 0.0;
    double var_b = 0.0;
    double cov = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double da = a[i] - mu_a;
        const double db = b[i] - mu_b;
        var_a += da * da;
        var_b += db * db;
        cov += da * db;
    }
    var_a /= n;
    var_b /= n;
    cov /= n;
    const double c1 = (p.k1 * p.dynamic_range) * (p.k1 * p.dynamic_range);
    const double c2 = (p.k2 * p.dynamic_range) * (p.k2 * p.dynamic_range);
    return ((2.0 * mu_a * mu_b + c1) * (2.0 * cov + c2)) /
           ((mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2));
}

std::vector<double> gray_plane(const RgbImage& img) {
    std::vector<double> g(img.pixel_count());
    const auto d = img.data();
    for (std::size_t i = 0; i < g.size(); ++i) {
        g[i] = 0.299 * d[i * 3] + 0.587 * d[i * 3 + 1] + 0.114 * d[i * 3 + 2];
    }
    return g;
}

double mssim(const RgbImage& a, const RgbImage& b, const SsimParams& p) {
    check_params(p);
    if (a.width() != b.width() || a.height() != b.height()) {
        throw InvalidInput("MSSIM images differ in dimensions");
    }
    const int win = p.window;
    if (a.width() < win || a.height() < win) {
        throw InvalidInput("MSSIM images are smaller than one window");
    }
    const auto ga = gray_plane(a);
    const auto gb = gray_plane(b);
    const int nx = a.width() / win;
    const int ny = a.height() / win;
    const int w = a.width();
    std::vector<double> scores(static_cast<std::size_t>(nx) * ny);
    const int n_windows = nx * ny;
#pragma omp parallel for schedule(static)
    for (int t = 0; t < n_windows; ++t) {
        const int x0 = (t % nx) * win;
        const int y0 = (t / nx) * win;
        std::vector<double> wa(static_cast<std::size_t>(win) * win);
        std::vector<double> wb(wa.size());
        for (int y = 0; y < win; ++y) {
            for (int x = 0; x < win; ++x) {
                const std::size_t src = static_cast<std::size_t>(y0 + y) * w + (x0 + x);
                wa[static_cast<std::size_t>(y) * win + x] = ga[src];
                wb[static_cast<std::size_t>(y) * win + x] = gb[src];
            }
        }
        scores[t] = ssim_window(wa, wb, p);
    }
    // Ordered reduction keeps the result independent of thread count.
    return std::accumulate(scores.begin(), scores.end(), 0.0) / static_cast<double>(scores.size());
}

double mse(const RgbImage& a, const RgbImage& b) {
    if (a.width() != b.width() || a.height() != b.height()) {
        throw InvalidInput("MSE images differ in dimensions");
    }
    const auto da = a.data();
    const auto db = b.data();
    double s = 0.0;
    for (std::size_t i = 0; i < da.size(); ++i) {
        const double d = static_cast<double>(da[i]) - db[i];
        s += d * d;
    }
    return s / static_cast<double>(da.size());
}

}  // namespace colorenh
