#include "colorenh/reference.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace colorenh::reference {

namespace {

int naive_bin(double v, Range r, int bins) {
    double t = (v - r.lo) / (r.hi - r.lo) * bins;
    int k = static_cast<int>(std::floor(t));
    if (k < 0) k = 0;
    if (k > bins - 1) k = bins - 1;
    return k;
}

double naive_center(int k, Range r, int bins) {
    return r.lo + (k + 0.5) / bins * (r.hi - r.lo);
}

// round-half-up of (L-1) * cum / n without floating point.
int rounded_level(std::uint64_t cum, std::uint64_t n, int bins) {
    const std::uint64_t scaled = 2 * static_cast<std::uint64_t>(bins - 1) * cum + n;
    return static_cast<int>(scaled / (2 * n));
}

}  // namespace

std::vector<int> equalization_table_direct(const std::vector<std::uint64_t>& counts) {
    std::uint64_t n = 0;
    for (auto c : counts) {
        n += c;
    }
    const int bins = static_cast<int>(counts.size());
    std::vector<int> table(counts.size());
    std::uint64_t cum = 0;
    for (std::size_t k = 0; k < counts.size(); ++k) {
        cum += counts[k];
        table[k] = rounded_level(cum, n, bins);
    }
    return table;
}

ChannelPlane equalize_direct(const ChannelPlane& plane, int bin_count) {
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(bin_count), 0);
    for (double v : plane.samples()) {
        ++counts[naive_bin(v, plane.range(), bin_count)];
    }
    const auto table = equalization_table_direct(counts);
    ChannelPlane out(plane.width(), plane.height(), plane.range());
    for (std::size_t i = 0; i < plane.size(); ++i) {
        const int k = naive_bin(plane.samples()[i], plane.range(), bin_count);
        out.samples()[i] = naive_center(table[k], plane.range(), bin_count);
    }
    return out;
}

ChannelPlane ahe_naive(const ChannelPlane& plane, const AheParams& p) {
    const int w = plane.width();
    const int h = plane.height();
    const int r = p.window_radius;
    const int bins = p.bin_count;
    ChannelPlane out(w, h, plane.range());
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const int center = naive_bin(plane.at(x, y), plane.range(), bins);
            std::uint64_t cum = 0;
            std::uint64_t n = 0;
            for (int yy = std::max(0, y - r); yy <= std::min(h - 1, y + r); ++yy) {
                for (int xx = std::max(0, x - r); xx <= std::min(w - 1, x + r); ++xx) {
                    ++n;
                    if (naive_bin(plane.at(xx, yy), plane.range(), bins) <= center) {
                        ++cum;
                    }
                }
            }
            out.at(x, y) = naive_center(rounded_level(cum, n, bins), plane.range(), bins);
        }
    }
    return out;
}

ChannelPlane clahe_nearest_tile(const ChannelPlane& plane, const ClaheParams& p) {
    const auto maps = clahe_tile_maps(plane, p);
    const auto xe = tile_edges(plane.width(), p.tiles_x);
    const auto ye = tile_edges(plane.height(), p.tiles_y);
    ChannelPlane out(plane.width(), plane.height(), plane.range());
    for (int y = 0; y < plane.height(); ++y) {
        const int ty = static_cast<int>(std::upper_bound(ye.begin(), ye.end(), y) - ye.begin()) - 1;
        for (int x = 0; x < plane.width(); ++x) {
            const int tx = static_cast<int>(std::upper_bound(xe.begin(), xe.end(), x) - xe.begin()) - 1;
            const int b = naive_bin(plane.at(x, y), plane.range(), p.bin_count);
            const int t = maps[static_cast<std::size_t>(ty) * p.tiles_x + tx].table[b];
            out.at(x, y) = naive_center(t, plane.range(), p.bin_count);
        }
    }
    return out;
}

double clip_level_grid_scan(const std::vector<double>& counts, double budget, int steps) {
    const double top = *std::max_element(counts.begin(), counts.end());
    const double bins = static_cast<double>(counts.size());
    double best_m = 0.0;
    double best_residual = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= steps; ++i) {
        const double m = top * i / steps;
        double excess = 0.0;
        for (double c : counts) {
            excess += std::max(0.0, c - m);
        }
        const double residual = std::abs(m + excess / bins - budget);
        if (residual < best_residual) {
            best_residual = residual;
            best_m = m;
        }
    }
    return best_m;
}

double mssim_direct(const RgbImage& a, const RgbImage& b, const SsimParams& p) {
    const int win = p.window;
    const int nx = a.width() / win;
    const int ny = a.height() / win;
    const long double c1 = static_cast<long double>(p.k1 * p.dynamic_range) * (p.k1 * p.dynamic_range);
    const long double c2 = static_cast<long double>(p.k2 * p.dynamic_range) * (p.k2 * p.dynamic_range);
    auto gray = [](const RgbImage& img, int x, int y) {
        const auto px = img.pixel(x, y);
        return 0.299L * px[0] + 0.587L * px[1] + 0.114L * px[2];
    };
    long double total = 0.0L;
    for (int wy = 0; wy < ny; ++wy) {
        for (int wx = 0; wx < nx; ++wx) {
            long double sa = 0.0L, sb = 0.0L;
            for (int y = wy * win; y < (wy + 1) * win; ++y) {
                for (int x = wx * win; x < (wx + 1) * win; ++x) {
                    sa += gray(a, x, y);
                    sb += gray(b, x, y);
                }
            }
            const long double n = static_cast<long double>(win) * win;
            const long double ma = sa / n;
            const long double mb = sb / n;
            long double va = 0.0L, vb = 0.0L, cov = 0.0L;
            for (int y = wy * win; y < (wy + 1) * win; ++y) {
                for (int x = wx * win; x < (wx + 1) * win; ++x) {
                    const long double da = gray(a, x, y) - ma;
                    const long double db = gray(b, x, y) - mb;
                    va += da * da;
                    vb += db * db;
                    cov += da * db;
                }
            }
            va /= n;
            vb /= n;
            cov /= n;
            total += ((2 * ma * mb + c1) * (2 * cov + c2)) / ((ma * ma + mb * mb + c1) * (va + vb + c2));
        }
    }
    return static_cast<double>(total / (static_cast<long double>(nx) * ny));
}

double kmeans_optimum_brute_force(const FeatureMatrix& f, int k) {
    const std::size_t n = f.rows;
    const std::size_t cols = f.cols;
    std::vector<int> labels(n, 0);
    double best = std::numeric_limits<double>::infinity();

    auto sse = [&](int groups) {
        double total = 0.0;
        for (int g = 0; g < groups; ++g) {
            std::vector<double> mean(cols, 0.0);
            std::size_t count = 0;
            for (std::size_t i = 0; i < n; ++i) {
                if (labels[i] == g) {
                    ++count;
                    for (std::size_t c = 0; c < cols; ++c) mean[c] += f.at(i, c);
                }
            }
            for (double& m : mean) m /= static_cast<double>(count);
            for (std::size_t i = 0; i < n; ++i) {
                if (labels[i] == g) {
                    for (std::size_t c = 0; c < cols; ++c) {
                        const double d = f.at(i, c) - mean[c];
                        total += d * d;
                    }
                }
            }
        }
        return total;
    };

    // Restricted growth strings enumerate each set partition once.
    std::function<void(std::size_t, int)> recurse = [&](std::size_t i, int used) {
        if (i == n) {
            best = std::min(best, sse(used));
            return;
        }
        for (int g = 0; g <= std::min(used, k - 1); ++g) {
            labels[i] = g;
            recurse(i + 1, std::max(used, g + 1));
        }
    };
    recurse(0, 0);
    return best;
}

}  // namespace colorenh::reference
