#include "colorenh/local_enhance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace colorenh {

namespace {

struct AxisBlend {
    int lo = 0;
    int hi = 0;
    double w = 0.0;  // weight of `hi`
};

// Interpolation anchors along one axis, one entry per pixel coordinate.
std::vector<AxisBlend> axis_blend(const std::vector<int>& edges) {
    const int tiles = static_cast<int>(edges.size()) - 1;
    std::vector<double> centers(static_cast<std::size_t>(tiles));
    for (int i = 0; i < tiles; ++i) {
        centers[i] = (edges[i] + edges[i + 1] - 1) / 2.0;
    }
    std::vector<AxisBlend> out(static_cast<std::size_t>(edges.back()));
    int i0 = 0;
    for (int x = 0; x < edges.back(); ++x) {
        if (x <= centers.front()) {
            out[x] = {0, 0, 0.0};
            continue;
        }
        if (x >= centers.back()) {
            out[x] = {tiles - 1, tiles - 1, 0.0};
            continue;
        }
        while (centers[i0 + 1] <= x) {
            ++i0;
        }
        out[x] = {i0, i0 + 1, (x - centers[i0]) / (centers[i0 + 1] - centers[i0])};
    }
    return out;
}

std::vector<int> bin_indices(const ChannelPlane& plane, int bins) {
    std::vector<int> idx(plane.size());
    const auto s = plane.samples();
    for (std::size_t i = 0; i < s.size(); ++i) {
        idx[i] = bin_of(s[i], plane.range(), bins);
    }
    return idx;
}

}  // namespace

double excess_above(const Histogram& h, double m) {
    double s = 0.0;
    for (double c : h.counts) {
        if (c > m) {
            s += c - m;
        }
    }
    return s;
}

ClipSearchResult bsb_clip_search(const Histogram& h, double clip_level_counts, double epsilon) {
    if (!(clip_level_counts > 0.0)) {
        throw InvalidInput("clip level must be positive");
    }
    if (!(epsilon > 0.0)) {
        throw InvalidInput("epsilon must be positive");
    }
    const double total = h.total();
    if (!(total > 0.0)) {
        throw InvalidInput("cannot clip an empty histogram");
    }
    const double bins = h.bin_count();
    const double top_count = h.max_count();
    if (clip_level_counts >= top_count) {
        return {top_count, 0.0, 0};
    }
    const double mean = total / bins;
    if (clip_level_counts < mean * (1.0 - 1e-12)) {
        throw InvalidInput("clip level below the mean bin count is infeasible");
    }

    double top = top_count;
    double bottom = 0.0;
    double m = 0.5 * (top + bottom);
    int iterations = 0;
    while (top - bottom >= epsilon) {
        m = 0.5 * (top + bottom);
        ++iterations;
        const double level = m + excess_above(h, m) / bins;
        if (level > clip_level_counts) {
            top = m;
        } else if (level < clip_level_counts) {
            bottom = m;
        } else {
            top = bottom = m;
            break;
        }
    }
    m = 0.5 * (top + bottom);
    return {m, excess_above(h, m), iterations};
}

Histogram clip_and_redistribute(const Histogram& h, double m) {
    if (!(m >= 0.0)) {
        throw InvalidInput("clip level must be non-negative");
    }
    const double share = excess_above(h, m) / h.bin_count();
    Histogram out = h;
    for (double& c : out.counts) {
        c = std::min(c, m) + share;
    }
    return out;
}

ChannelPlane ahe(const ChannelPlane& plane, const AheParams& p) {
    if (p.window_radius < 1) {
        throw InvalidInput("AHE window radius must be >= 1");
    }
    if (p.bin_count < 2) {
        throw InvalidInput("AHE bin count must be >= 2");
    }
    const int w = plane.width();
    const int h = plane.height();
    const int r = p.window_radius;
    const int bins = p.bin_count;
    const Range range = plane.range();
    const auto idx = bin_indices(plane, bins);

    std::vector<double> centers(static_cast<std::size_t>(bins));
    for (int k = 0; k < bins; ++k) {
        centers[k] = bin_center(k, range, bins);
    }

    ChannelPlane out(w, h, range);
    auto dst = out.samples();

#pragma omp parallel for schedule(dynamic, 4)
    for (int y = 0; y < h; ++y) {
        const int y0 = std::max(0, y - r);
        const int y1 = std::min(h - 1, y + r);
        std::vector<std::uint32_t> counts(static_cast<std::size_t>(bins), 0);
        auto add_column = [&](int x, int delta) {
            for (int yy = y0; yy <= y1; ++yy) {
                counts[idx[static_cast<std::size_t>(yy) * w + x]] += delta;
            }
        };
        for (int x = 0; x <= std::min(r, w - 1); ++x) {
            add_column(x, 1);
        }
        for (int x = 0; x < w; ++x) {
            const int x0 = std::max(0, x - r);
            const int x1 = std::min(w - 1, x + r);
            const double total = static_cast<double>(y1 - y0 + 1) * (x1 - x0 + 1);
            const int b = idx[static_cast<std::size_t>(y) * w + x];
            std::uint64_t below = 0;
            for (int k = 0; k <= b; ++k) {
                below += counts[k];
            }
            const double cum = static_cast<double>(below);
            const double level = std::round((bins - 1) * cum / total);
            const int t = static_cast<int>(std::clamp(level, 0.0, bins - 1.0));
            dst[static_cast<std::size_t>(y) * w + x] = centers[t];

            if (x - r >= 0) {
                add_column(x - r, -1);
            }
            if (x + r + 1 < w) {
                add_column(x + r + 1, 1);
            }
        }
    }
    return out;
}

std::vector<int> tile_edges(int extent, int tiles) {
    if (tiles < 1 || tiles > extent) {
        throw InvalidInput("tile count must be in [1, image extent]");
    }
    std::vector<int> edges(static_cast<std::size_t>(tiles) + 1);
    for (int i = 0; i <= tiles; ++i) {
        edges[i] = static_cast<int>(static_cast<long long>(i) * extent / tiles);
    }
    return edges;
}

std::vector<IntensityMap> clahe_tile_maps(const ChannelPlane& plane, const ClaheParams& p) {
    if (p.bin_count < 2) {
        throw InvalidInput("CLAHE bin count must be >= 2");
    }
    if (!(p.clip_limit >= 1.0)) {
        throw InvalidInput("CLAHE clip limit must be >= 1");
    }
    if (!(p.epsilon > 0.0)) {
        throw InvalidInput("CLAHE epsilon must be positive");
    }
    if (p.tiles_x > plane.width() || p.tiles_y > plane.height()) {
        throw InvalidInput("CLAHE tile grid is larger than the image");
    }
    const auto xe = tile_edges(plane.width(), p.tiles_x);
    const auto ye = tile_edges(plane.height(), p.tiles_y);
    const int bins = p.bin_count;
    const int w = plane.width();
    const auto idx = bin_indices(plane, bins);

    std::vector<IntensityMap> maps(static_cast<std::size_t>(p.tiles_x) * p.tiles_y);
    const int n_tiles = static_cast<int>(maps.size());
#pragma omp parallel for schedule(dynamic)
    for (int t = 0; t < n_tiles; ++t) {
        const int tx = t % p.tiles_x;
        const int ty = t / p.tiles_x;
        std::vector<double> counts(static_cast<std::size_t>(bins), 0.0);
        for (int y = ye[ty]; y < ye[ty + 1]; ++y) {
            for (int x = xe[tx]; x < xe[tx + 1]; ++x) {
                counts[idx[static_cast<std::size_t>(y) * w + x]] += 1.0;
            }
        }
        Histogram hist(std::move(counts), plane.range());
        const double mean = hist.total() / bins;
        const double budget = p.clip_limit * mean;
        if (budget < hist.max_count()) {
            const auto found = bsb_clip_search(hist, budget, p.epsilon * mean);
            hist = clip_and_redistribute(hist, found.m);
        }
        maps[t] = equalization_map(hist);
    }
    return maps;
}

ChannelPlane clahe(const ChannelPlane& plane, const ClaheParams& p) {
    const auto maps = clahe_tile_maps(plane, p);
    const auto xb = axis_blend(tile_edges(plane.width(), p.tiles_x));
    const auto yb = axis_blend(tile_edges(plane.height(), p.tiles_y));
    const int bins = p.bin_count;
    const int w = plane.width();
    const int h = plane.height();
    const Range range = plane.range();

    std::vector<double> centers(static_cast<std::size_t>(bins));
    for (int k = 0; k < bins; ++k) {
        centers[k] = bin_center(k, range, bins);
    }
    auto mapped = [&](int tx, int ty, int b) {
        return centers[maps[static_cast<std::size_t>(ty) * p.tiles_x + tx].table[b]];
    };

    ChannelPlane out(w, h, range);
    auto dst = out.samples();
    const auto src = plane.samples();
#pragma omp parallel for schedule(static)
    for (int y = 0; y < h; ++y) {
        const AxisBlend& by = yb[y];
        for (int x = 0; x < w; ++x) {
            const AxisBlend& bx = xb[x];
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            const int b = bin_of(src[i], range, bins);
            const double top = (1.0 - bx.w) * mapped(bx.lo, by.lo, b) + bx.w * mapped(bx.hi, by.lo, b);
            const double bottom =
                (1.0 - bx.w) * mapped(bx.lo, by.hi, b) + bx.w * mapped(bx.hi, by.hi, b);
            const double v = (1.0 - by.w) * top + by.w * bottom;
            dst[i] = std::clamp(v, range.lo, range.hi);
        }
    }
    return out;
}

}  // namespace colorenh
