#include "colorenh/global_enhance.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

namespace colorenh {

namespace {

std::vector<double> cumulative(const std::vector<double>& counts) {
    std::vector<double> out(counts.size());
    double running = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        running += counts[i];
        out[i] = running;
    }
    return out;
}

int round_to_level(double x, int bin_count) {
    const double r = std::round(x);
    return static_cast<int>(std::clamp(r, 0.0, static_cast<double>(bin_count - 1)));
}

}  // namespace

IntensityMap equalization_map(const Histogram& h) {
    const double total = h.total();
    if (!(total > 0.0)) {
        throw InvalidInput("cannot equalize an empty histogram");
    }
    const int bins = h.bin_count();
    const auto cum = cumulative(h.counts);
    IntensityMap m;
    m.table.resize(cum.size());
    // (L-1)*cum is formed before dividing so integral histograms round exactly.
    for (std::size_t k = 0; k < cum.size(); ++k) {
        m.table[k] = round_to_level((bins - 1) * cum[k] / total, bins);
    }
    return m;
}

IntensityMap specification_map(const Histogram& source, const Histogram& target) {
    if (source.bin_count() != target.bin_count()) {
        throw InvalidInput("source and target histograms differ in bin count");
    }
    const double ns = source.total();
    const double nt = target.total();
    if (!(ns > 0.0) || !(nt > 0.0)) {
        throw InvalidInput("cannot specify with an empty histogram");
    }
    const int bins = source.bin_count();
    const auto src_cum = cumulative(source.counts);
    const auto tgt_cum = cumulative(target.counts);

    // Work in count space: level s = A/ns against target cumulative B/nt is
    // compared as B*ns >= A*nt, keeping integral inputs exact.
    IntensityMap m;
    m.table.resize(static_cast<std::size_t>(bins));
    std::size_t j = 0;
    for (std::size_t k = 0; k < src_cum.size(); ++k) {
        const double a_nt = src_cum[k] * nt;
        while (j + 1 < tgt_cum.size() && tgt_cum[j] * ns < a_nt) {
            ++j;
        }
        const double tj = target.counts[j];
        if (!(tj > 0.0)) {
            m.table[k] = round_to_level(static_cast<double>(j) * (bins - 1) / bins, bins);
            continue;
        }
        const double below = j == 0 ? 0.0 : tgt_cum[j - 1];
        const double within = a_nt - below * ns;
        const double numer = (bins - 1) * (static_cast<double>(j) * tj * ns + within);
        const double denom = tj * ns * bins;
        m.table[k] = round_to_level(numer / denom, bins);
    }
    return m;
}

ChannelPlane apply_map(const ChannelPlane& plane, const IntensityMap& m) {
    const int bins = m.bin_count();
    if (bins < 2) {
        throw InvalidInput("intensity map needs at least two bins");
    }
    const Range range = plane.range();
    std::vector<double> centers(static_cast<std::size_t>(bins));
    for (int k = 0; k < bins; ++k) {
        const int t = m.table[static_cast<std::size_t>(k)];
        if (t < 0 || t >= bins) {
            throw InvalidInput("intensity map entry out of range");
        }
        centers[static_cast<std::size_t>(k)] = bin_center(t, range, bins);
    }
    ChannelPlane out(plane.width(), plane.height(), range);
    const auto in = plane.samples();
    auto dst = out.samples();
    const auto n = static_cast<std::ptrdiff_t>(in.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        dst[i] = centers[static_cast<std::size_t>(bin_of(in[i], range, bins))];
    }
    return out;
}

ChannelPlane equalize(const ChannelPlane& plane, int bin_count) {
    return apply_map(plane, equalization_map(build_histogram(plane, bin_count)));
}

ChannelPlane specify(const ChannelPlane& plane, const Histogram& target, int bin_count) {
    if (target.bin_count() != bin_count) {
        throw InvalidInput("target histogram bin count does not match");
    }
    return apply_map(plane, specification_map(build_histogram(plane, bin_count), target));
}

Histogram gaussian_target(int bin_count, double mean_bin, double sigma_bins) {
    if (bin_count < 2 || !(sigma_bins > 0.0)) {
        throw InvalidInput("gaussian target needs >= 2 bins and sigma > 0");
    }
    std::vector<double> counts(static_cast<std::size_t>(bin_count));
    double sum = 0.0;
    for (int k = 0; k < bin_count; ++k) {
        const double z = (k - mean_bin) / sigma_bins;
        counts[static_cast<std::size_t>(k)] = std::exp(-0.5 * z * z);
        sum += counts[static_cast<std::size_t>(k)];
    }
    for (double& c : counts) {
        c /= sum;
    }
    return Histogram(std::move(counts));
}

Histogram load_target_histogram(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidInput("cannot open target histogram '" + path.string() + "'");
    }
    std::vector<double> values;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream fields(line);
        std::string tok;
        std::vector<double> row;
        bool numeric = true;
        while (fields >> tok) {
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
            if (ec != std::errc() || ptr != tok.data() + tok.size()) {
                numeric = false;
                break;
            }
            row.push_back(v);
        }
        if (!numeric) {
            if (first) {
                first = false;
                continue;
            }
            throw InvalidInput("non-numeric value in target histogram '" + path.string() + "'");
        }
        first = false;
        values.insert(values.end(), row.begin(), row.end());
    }
    if (values.size() < 2) {
        throw InvalidInput("target histogram needs at least two bins");
    }
    Histogram h(std::move(values));
    if (!(h.total() > 0.0)) {
        throw InvalidInput("target histogram has zero mass");
    }
    // Mass normalization is implicit in specification_map; raw counts are kept
    // so integral targets stay exact.
    return h;
}

}  // namespace colorenh
