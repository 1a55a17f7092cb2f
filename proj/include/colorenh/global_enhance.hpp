#pragma once

#include <filesystem>
#include <vector>

#include "colorenh/image.hpp"

namespace colorenh {

/// Bin-to-bin lookup table. Entries lie in [0, bin_count) and never decrease.
struct IntensityMap {
    std::vector<int> table;

    int bin_count() const { return static_cast<int>(table.size()); }
    friend bool operator==(const IntensityMap&, const IntensityMap&) = default;
};

/// table[k] = round((L - 1) * cdf[k]), L = bin count.
IntensityMap equalization_map(const Histogram& h);

/// Composes the source transform with the inverse of the target's cumulative
/// distribution. The target CDF is piecewise linear over the normalized level
/// axis (each bin spreads its mass evenly over its own interval), the inverse
/// picks the smallest qualifying level, and the result is rounded onto the
/// L - 1 output grid. A uniform target therefore reproduces
/// equalization_map(source) exactly.
IntensityMap specification_map(const Histogram& source, const Histogram& target);

/// Bins each sample, maps it through the table and writes back the center of
/// the output bin. The output keeps the input's range.
ChannelPlane apply_map(const ChannelPlane& plane, const IntensityMap& m);

ChannelPlane equalize(const ChannelPlane& plane, int bin_count = kDefaultBins);
ChannelPlane specify(const ChannelPlane& plane, const Histogram& target,
                     int bin_count = kDefaultBins);

/// Discretized normal bell over `bin_count` bins, normalized to unit mass.
Histogram gaussian_target(int bin_count = kDefaultBins, double mean_bin = 127.5,
                          double sigma_bins = 48.0);

/// Reads `bin_count` non-negative values (comma and/or newline separated; a
/// non-numeric first line is treated as a header). The result is normalized
/// to unit mass.
Histogram load_target_histogram(const std::filesystem::path& path);

}  // namespace colorenh
