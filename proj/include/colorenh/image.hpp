#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace colorenh {

/// Raised for any violated precondition on public operations.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Closed value interval [lo, hi] with lo < hi.
struct Range {
    double lo = 0.0;
    double hi = 1.0;

    double width() const { return hi - lo; }
    bool contains(double v) const { return v >= lo && v <= hi; }
    friend bool operator==(const Range&, const Range&) = default;
};

inline constexpr int kDefaultBins = 256;

/// Interleaved 8-bit RGB raster, row-major.
class RgbImage {
public:
    RgbImage() = default;
    RgbImage(int width, int height);
    RgbImage(int width, int height, std::vector<std::uint8_t> data);

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t pixel_count() const { return static_cast<std::size_t>(width_) * height_; }
    bool empty() const { return data_.empty(); }

    std::span<const std::uint8_t> data() const { return data_; }
    std::span<std::uint8_t> data() { return data_; }

    std::array<std::uint8_t, 3> pixel(int x, int y) const;
    void set_pixel(int x, int y, std::array<std::uint8_t, 3> rgb);

    friend bool operator==(const RgbImage&, const RgbImage&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> data_;
};

/// Single-channel real-valued raster whose samples live in a declared range.
class ChannelPlane {
public:
    ChannelPlane() = default;
    /// Filled with `range.lo`.
    ChannelPlane(int width, int height, Range range);
    /// Throws InvalidInput if any sample falls outside `range`.
    ChannelPlane(int width, int height, Range range, std::vector<double> data);

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }
    Range range() const { return range_; }

    std::span<const double> samples() const { return data_; }
    std::span<double> samples() { return data_; }

    double at(int x, int y) const { return data_[static_cast<std::size_t>(y) * width_ + x]; }
    double& at(int x, int y) { return data_[static_cast<std::size_t>(y) * width_ + x]; }

    friend bool operator==(const ChannelPlane&, const ChannelPlane&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    Range range_{};
    std::vector<double> data_;
};

/// Binned counts over a channel range. Counts are real so clipped histograms
/// need no special casing.
struct Histogram {
    std::vector<double> counts;
    Range source_range{};

    Histogram() = default;
    Histogram(std::vector<double> c, Range r = {});

    int bin_count() const { return static_cast<int>(counts.size()); }
    double total() const;
    double max_count() const;
};

/// Normalized cumulative distribution of a histogram.
struct Cdf {
    std::vector<double> values;
    int bin_count() const { return static_cast<int>(values.size()); }
};

/// Bin index of `v` under half-open binning with the top edge folded into the
/// last bin. Values outside the range are clamped.
int bin_of(double v, Range range, int bin_count);

/// Center of bin `k`, the representative value used when writing mapped samples.
double bin_center(int k, Range range, int bin_count);

Histogram build_histogram(const ChannelPlane& plane, int bin_count = kDefaultBins);
std::vector<double> to_pdf(const Histogram& h);
Cdf to_cdf(const Histogram& h);

std::array<ChannelPlane, 3> split_channels(const RgbImage& img);
RgbImage merge_channels(const ChannelPlane& r, const ChannelPlane& g, const ChannelPlane& b);

/// round(v * 255) clamped to [0, 255].
std::uint8_t quantize_unit(double v);

}  // namespace colorenh
