#include "colorenh/image.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace colorenh {

namespace {

void check_dims(int width, int height) {
    if (width < 1 || height < 1) {
        throw InvalidInput("image dimensions must be at least 1x1");
    }
}

}  // namespace

RgbImage::RgbImage(int width, int height)
    : width_(width), height_(height) {
    check_dims(width, height);
    data_.assign(static_cast<std::size_t>(width) * height * 3, 0);
}

RgbImage::RgbImage(int width, int height, std::vector<std::uint8_t> data)
    : width_(width), height_(height), data_(std::move(data)) {
    check_dims(width, height);
    if (data_.size() != static_cast<std::size_t>(width) * height * 3) {
        throw InvalidInput("RGB data length must equal width*height*3");
    }
}

std::array<std::uint8_t, 3> RgbImage::pixel(int x, int y) const {
    const std::size_t i = (static_cast<std::size_t>(y) * width_ + x) * 3;
    return {data_[i], data_[i + 1], data_[i + 2]};
}

void RgbImage::set_pixel(int x, int y, std::array<std::uint8_t, 3> rgb) {
    const std::size_t i = (static_cast<std::size_t>(y) * width_ + x) * 3;
    data_[i] = rgb[0];
    data_[i + 1] = rgb[1];
    data_[i + 2] = rgb[2];
}

ChannelPlane::ChannelPlane(int width, int height, Range range)
    : width_(width), height_(height), range_(range) {
    check_dims(width, height);
    if (!(range.lo < range.hi)) {
        throw InvalidInput("plane range requires lo < hi");
    }
    data_.assign(static_cast<std::size_t>(width) * height, range.lo);
}

ChannelPlane::ChannelPlane(int width, int height, Range range, std::vector<double> data)
    : width_(width), height_(height), range_(range), data_(std::move(data)) {
    check_dims(width, height);
    if (!(range.lo < range.hi)) {
        throw InvalidInput("plane range requires lo < hi");
    }
    if (data_.size() != static_cast<std::size_t>(width) * height) {
        throw InvalidInput("plane data length must equal width*height");
    }
    for (double v : data_) {
        if (!range.contains(v)) {
            throw InvalidInput("plane sample outside its declared range");
        }
    }
}

Histogram::Histogram(std::vector<double> c, Range r) : counts(std::move(c)), source_range(r) {
    if (counts.empty()) {
        throw InvalidInput("histogram needs at least one bin");
    }
    for (double v : counts) {
        if (!(v >= 0.0)) {
            throw InvalidInput("histogram counts must be non-negative");
        }
    }
}

double Histogram::total() const {
    return std::accumulate(counts.begin(), counts.end(), 0.0);
}

double Histogram::max_count() const {
    return counts.empty() ? 0.0 : *std::max_element(counts.begin(), counts.end());
}

int bin_of(double v, Range range, int bin_count) {
    const double t = (v - range.lo) / range.width() * bin_count;
    if (!(t > 0.0)) {
        return 0;
    }
    const auto k = static_cast<long long>(std::floor(t));
    return static_cast<int>(std::min<long long>(k, bin_count - 1));
}

double bin_center(int k, Range range, int bin_count) {
    return range.lo + (k + 0.5) / bin_count * range.width();
}

Histogram build_histogram(const ChannelPlane& plane, int bin_count) {
    if (plane.empty()) {
        throw InvalidInput("cannot build a histogram of an empty plane");
    }
    if (bin_count < 2) {
        throw InvalidInput("bin_count must be at least 2");
    }
    std::vector<double> counts(static_cast<std::size_t>(bin_count), 0.0);
    for (double v : plane.samples()) {
        counts[static_cast<std::size_t>(bin_of(v, plane.range(), bin_count))] += 1.0;
    }
    return Histogram(std::move(counts), plane.range());
}

std::vector<double> to_pdf(const Histogram& h) {
    const double total = h.total();
    if (!(total > 0.0)) {
        throw InvalidInput("histogram has zero total count");
    }
    std::vector<double> pdf(h.counts.size());
    std::transform(h.counts.begin(), h.counts.end(), pdf.begin(),
                   [total](double c) { return c / total; });
    return pdf;
}

Cdf to_cdf(const Histogram& h) {
    const double total = h.total();
    if (!(total > 0.0)) {
        throw InvalidInput("histogram has zero total count");
    }
    // Accumulate counts, not probabilities, so integral histograms stay exact.
    Cdf cdf;
    cdf.values.resize(h.counts.size());
    double running = 0.0;
    for (std::size_t i = 0; i < h.counts.size(); ++i) {
        running += h.counts[i];
        cdf.values[i] = std::min(1.0, running / total);
    }
    cdf.values.back() = 1.0;
    return cdf;
}

std::array<ChannelPlane, 3> split_channels(const RgbImage& img) {
    std::array<std::vector<double>, 3> planes;
    for (auto& p : planes) {
        p.resize(img.pixel_count());
    }
    const auto data = img.data();
    for (std::size_t i = 0; i < img.pixel_count(); ++i) {
        for (int c = 0; c < 3; ++c) {
            planes[c][i] = data[i * 3 + c] / 255.0;
        }
    }
    const Range unit{0.0, 1.0};
    return {ChannelPlane(img.width(), img.height(), unit, std::move(planes[0])),
            ChannelPlane(img.width(), img.height(), unit, std::move(planes[1])),
            ChannelPlane(img.width(), img.height(), unit, std::move(planes[2]))};
}

std::uint8_t quantize_unit(double v) {
    const double s = std::round(v * 255.0);
    return static_cast<std::uint8_t>(std::clamp(s, 0.0, 255.0));
}

RgbImage merge_channels(const ChannelPlane& r, const ChannelPlane& g, const ChannelPlane& b) {
    if (r.width() != g.width() || r.width() != b.width() || r.height() != g.height() ||
        r.height() != b.height()) {
        throw InvalidInput("channel planes differ in dimensions");
    }
    RgbImage out(r.width(), r.height());
    auto data = out.data();
    const auto rs = r.samples();
    const auto gs = g.samples();
    const auto bs = b.samples();
    for (std::size_t i = 0; i < out.pixel_count(); ++i) {
        data[i * 3] = quantize_unit(rs[i]);
        data[i * 3 + 1] = quantize_unit(gs[i]);
        data[i * 3 + 2] = quantize_unit(bs[i]);
    }
    return out;
}

}  // namespace colorenh
