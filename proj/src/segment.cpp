#include "colorenh/segment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include "colorenh/image_io.hpp"

namespace colorenh {

namespace {

// Reductions are split into fixed-size chunks merged in order, so results do
// not depend on the thread count.
constexpr std::size_t kChunk = 4096;

std::size_t chunk_count(std::size_t rows) { return (rows + kChunk - 1) / kChunk; }

double sq_dist(const double* a, const double* b, std::size_t cols) {
    double d = 0.0;
    for (std::size_t c = 0; c < cols; ++c) {
        const double t = a[c] - b[c];
        d += t * t;
    }
    return d;
}

struct Run {
    std::vector<int> labels;
    std::vector<double> centers;  // k x cols
    double objective = std::numeric_limits<double>::infinity();
    std::vector<double> history;
    int iterations = 0;
};

std::vector<double> seed_centers(const FeatureMatrix& f, int k, std::mt19937_64& rng) {
    const std::size_t n = f.rows;
    const std::size_t cols = f.cols;
    std::vector<double> centers;
    centers.reserve(static_cast<std::size_t>(k) * cols);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    const std::size_t first = pick(rng);
    centers.insert(centers.end(), f.values.begin() + first * cols,
                   f.values.begin() + (first + 1) * cols);

    std::vector<double> d2(n, std::numeric_limits<double>::infinity());
    for (int c = 1; c < k; ++c) {
        const double* last = centers.data() + static_cast<std::size_t>(c - 1) * cols;
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            d2[i] = std::min(d2[i], sq_dist(&f.values[i * cols], last, cols));
            total += d2[i];
        }
        std::size_t chosen = 0;
        if (total > 0.0) {
            std::uniform_real_distribution<double> unit(0.0, total);
            const double target = unit(rng);
            double run = 0.0;
            chosen = n - 1;
            for (std::size_t i = 0; i < n; ++i) {
                run += d2[i];
                if (run > target && d2[i] > 0.0) {
                    chosen = i;
                    break;
                }
            }
            // Rounding at the tail can land on an already-chosen point.
            if (d2[chosen] <= 0.0) {
                chosen = static_cast<std::size_t>(
                    std::max_element(d2.begin(), d2.end()) - d2.begin());
            }
        }
        centers.insert(centers.end(), f.values.begin() + chosen * cols,
                       f.values.begin() + (chosen + 1) * cols);
    }
    return centers;
}

// Nearest center by squared distance, ties to the lowest index.
void assign(const FeatureMatrix& f, const std::vector<double>& centers, int k,
            std::vector<int>& labels, std::vector<double>& dist) {
    const std::size_t cols = f.cols;
    const auto n = static_cast<std::ptrdiff_t>(f.rows);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const double* row = &f.values[static_cast<std::size_t>(i) * cols];
        int best = 0;
        double best_d = sq_dist(row, centers.data(), cols);
        for (int c = 1; c < k; ++c) {
            const double d = sq_dist(row, &centers[static_cast<std::size_t>(c) * cols], cols);
            if (d < best_d) {
                best_d = d;
                best = c;
            }
        }
        labels[i] = best;
        dist[i] = best_d;
    }
}

// Member means; also returns per-cluster member counts.
std::vector<double> cluster_means(const FeatureMatrix& f, const std::vector<int>& labels, int k,
                                  std::vector<std::size_t>& sizes) {
    const std::size_t cols = f.cols;
    const std::size_t chunks = chunk_count(f.rows);
    const std::size_t stride = static_cast<std::size_t>(k) * cols;
    std::vector<double> partial(chunks * stride, 0.0);
    std::vector<std::size_t> partial_n(chunks * static_cast<std::size_t>(k), 0);
    const auto n_chunks = static_cast<std::ptrdiff_t>(chunks);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ch = 0; ch < n_chunks; ++ch) {
        const std::size_t lo = static_cast<std::size_t>(ch) * kChunk;
        const std::size_t hi = std::min(f.rows, lo + kChunk);
        double* sums = &partial[static_cast<std::size_t>(ch) * stride];
        std::size_t* counts = &partial_n[static_cast<std::size_t>(ch) * k];
        for (std::size_t i = lo; i < hi; ++i) {
            const auto c = static_cast<std::size_t>(labels[i]);
            ++counts[c];
            for (std::size_t j = 0; j < cols; ++j) {
                sums[c * cols + j] += f.values[i * cols + j];
            }
        }
    }
    std::vector<double> means(stride, 0.0);
    sizes.assign(static_cast<std::size_t>(k), 0);
    for (std::size_t ch = 0; ch < chunks; ++ch) {
        for (std::size_t j = 0; j < stride; ++j) {
            means[j] += partial[ch * stride + j];
        }
        for (int c = 0; c < k; ++c) {
            sizes[c] += partial_n[ch * k + c];
        }
    }
    for (int c = 0; c < k; ++c) {
        if (sizes[c] == 0) {
            continue;
        }
        for (std::size_t j = 0; j < cols; ++j) {
            means[c * cols + j] /= static_cast<double>(sizes[c]);
        }
    }
    return means;
}

double objective_of(const FeatureMatrix& f, const std::vector<int>& labels,
                    const std::vector<double>& centers) {
    const std::size_t cols = f.cols;
    const std::size_t chunks = chunk_count(f.rows);
    std::vector<double> partial(chunks, 0.0);
    const auto n_chunks = static_cast<std::ptrdiff_t>(chunks);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ch = 0; ch < n_chunks; ++ch) {
        const std::size_t lo = static_cast<std::size_t>(ch) * kChunk;
        const std::size_t hi = std::min(f.rows, lo + kChunk);
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
            s += sq_dist(&f.values[i * cols], &centers[static_cast<std::size_t>(labels[i]) * cols],
                         cols);
        }
        partial[ch] = s;
    }
    return std::accumulate(partial.begin(), partial.end(), 0.0);
}

Run lloyd(const FeatureMatrix& f, const KMeansParams& p, std::vector<double> centers) {
    const std::size_t n = f.rows;
    const int k = p.k;
    Run run;
    run.labels.assign(n, -1);
    std::vector<int> labels(n, 0);
    std::vector<double> dist(n, 0.0);
    double prev = std::numeric_limits<double>::infinity();

    for (int it = 0; it < p.max_iters; ++it) {
        assign(f, centers, k, labels, dist);
        const bool unchanged = labels == run.labels;

        std::vector<std::size_t> sizes(static_cast<std::size_t>(k), 0);
        for (int l : labels) {
            ++sizes[static_cast<std::size_t>(l)];
        }
        // An empty cluster takes over the point farthest from its own center.
        for (int c = 0; c < k; ++c) {
            if (sizes[c] != 0) {
                continue;
            }
            std::size_t far = n;
            double far_d = -1.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (sizes[static_cast<std::size_t>(labels[i])] > 1 && dist[i] > far_d) {
                    far_d = dist[i];
                    far = i;
                }
            }
            if (far == n) {
                break;
            }
            --sizes[static_cast<std::size_t>(labels[far])];
            labels[far] = c;
            dist[far] = 0.0;
            sizes[c] = 1;
        }

        centers = cluster_means(f, labels, k, sizes);
        const double obj = objective_of(f, labels, centers);
        if (obj > prev * (1.0 + 1e-12) + 1e-300) {
            throw std::logic_error("k-means objective increased between iterations");
        }
        run.history.push_back(obj);
        run.labels = labels;
        run.iterations = it + 1;
        if (unchanged || obj == 0.0 || (prev - obj) <= p.tol * prev) {
            prev = obj;
            break;
        }
        prev = obj;
    }
    run.centers = std::move(centers);
    run.objective = prev;
    return run;
}

void canonicalize(LabelMap& lm, std::size_t cols) {
    const int k = static_cast<int>(lm.centers.size());
    std::vector<int> remap(static_cast<std::size_t>(k), -1);
    int next = 0;
    for (int& l : lm.labels) {
        if (remap[l] < 0) {
            remap[l] = next++;
        }
        l = remap[l];
    }
    for (int c = 0; c < k; ++c) {
        if (remap[c] < 0) {
            remap[c] = next++;
        }
    }
    std::vector<std::vector<double>> centers(static_cast<std::size_t>(k), std::vector<double>(cols));
    for (int c = 0; c < k; ++c) {
        centers[remap[c]] = lm.centers[c];
    }
    lm.centers = std::move(centers);
}

}  // namespace

std::string_view to_string(FeatureMode mode) {
    switch (mode) {
        case FeatureMode::ChromaLuma: return "chroma-luma";
        case FeatureMode::Chroma: return "chroma";
        case FeatureMode::Raw: return "raw";
    }
    return "chroma-luma";
}

FeatureMode parse_feature_mode(std::string_view name) {
    if (name == "chroma-luma") return FeatureMode::ChromaLuma;
    if (name == "chroma") return FeatureMode::Chroma;
    if (name == "raw") return FeatureMode::Raw;
    throw InvalidInput("unknown feature mode '" + std::string(name) +
                       "' (expected chroma-luma, chroma or raw)");
}

FeatureMatrix extract_features(const HsvImage& img, FeatureMode mode) {
    FeatureMatrix f;
    f.width = img.width();
    f.height = img.height();
    f.rows = img.v.size();
    const auto h = img.h.samples();
    const auto s = img.s.samples();
    const auto v = img.v.samples();
    if (mode == FeatureMode::Raw) {
        f.cols = 3;
        f.provenance = "hsv:h/2pi,s,v";
        f.values.resize(f.rows * 3);
        for (std::size_t i = 0; i < f.rows; ++i) {
            f.values[i * 3] = h[i] / kTwoPi;
            f.values[i * 3 + 1] = s[i];
            f.values[i * 3 + 2] = v[i];
        }
        return f;
    }
    const bool with_luma = mode == FeatureMode::ChromaLuma;
    f.cols = with_luma ? 4 : 3;
    f.provenance = with_luma ? "hsv:(1+s*cos h)/2,(1+s*sin h)/2,s,v" : "hsv:(1+s*cos h)/2,(1+s*sin h)/2,s";
    f.values.resize(f.rows * f.cols);
    for (std::size_t i = 0; i < f.rows; ++i) {
        double* row = &f.values[i * f.cols];
        row[0] = 0.5 * (1.0 + s[i] * std::cos(h[i]));
        row[1] = 0.5 * (1.0 + s[i] * std::sin(h[i]));
        row[2] = s[i];
        if (with_luma) {
            row[3] = v[i];
        }
    }
    return f;
}

FeatureMatrix extract_features(const LabImage& img, FeatureMode mode) {
    FeatureMatrix f;
    f.width = img.width();
    f.height = img.height();
    f.rows = img.l.size();
    const bool with_luma = mode != FeatureMode::Chroma;
    f.cols = with_luma ? 3 : 2;
    f.provenance = with_luma ? "lab:l/100,(a+128)/256,(b+128)/256" : "lab:(a+128)/256,(b+128)/256";
    f.values.resize(f.rows * f.cols);
    const auto l = img.l.samples();
    const auto a = img.a.samples();
    const auto b = img.b.samples();
    for (std::size_t i = 0; i < f.rows; ++i) {
        double* row = &f.values[i * f.cols];
        std::size_t c = 0;
        if (with_luma) {
            row[c++] = l[i] / 100.0;
        }
        row[c++] = (a[i] + 128.0) / 256.0;
        row[c] = (b[i] + 128.0) / 256.0;
    }
    return f;
}

std::size_t distinct_rows(const FeatureMatrix& f) {
    if (f.rows == 0) {
        return 0;
    }
    std::vector<std::size_t> order(f.rows);
    std::iota(order.begin(), order.end(), std::size_t{0});
    const auto row_less = [&](std::size_t a, std::size_t b) {
        return std::lexicographical_compare(
            f.values.begin() + a * f.cols, f.values.begin() + (a + 1) * f.cols,
            f.values.begin() + b * f.cols, f.values.begin() + (b + 1) * f.cols);
    };
    std::sort(order.begin(), order.end(), row_less);
    std::size_t distinct = 1;
    for (std::size_t i = 1; i < order.size(); ++i) {
        if (row_less(order[i - 1], order[i])) {
            ++distinct;
        }
    }
    return distinct;
}

LabelMap kmeans(const FeatureMatrix& f, const KMeansParams& p) {
    if (p.k < 1 || p.max_iters < 1 || p.restarts < 1 || !(p.tol >= 0.0)) {
        throw InvalidInput("k-means needs k >= 1, max_iters >= 1, restarts >= 1, tol >= 0");
    }
    if (f.rows == 0 || f.cols == 0 || f.values.size() != f.rows * f.cols) {
        throw InvalidInput("feature matrix is empty or malformed");
    }
    if (static_cast<std::size_t>(p.k) > distinct_rows(f)) {
        throw InvalidInput("k exceeds the number of distinct feature rows");
    }

    Run best;
    for (int r = 0; r < p.restarts; ++r) {
        std::mt19937_64 rng(p.seed * 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(r));
        Run run = lloyd(f, p, seed_centers(f, p.k, rng));
        if (run.objective < best.objective) {
            best = std::move(run);
        }
    }

    LabelMap lm;
    lm.width = f.width > 0 ? f.width : static_cast<int>(f.rows);
    lm.height = f.height > 0 ? f.height : 1;
    lm.labels = std::move(best.labels);
    lm.objective = best.objective;
    lm.objective_history = std::move(best.history);
    lm.iterations = best.iterations;
    lm.centers.resize(static_cast<std::size_t>(p.k));
    for (int c = 0; c < p.k; ++c) {
        lm.centers[c].assign(best.centers.begin() + static_cast<std::ptrdiff_t>(c * f.cols),
                             best.centers.begin() + static_cast<std::ptrdiff_t>((c + 1) * f.cols));
    }
    canonicalize(lm, f.cols);
    return lm;
}

LabelMap segment_image(const RgbImage& img, ColorSpace space, const KMeansParams& p,
                       FeatureMode mode) {
    const FeatureMatrix f = space == ColorSpace::Hsv ? extract_features(rgb_to_hsv(img), mode)
                                                     : extract_features(rgb_to_lab(img), mode);
    return kmeans(f, p);
}

RgbImage render_segmentation(const RgbImage& img, const LabelMap& lm) {
    if (img.width() != lm.width || img.height() != lm.height ||
        lm.labels.size() != img.pixel_count()) {
        throw InvalidInput("label map does not match the image dimensions");
    }
    const std::size_t k = std::max<std::size_t>(
        lm.centers.size(),
        lm.labels.empty() ? 0 : static_cast<std::size_t>(*std::max_element(lm.labels.begin(), lm.labels.end())) + 1);
    std::vector<double> sums(k * 3, 0.0);
    std::vector<std::size_t> counts(k, 0);
    const auto src = img.data();
    for (std::size_t i = 0; i < lm.labels.size(); ++i) {
        const auto c = static_cast<std::size_t>(lm.labels[i]);
        ++counts[c];
        for (int j = 0; j < 3; ++j) {
            sums[c * 3 + j] += src[i * 3 + j];
        }
    }
    std::vector<std::uint8_t> palette(k * 3, 0);
    for (std::size_t c = 0; c < k; ++c) {
        if (counts[c] == 0) {
            continue;
        }
        for (int j = 0; j < 3; ++j) {
            palette[c * 3 + j] = static_cast<std::uint8_t>(
                std::clamp(std::round(sums[c * 3 + j] / counts[c]), 0.0, 255.0));
        }
    }
    RgbImage out(img.width(), img.height());
    auto dst = out.data();
    for (std::size_t i = 0; i < lm.labels.size(); ++i) {
        const auto c = static_cast<std::size_t>(lm.labels[i]);
        for (int j = 0; j < 3; ++j) {
            dst[i * 3 + j] = palette[c * 3 + j];
        }
    }
    return out;
}

void write_label_pgm(const LabelMap& lm, const std::filesystem::path& path) {
    const int k = static_cast<int>(lm.centers.size());
    if (k > 256) {
        throw InvalidInput("PGM label output supports at most 256 clusters");
    }
    std::vector<std::uint8_t> gray(lm.labels.size());
    std::transform(lm.labels.begin(), lm.labels.end(), gray.begin(),
                   [](int l) { return static_cast<std::uint8_t>(l); });
    write_pgm(gray, lm.width, lm.height, std::max(1, k - 1), path);
}

}  // namespace colorenh
