#include <benchmark/benchmark.h>
#include <omp.h>

#include "colorenh/colorspace.hpp"
#include "colorenh/degrade.hpp"
#include "colorenh/global_enhance.hpp"
#include "colorenh/local_enhance.hpp"
#include "colorenh/metrics.hpp"
#include "colorenh/reference.hpp"
#include "colorenh/segment.hpp"
#include "colorenh/synthetic.hpp"

using namespace colorenh;

namespace {

// Arg(0) runs the kernel on one thread, Arg(1) on every available thread.
class Threads {
public:
    explicit Threads(const benchmark::State& state) : saved_(omp_get_max_threads()) {
        omp_set_num_threads(state.range(0) == 0 ? 1 : omp_get_num_procs());
    }
    ~Threads() { omp_set_num_threads(saved_); }

private:
    int saved_;
};

const RgbImage& scene() {
    static const RgbImage img = synthetic::peppers_like(512, 384);
    return img;
}

const ChannelPlane& luma() {
    static const ChannelPlane plane = luma_plane(rgb_to_hsv(scene()));
    return plane;
}

void BM_RgbToLabRoundTrip(benchmark::State& state) {
    Threads t(state);
    for (auto _ : state) {
        benchmark::DoNotOptimize(lab_to_rgb(rgb_to_lab(scene())));
    }
}
BENCHMARK(BM_RgbToLabRoundTrip)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Equalize(benchmark::State& state) {
    Threads t(state);
    for (auto _ : state) {
        benchmark::DoNotOptimize(equalize(luma()));
    }
}
BENCHMARK(BM_Equalize)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_EqualizeReference(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(reference::equalize_direct(luma(), kDefaultBins));
    }
}
BENCHMARK(BM_EqualizeReference)->Unit(benchmark::kMillisecond);

void BM_AheSliding(benchmark::State& state) {
    Threads t(state);
    for (auto _ : state) {
        benchmark::DoNotOptimize(ahe(luma(), AheParams{8, 256}));
    }
}
BENCHMARK(BM_AheSliding)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_AheNaive(benchmark::State& state) {
    static const ChannelPlane small = luma_plane(rgb_to_hsv(synthetic::peppers_like(128, 96)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(reference::ahe_naive(small, AheParams{8, 256}));
    }
}
BENCHMARK(BM_AheNaive)->Unit(benchmark::kMillisecond);

void BM_AheSlidingSmall(benchmark::State& state) {
    Threads t(state);
    static const ChannelPlane small = luma_plane(rgb_to_hsv(synthetic::peppers_like(128, 96)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(ahe(small, AheParams{8, 256}));
    }
}
BENCHMARK(BM_AheSlidingSmall)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Clahe(benchmark::State& state) {
    Threads t(state);
    for (auto _ : state) {
        benchmark::DoNotOptimize(clahe(luma(), ClaheParams{}));
    }
}
BENCHMARK(BM_Clahe)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_ClipSearch(benchmark::State& state) {
    const Histogram h = build_histogram(luma(), 256);
    const double budget = 2.0 * h.total() / 256;
    for (auto _ : state) {
        benchmark::DoNotOptimize(bsb_clip_search(h, budget, 1e-3 * h.total() / 256));
    }
}
BENCHMARK(BM_ClipSearch);

void BM_GaussianNoise(benchmark::State& state) {
    Threads t(state);
    for (auto _ : state) {
        benchmark::DoNotOptimize(add_gaussian(scene(), 0.0, 0.01, 1));
    }
}
BENCHMARK(BM_GaussianNoise)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_KMeans(benchmark::State& state) {
    Threads t(state);
    static const FeatureMatrix f = extract_features(rgb_to_lab(scene()), FeatureMode::ChromaLuma);
    for (auto _ : state) {
        benchmark::DoNotOptimize(kmeans(f, KMeansParams{4, 50, 1e-6, 0, 2}));
    }
}
BENCHMARK(BM_KMeans)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Mssim(benchmark::State& state) {
    Threads t(state);
    static const RgbImage noisy = add_gaussian(scene(), 0.0, 0.01, 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(mssim(scene(), noisy));
    }
}
BENCHMARK(BM_Mssim)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_MssimReference(benchmark::State& state) {
    static const RgbImage noisy = add_gaussian(scene(), 0.0, 0.01, 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(reference::mssim_direct(scene(), noisy, SsimParams{}));
    }
}
BENCHMARK(BM_MssimReference)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
