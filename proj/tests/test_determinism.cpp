#include <doctest.h>

#include <omp.h>

#include "colorenh/degrade.hpp"
#include "colorenh/global_enhance.hpp"
#include "colorenh/local_enhance.hpp"
#include "colorenh/metrics.hpp"
#include "colorenh/pipeline.hpp"
#include "colorenh/segment.hpp"
#include "colorenh/synthetic.hpp"
#include "support.hpp"

using namespace colorenh;

namespace {

template <typename F>
auto with_threads(int n, F&& f) {
    const int saved = omp_get_max_threads();
    omp_set_num_threads(n);
    auto result = f();
    omp_set_num_threads(saved);
    return result;
}

}  // namespace

TEST_CASE("kernels give identical results for any thread count") {
    const auto img = synthetic::peppers_like();
    const auto luma = luma_plane(rgb_to_lab(img));
    const auto noisy = add_gaussian(img, 0.0, 0.01, 3);

    for (int threads : {2, 3, 8}) {
        CAPTURE(threads);
        CHECK(with_threads(1, [&] { return rgb_to_hsv(img); }) == with_threads(threads, [&] { return rgb_to_hsv(img); }));
        CHECK(with_threads(1, [&] { return lab_to_rgb(rgb_to_lab(img)); }) ==
              with_threads(threads, [&] { return lab_to_rgb(rgb_to_lab(img)); }));
        CHECK(with_threads(1, [&] { return equalize(luma); }) == with_threads(threads, [&] { return equalize(luma); }));
        CHECK(with_threads(1, [&] { return ahe(luma, AheParams{}); }) ==
              with_threads(threads, [&] { return ahe(luma, AheParams{}); }));
        CHECK(with_threads(1, [&] { return clahe(luma, ClaheParams{}); }) ==
              with_threads(threads, [&] { return clahe(luma, ClaheParams{}); }));
        CHECK(with_threads(1, [&] { return add_salt_pepper(img, 0.2, 9); }) ==
              with_threads(threads, [&] { return add_salt_pepper(img, 0.2, 9); }));
        CHECK(with_threads(1, [&] { return add_gaussian(img, 0.0, 0.01, 9); }) ==
              with_threads(threads, [&] { return add_gaussian(img, 0.0, 0.01, 9); }));
        CHECK(with_threads(1, [&] { return mssim(img, noisy); }) == with_threads(threads, [&] { return mssim(img, noisy); }));

        const KMeansParams params{4, 100, 1e-6, 5, 3};
        const auto a = with_threads(1, [&] { return segment_image(img, ColorSpace::Hsv, params); });
        const auto b = with_threads(threads, [&] { return segment_image(img, ColorSpace::Hsv, params); });
        CHECK(a.labels == b.labels);
        CHECK(a.objective == b.objective);
        CHECK(a.centers == b.centers);
    }
}

TEST_CASE("suite report does not depend on the thread count") {
    testing::TempDir dir("threads");
    ExperimentConfig cfg;
    cfg.images = {{"peppers", "synthetic:peppers"}, {"blobs", "synthetic:two-tone"}};
    EnhanceSettings s;
    cfg.techniques = {make_technique("he", s), make_technique("bsb-clahe", s)};
    cfg.noise = parse_noise("salt-pepper:0.2", 0);
    cfg.segmentation = KMeansParams{3, 50, 1e-6, 0, 2};
    cfg.write_artifacts = false;
    cfg.output_dir = dir.path();

    const auto serial = with_threads(1, [&] { return report_csv(run_segmentation_suite(cfg), false); });
    const auto parallel = with_threads(6, [&] { return report_csv(run_segmentation_suite(cfg), false); });
    CHECK(serial == parallel);
}
