#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "colorenh/global_enhance.hpp"
#include "colorenh/local_enhance.hpp"
#include "colorenh/reference.hpp"
#include "support.hpp"

using namespace colorenh;

namespace {

Histogram random_histogram(std::mt19937_64& rng) {
    const int bins = 2 + static_cast<int>(rng() % 62);
    std::vector<double> counts(static_cast<std::size_t>(bins));
    std::exponential_distribution<double> skew(0.2);
    for (auto& c : counts) {
        c = rng() % 4 == 0 ? 0.0 : std::floor(skew(rng));
    }
    counts[rng() % counts.size()] += 1.0 + static_cast<double>(rng() % 50);
    return Histogram(std::move(counts));
}

double residual(const Histogram& h, double m, double budget) {
    return std::abs(m + excess_above(h, m) / h.bin_count() - budget);
}

}  // namespace

TEST_CASE("clip search on the four-bin example") {
    const Histogram h({10, 2, 0, 4});
    const double eps = 1e-9;
    const auto r = bsb_clip_search(h, 6.0, eps);
    CHECK(std::abs(r.m - 14.0 / 3.0) <= eps);
    CHECK(r.excess_total == doctest::Approx(16.0 / 3.0).epsilon(1e-9));
    CHECK(residual(h, r.m, 6.0) <= eps);

    const double scanned = reference::clip_level_grid_scan(h.counts, 6.0, 300000);
    CHECK(std::abs(scanned - 14.0 / 3.0) <= 10.0 / 300000);

    const auto no_clip = bsb_clip_search(h, 10.0, eps);
    CHECK(no_clip.m == 10.0);
    CHECK(no_clip.excess_total == 0.0);
    CHECK(no_clip.iterations == 0);
}

TEST_CASE("clip search with a flat histogram never clips") {
    const Histogram flat(std::vector<double>(16, 5.0));
    for (double budget : {5.0, 7.5, 50.0}) {
        const auto r = bsb_clip_search(flat, budget, 1e-6);
        CHECK(excess_above(flat, r.m) == 0.0);
        CHECK(residual(flat, r.m, flat.total() / 16) <= 1e-6);
    }
}

TEST_CASE("clip search rejects bad arguments") {
    const Histogram h({10, 2, 0, 4});
    CHECK_THROWS_AS(bsb_clip_search(h, 3.0, 1e-3), InvalidInput);
    CHECK_THROWS_AS(bsb_clip_search(h, 0.0, 1e-3), InvalidInput);
    CHECK_THROWS_AS(bsb_clip_search(h, 6.0, 0.0), InvalidInput);
    CHECK_THROWS_AS(clip_and_redistribute(h, -1.0), InvalidInput);
}

TEST_CASE("clip search residual, iteration bound and root agreement") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 2000; ++trial) {
        const auto h = random_histogram(rng);
        const double mean = h.total() / h.bin_count();
        const double top = h.max_count();
        const double budget = std::uniform_real_distribution<double>(mean, top)(rng);
        const double eps = trial % 2 ? 1e-3 : 1e-7;
        const auto r = bsb_clip_search(h, budget, eps);
        REQUIRE(residual(h, r.m, budget) <= eps);
        REQUIRE(r.iterations <= static_cast<int>(std::ceil(std::log2(top / eps))) + 1);
        REQUIRE(r.excess_total == excess_above(h, r.m));

        // Where the residual is strictly increasing the root is unique.
        const int above = static_cast<int>(
            std::count_if(h.counts.begin(), h.counts.end(), [&](double c) { return c > r.m + eps; }));
        if (above > 0 && above < h.bin_count()) {
            const double scanned = reference::clip_level_grid_scan(h.counts, budget, 20000);
            const double slope = 1.0 - static_cast<double>(above) / h.bin_count();
            REQUIRE(std::abs(scanned - r.m) <= eps / slope + top / 20000 * 2);
        }
    }
}

TEST_CASE("redistribution examples") {
    const auto out = clip_and_redistribute(Histogram({10, 2, 0, 4}), 14.0 / 3.0);
    const std::vector<double> expect{6.0, 10.0 / 3.0, 4.0 / 3.0, 16.0 / 3.0};
    for (std::size_t i = 0; i < expect.size(); ++i) {
        CHECK(out.counts[i] == doctest::Approx(expect[i]).epsilon(1e-12));
    }
    CHECK(out.total() == doctest::Approx(16.0).epsilon(1e-12));

    CHECK(clip_and_redistribute(Histogram({8, 0}), 4.0).counts == std::vector<double>{6, 2});
    CHECK(clip_and_redistribute(Histogram({3, 1, 2}), 3.0).counts == std::vector<double>{3, 1, 2});
    CHECK(clip_and_redistribute(Histogram({3, 1, 2}), 9.0).counts == std::vector<double>{3, 1, 2});
}

TEST_CASE("redistribution conserves mass") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 5000; ++trial) {
        const auto h = random_histogram(rng);
        const double m = std::uniform_real_distribution<double>(0.0, h.max_count() * 1.2)(rng);
        const auto out = clip_and_redistribute(h, m);
        REQUIRE(std::abs(out.total() - h.total()) <= 1e-9 * h.total());
    }
}

TEST_CASE("ahe on hand-built planes") {
    SUBCASE("constant plane") {
        ChannelPlane p(9, 7, Range{0.0, 1.0});
        std::fill(p.samples().begin(), p.samples().end(), 0.6);
        const auto out = ahe(p, AheParams{2, 64});
        for (double v : out.samples()) {
            REQUIRE(v == out.samples()[0]);
        }
    }
    SUBCASE("bright center on a dark field") {
        ChannelPlane p(3, 3, Range{0.0, 1.0});
        std::fill(p.samples().begin(), p.samples().end(), 0.1);
        p.at(1, 1) = 0.9;
        const auto out = ahe(p, AheParams{1, 256});
        CHECK(out.at(1, 1) == bin_center(255, p.range(), 256));
    }
    SUBCASE("separated regions enhance independently") {
        // Left half textured in [0, 0.5), right half in [0.5, 1].
        const int w = 40, h = 20, r = 3;
        auto left = testing::random_plane(w, h, Range{0.0, 0.5}, 4);
        auto right = testing::random_plane(w, h, Range{0.5, 1.0}, 5);
        ChannelPlane p(w, h, Range{0.0, 1.0});
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                p.at(x, y) = x < w / 2 ? left.at(x, y) : right.at(x, y);
            }
        }
        const AheParams params{r, 32};
        const auto out = ahe(p, params);
        for (int y = r; y < h - r; ++y) {
            for (int x : {r + 1, w - r - 2}) {
                std::vector<double> window;
                for (int yy = y - r; yy <= y + r; ++yy) {
                    for (int xx = x - r; xx <= x + r; ++xx) window.push_back(p.at(xx, yy));
                }
                ChannelPlane local(2 * r + 1, 2 * r + 1, p.range(), window);
                const auto eq = equalize(local, params.bin_count);
                REQUIRE(out.at(x, y) == eq.at(r, r));
            }
        }
    }
}

TEST_CASE("ahe matches the naive implementation") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 60; ++trial) {
        const int w = 1 + static_cast<int>(rng() % 32);
        const int h = 1 + static_cast<int>(rng() % 32);
        const AheParams params{1 + static_cast<int>(rng() % 6), 2 + static_cast<int>(rng() % 40)};
        const auto plane = trial % 2 ? testing::random_plane(w, h, Range{0.0, 1.0}, rng())
                                     : testing::clustered_plane(w, h, params.bin_count, rng());
        REQUIRE(ahe(plane, params) == reference::ahe_naive(plane, params));
    }
}

TEST_CASE("ahe locality") {
    std::mt19937_64 rng(6);
    const AheParams params{2, 16};
    auto plane = testing::random_plane(20, 20, Range{0.0, 1.0}, 1);
    const auto before = ahe(plane, params);
    plane.at(15, 15) = 1.0 - plane.at(15, 15);
    const auto after = ahe(plane, params);
    for (int y = 0; y < 20; ++y) {
        for (int x = 0; x < 20; ++x) {
            if (std::abs(x - 15) > 2 || std::abs(y - 15) > 2) {
                REQUIRE(after.at(x, y) == before.at(x, y));
            }
        }
    }
}

TEST_CASE("tile edges partition the extent") {
    CHECK(tile_edges(10, 3) == std::vector<int>{0, 3, 6, 10});
    CHECK(tile_edges(8, 8) == std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7, 8});
    CHECK_THROWS_AS(tile_edges(4, 5), InvalidInput);
    CHECK_THROWS_AS(tile_edges(4, 0), InvalidInput);
}

TEST_CASE("clahe with one tile and no clipping is global equalization") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 20; ++trial) {
        const auto plane = testing::random_plane(8 + rng() % 40, 8 + rng() % 40, Range{0.0, 1.0}, rng());
        const ClaheParams params{1, 1, 1e9, 256, 1e-3};
        const auto a = clahe(plane, params);
        const auto b = equalize(plane, 256);
        for (std::size_t i = 0; i < a.size(); ++i) {
            REQUIRE(std::abs(a.samples()[i] - b.samples()[i]) <= 1.0 / 256);
        }
    }
}

TEST_CASE("clahe on canonical planes") {
    SUBCASE("constant plane") {
        ChannelPlane p(32, 32, Range{0.0, 100.0});
        std::fill(p.samples().begin(), p.samples().end(), 40.0);
        for (double clip : {1.0, 2.0, 4.0}) {
            const auto out = clahe(p, ClaheParams{4, 4, clip, 256, 1e-3});
            for (double v : out.samples()) {
                REQUIRE(v == doctest::Approx(out.samples()[0]).epsilon(1e-12));
            }
        }
    }
    SUBCASE("clip limit one flattens every tile") {
        std::vector<double> data;
        for (int i = 0; i < 64 * 64; ++i) data.push_back(bin_center((i * 37) % 64, Range{0.0, 1.0}, 64));
        std::mt19937_64 rng(3);
        std::shuffle(data.begin(), data.end(), rng);
        ChannelPlane p(64, 64, Range{0.0, 1.0}, data);
        const ClaheParams params{4, 4, 1.0, 64, 1e-6};
        for (const auto& m : clahe_tile_maps(p, params)) {
            for (int k = 0; k < 64; ++k) {
                REQUIRE((m.table[k] == k || m.table[k] == k + 1));
            }
        }
        const auto out = clahe(p, params);
        for (std::size_t i = 0; i < p.size(); ++i) {
            REQUIRE(std::abs(out.samples()[i] - p.samples()[i]) <= 1.0 / 64 + 1e-12);
        }
    }
}

TEST_CASE("clahe tile maps are monotone and output stays in range") {
    std::mt19937_64 rng(44);
    for (int trial = 0; trial < 30; ++trial) {
        const auto plane = testing::clustered_plane(16 + rng() % 48, 16 + rng() % 48, 128, rng());
        const ClaheParams params{1 + static_cast<int>(rng() % 8), 1 + static_cast<int>(rng() % 8),
                                 1.0 + (rng() % 40) / 10.0, 128, 1e-3};
        for (const auto& m : clahe_tile_maps(plane, params)) {
            REQUIRE(std::is_sorted(m.table.begin(), m.table.end()));
        }
        for (double v : clahe(plane, params).samples()) {
            REQUIRE(plane.range().contains(v));
        }
    }
}

TEST_CASE("bilinear blending removes tile seams") {
    // Four tiles along x with different content; row 0 holds one constant value.
    const int w = 64, h = 16, tiles = 4;
    ChannelPlane p(w, h, Range{0.0, 1.0});
    std::mt19937_64 rng(10);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double base = 0.15 * (x / (w / tiles));
            p.at(x, y) = y == 0 ? 0.5 : std::clamp(base + std::uniform_real_distribution<double>(0.0, 0.5)(rng), 0.0, 1.0);
        }
    }
    const ClaheParams params{tiles, 1, 3.0, 256, 1e-3};
    const auto maps = clahe_tile_maps(p, params);
    const int b = bin_of(0.5, p.range(), 256);
    int lo = 255, hi = 0;
    for (const auto& m : maps) {
        lo = std::min(lo, m.table[b]);
        hi = std::max(hi, m.table[b]);
    }
    REQUIRE(hi > lo);

    const double spacing = static_cast<double>(w) / tiles;
    const double bound = (hi - lo) / 256.0 / spacing + 1e-12;
    const auto blended = clahe(p, params);
    const auto nearest = reference::clahe_nearest_tile(p, params);
    double worst_blend = 0.0, worst_nearest = 0.0;
    for (int x = 0; x + 1 < w; ++x) {
        worst_blend = std::max(worst_blend, std::abs(blended.at(x + 1, 0) - blended.at(x, 0)));
        worst_nearest = std::max(worst_nearest, std::abs(nearest.at(x + 1, 0) - nearest.at(x, 0)));
    }
    CHECK(worst_blend <= bound);
    CHECK(worst_nearest > bound);
}

TEST_CASE("parameter validation") {
    const auto p = testing::random_plane(8, 8, Range{0, 1}, 0);
    CHECK_THROWS_AS(clahe(p, ClaheParams{9, 1, 2.0, 256, 1e-3}), InvalidInput);
    CHECK_THROWS_AS(clahe(p, ClaheParams{2, 2, 0.5, 256, 1e-3}), InvalidInput);
    CHECK_THROWS_AS(clahe(p, ClaheParams{2, 2, 2.0, 256, 0.0}), InvalidInput);
    CHECK_THROWS_AS(ahe(p, AheParams{0, 256}), InvalidInput);
    CHECK_THROWS_AS(ahe(p, AheParams{2, 1}), InvalidInput);
}
