#pragma once

#include <cstdint>
#include <vector>

#include "colorenh/image.hpp"
#include "colorenh/local_enhance.hpp"
#include "colorenh/metrics.hpp"
#include "colorenh/segment.hpp"

// Serial, deliberately naive counterparts of the production kernels. They
// share no code path with the kernels they check and are linked only into the
// tests and the benchmark.
namespace colorenh::reference {

/// S_k = sum_{j<=k} n_j / n evaluated in integer arithmetic, then rounded
/// half-up onto the L - 1 grid.
std::vector<int> equalization_table_direct(const std::vector<std::uint64_t>& counts);

/// Global equalization from integer counts, written back at bin centers.
ChannelPlane equalize_direct(const ChannelPlane& plane, int bin_count);

/// Recomputes every contextual-region histogram from scratch.
ChannelPlane ahe_naive(const ChannelPlane& plane, const AheParams& p);

/// CLAHE without interpolation: each pixel uses only its own tile's map.
ChannelPlane clahe_nearest_tile(const ChannelPlane& plane, const ClaheParams& p);

/// Clip level found by scanning M on a uniform grid of `steps` over
/// [0, max count] and returning the grid point with the smallest residual.
double clip_level_grid_scan(const std::vector<double>& counts, double budget, int steps);

/// Long-double, two-pass per-window SSIM over non-overlapping windows.
double mssim_direct(const RgbImage& a, const RgbImage& b, const SsimParams& p);

/// Minimum within-cluster SSE over every partition of the rows into at most
/// k non-empty groups. Exponential; meant for a dozen points.
double kmeans_optimum_brute_force(const FeatureMatrix& f, int k);

}  // namespace colorenh::reference
