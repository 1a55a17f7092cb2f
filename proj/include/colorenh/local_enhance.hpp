#pragma once

#include <vector>

#include "colorenh/global_enhance.hpp"
#include "colorenh/image.hpp"

namespace colorenh {

/// Per-pixel adaptive equalization over a (2r+1)x(2r+1) contextual region.
struct AheParams {
    int window_radius = 8;
    int bin_count = kDefaultBins;
};

struct ClaheParams {
    int tiles_x = 8;
    int tiles_y = 8;
    /// Per-bin budget as a multiple of the mean tile bin count. Must be >= 1.
    double clip_limit = 2.0;
    int bin_count = kDefaultBins;
    /// Binary-search tolerance in units of the mean tile bin count.
    double epsilon = 1e-3;
};

struct ClipSearchResult {
    double m = 0.0;             ///< clipping level
    double excess_total = 0.0;  ///< mass above m, to be redistributed
    int iterations = 0;
};

/// Total mass above `m` summed over all bins.
double excess_above(const Histogram& h, double m);

/// Binary search for the clipping level M such that clipping at M and spreading
/// the excess evenly over all bins brings every clipped bin to the budget:
/// M + excess(M) / bin_count = clip_level_counts, within `epsilon`.
///
/// A budget at or above the tallest bin needs no clipping and returns the max
/// count with zero excess. A budget below the mean bin count cannot be met by
/// any M and throws InvalidInput.
ClipSearchResult bsb_clip_search(const Histogram& h, double clip_level_counts, double epsilon);

/// counts'[i] = min(counts[i], m) + excess(m) / bin_count. Total mass is conserved.
Histogram clip_and_redistribute(const Histogram& h, double m);

/// Sliding-window AHE. Windows shrink at image borders; each pixel is mapped
/// through the equalization of its own window only.
ChannelPlane ahe(const ChannelPlane& plane, const AheParams& p);

/// Tile edges along one axis: `tiles + 1` ascending offsets, tile sizes
/// differing by at most one pixel.
std::vector<int> tile_edges(int extent, int tiles);

/// Clipped equalization maps, row-major over the tile grid.
std::vector<IntensityMap> clahe_tile_maps(const ChannelPlane& plane, const ClaheParams& p);

/// Tile-wise clipped equalization with bilinear blending between the maps of
/// the four nearest tile centers.
ChannelPlane clahe(const ChannelPlane& plane, const ClaheParams& p);

}  // namespace colorenh
