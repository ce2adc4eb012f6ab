#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "voxwheat/point_cloud.hpp"
#include "voxwheat/soa_batch.hpp"
#include "voxwheat/voxel_grid.hpp"

namespace voxwheat {

/// Ceiling-interpolation mapping state for one axis.
///
/// slope/intercept are the published form of the map (slope = cells/range,
/// intercept = -slope*min). Index evaluation uses the algebraically equal
/// cells * ((v - origin) / range): IEEE division of range by itself gives
/// exactly 1 and rounding is monotone, so the axis minimum always lands on
/// index 0, the maximum on index `cells`, and interior points in between —
/// with no epsilon nudging. Evaluating slope*v + intercept directly does not
/// carry that guarantee.
struct AxisInterp {
    double slope = 0.0;      // 0 for degenerate (zero-range) axes
    double intercept = 0.0;  // 0 for degenerate axes
    double origin = 0.0;     // axis minimum
    double range = 0.0;      // axis maximum - minimum
    std::int64_t cells = 0;  // ceil(R * range); highest reachable index

    std::int64_t index_of(double v) const {
        if (cells == 0) return 0;
        double t = (v - origin) / range;  // exactly 0 at min, exactly 1 at max
        return std::int64_t(std::ceil(double(cells) * t));
    }
};

/// Per-axis slopes and intercepts plus the resolution factor R
/// (voxels per millimetre).
struct InterpParams {
    std::array<AxisInterp, 3> axis{};  // x, y, z
    double resolution = 1.0;
};

struct GridDims {
    std::int64_t width = 0;
    std::int64_t height = 0;
    std::int64_t depth = 0;

    friend bool operator==(const GridDims&, const GridDims&) = default;
};

/// Slopes and intercepts from per-axis extents: a = ceil(R*range)/range and
/// b = -a*min for range > 0, a = b = 0 for degenerate axes.
/// Throws InvalidResolutionError unless R is finite and positive.
InterpParams compute_interp_params(const Extents& extents, double resolution);

/// Output image dimensions: ceil(R*range) + 1 per axis (1 for degenerate
/// axes). The +1 covers the full index span [0, ceil(R*range)] produced by
/// the ceiling map, so no point is dropped or clamped.
GridDims compute_dims(const Extents& extents, double resolution);

/// Scatter one cloud into a dense minimum-bounding-box grid. When several
/// points map to the same voxel the highest point index wins, which makes
/// the result identical to a sequential last-write-wins loop for every
/// thread count. Unmapped voxels stay zero.
VoxelGrid voxelize_cloud(const PointCloud& cloud, const InterpParams& params, ChannelMode mode,
                         unsigned threads = 1);

/// Full pipeline: build_soa_batch -> minmax_reduce -> per-cloud params/dims
/// -> voxelize_cloud. Output order matches input order and the bytes are
/// independent of the thread count.
std::vector<VoxelGrid> convert_batch(std::span<const PointCloud> clouds, double resolution,
                                     ChannelMode mode, unsigned threads = 1);

}  // namespace voxwheat
