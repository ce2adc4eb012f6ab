#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "voxwheat/point_cloud.hpp"

namespace voxwheat {

/// Coalesced structure-of-arrays batch: all x values of all clouds first,
/// then all y, then all z; colour channels grouped channel-major and
/// cloud-contiguous within each channel (all R of cloud 0, then all R of
/// cloud 1, ...). Consecutive workers touch consecutive memory.
struct SoABatch {
    std::vector<double> xs, ys, zs;
    std::vector<std::uint8_t> r, g, b, nir;

    struct Range {
        std::size_t start = 0;
        std::size_t count = 0;
    };
    std::vector<Range> offsets;  // sorted, disjoint, covering [0, total) exactly

    std::size_t cloud_count() const { return offsets.size(); }
    std::size_t total_points() const { return xs.size(); }
};

struct AxisExtent {
    double lo = 0.0;
    double hi = 0.0;
};

/// Per-cloud coordinate extrema, one (min, max) pair per axis.
struct Extents {
    std::array<AxisExtent, 3> axis{};  // x, y, z

    const AxisExtent& x() const { return axis[0]; }
    const AxisExtent& y() const { return axis[1]; }
    const AxisExtent& z() const { return axis[2]; }
};

/// Rearrange clouds into the coalesced layout. Copies run on disjoint
/// destination ranges, so any thread count yields the same bytes.
/// Throws InvalidBatchError on an empty batch or an empty member cloud.
SoABatch build_soa_batch(std::span<const PointCloud> clouds, unsigned threads = 1);

/// Inverse of build_soa_batch; source ids are not stored in the batch and
/// come back empty.
std::vector<PointCloud> deinterleave_batch(const SoABatch& batch);

/// Exact per-cloud min/max over each cloud's own offset range. min and max
/// are order-insensitive, so results are bit-identical for any thread count.
std::vector<Extents> minmax_reduce(const SoABatch& batch, unsigned threads = 1);

}  // namespace voxwheat
