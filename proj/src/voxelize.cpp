#include "voxwheat/voxelize.hpp"

#include <atomic>
#include <cassert>
#include <cmath>
#include <cstring>
#include <limits>

#include "voxwheat/errors.hpp"
#include "voxwheat/parallel.hpp"

namespace voxwheat {

namespace {

AxisInterp make_axis(const AxisExtent& extent, double resolution) {
    AxisInterp axis;
    axis.origin = extent.lo;
    axis.range = extent.hi - extent.lo;
    if (axis.range > 0.0) {
        axis.cells = std::int64_t(std::ceil(resolution * axis.range));
        axis.slope = double(axis.cells) / axis.range;
        axis.intercept = -(axis.slope * axis.origin);
    }
    return axis;
}

void check_resolution(double resolution) {
    if (!std::isfinite(resolution) || resolution <= 0.0)
        throw InvalidResolutionError("resolution factor must be finite and positive");
}

void check_extents(const Extents& extents) {
    for (int ax = 0; ax < 3; ++ax) {
        const auto& e = extents.axis[ax];
        if (!std::isfinite(e.lo) || !std::isfinite(e.hi) || e.lo > e.hi)
            throw InvalidResolutionError("extents must be finite with min <= max");
    }
}

inline void atomic_store_max(std::uint32_t& slot, std::uint32_t value) {
    std::atomic_ref<std::uint32_t> ref(slot);
    std::uint32_t current = ref.load(std::memory_order_relaxed);
    while (current < value &&
           !ref.compare_exchange_weak(current, value, std::memory_order_relaxed)) {
    }
}

inline void write_voxel(std::uint8_t* dst, const Color4& color, ChannelMode mode) {
    switch (mode) {
        case ChannelMode::Rgb:
            dst[0] = color.r;
            dst[1] = color.g;
            dst[2] = color.b;
            break;
        case ChannelMode::Nir:
            dst[0] = color.nir;
            break;
        case ChannelMode::Rgbn:
            dst[0] = color.r;
            dst[1] = color.g;
            dst[2] = color.b;
            dst[3] = color.nir;
            break;
    }
}

}  // namespace

InterpParams compute_interp_params(const Extents& extents, double resolution) {
    check_resolution(resolution);
    check_extents(extents);
    InterpParams params;
    params.resolution = resolution;
    for (int ax = 0; ax < 3; ++ax) params.axis[ax] = make_axis(extents.axis[ax], resolution);
    return params;
}

GridDims compute_dims(const Extents& extents, double resolution) {
    InterpParams params = compute_interp_params(extents, resolution);
    return {params.axis[0].cells + 1, params.axis[1].cells + 1, params.axis[2].cells + 1};
}

VoxelGrid voxelize_cloud(const PointCloud& cloud, const InterpParams& params, ChannelMode mode,
                         unsigned threads) {
    const std::int64_t w = params.axis[0].cells + 1;
    const std::int64_t h = params.axis[1].cells + 1;
    const std::int64_t d = params.axis[2].cells + 1;
    constexpr std::int64_t dim_cap = std::numeric_limits<std::uint32_t>::max();
    if (w > dim_cap || h > dim_cap || d > dim_cap)
        throw InvalidResolutionError("grid dimensions exceed the 32-bit limit");

    VoxelGrid grid = VoxelGrid::zeros(std::uint32_t(w), std::uint32_t(h), std::uint32_t(d), mode);
    const std::size_t n = cloud.size();
    if (n == 0) return grid;

    auto point_index = [&](std::size_t i) {
        const Point3& p = cloud.points[i];
        const std::int64_t ix = params.axis[0].index_of(p.x);
        const std::int64_t iy = params.axis[1].index_of(p.y);
        const std::int64_t iz = params.axis[2].index_of(p.z);
        // The division-first mapping keeps every index inside the grid;
        // anything else means the params do not belong to this cloud.
        assert(ix >= 0 && ix < w && iy >= 0 && iy < h && iz >= 0 && iz < d);
        return (std::size_t(iz) * grid.height + std::size_t(iy)) * grid.width + std::size_t(ix);
    };

    if (threads <= 1 || n < 8192) {
        // Sequential scatter: ascending order makes the last write the
        // highest point index.
        for (std::size_t i = 0; i < n; ++i) {
            write_voxel(grid.data.data() + point_index(i) * grid.channels, cloud.colors[i], mode);
        }
        return grid;
    }

    if (n > std::size_t(std::numeric_limits<std::uint32_t>::max()) - 1)
        throw InvalidBatchError("cloud exceeds the 4-billion point scatter limit");

    // Two-pass parallel scatter. Pass 1 records, per voxel, the highest
    // 1-based point index via atomic max; pass 2 lets exactly that point
    // write its colour. Equal to the sequential loop for any thread count.
    std::vector<std::size_t> voxel_of(n);
    std::vector<std::uint32_t> winner(grid.voxel_count(), 0);

    parallel_chunks(n, threads, [&](std::size_t begin, std::size_t end, unsigned) {
        for (std::size_t i = begin; i < end; ++i) {
            const std::size_t v = point_index(i);
            voxel_of[i] = v;
            atomic_store_max(winner[v], std::uint32_t(i) + 1);
        }
    });
    parallel_chunks(n, threads, [&](std::size_t begin, std::size_t end, unsigned) {
        for (std::size_t i = begin; i < end; ++i) {
            if (winner[voxel_of[i]] == std::uint32_t(i) + 1)
                write_voxel(grid.data.data() + voxel_of[i] * grid.channels, cloud.colors[i], mode);
        }
    });
    return grid;
}

std::vector<VoxelGrid> convert_batch(std::span<const PointCloud> clouds, double resolution,
                                     ChannelMode mode, unsigned threads) {
    SoABatch batch = build_soa_batch(clouds, threads);
    std::vector<Extents> extents = minmax_reduce(batch, threads);

    std::vector<VoxelGrid> grids(clouds.size());
    if (clouds.size() >= threads * 2) {
        // Plenty of clouds: one worker per cloud.
        parallel_tasks(clouds.size(), threads, [&](std::size_t i) {
            grids[i] = voxelize_cloud(clouds[i], compute_interp_params(extents[i], resolution),
                                      mode, 1);
        });
    } else {
        // Few clouds: spend the workers inside each scatter instead.
        for (std::size_t i = 0; i < clouds.size(); ++i) {
            grids[i] = voxelize_cloud(clouds[i], compute_interp_params(extents[i], resolution),
                                      mode, threads);
        }
    }
    return grids;
}

}  // namespace voxwheat
