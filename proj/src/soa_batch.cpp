#include "voxwheat/soa_batch.hpp"

#include <algorithm>

#include "voxwheat/errors.hpp"
#include "voxwheat/parallel.hpp"

namespace voxwheat {

SoABatch build_soa_batch(std::span<const PointCloud> clouds, unsigned threads) {
    if (clouds.empty()) throw InvalidBatchError("batch is empty");

    SoABatch batch;
    batch.offsets.resize(clouds.size());
    std::size_t total = 0;
    for (std::size_t i = 0; i < clouds.size(); ++i) {
        if (clouds[i].size() == 0)
            throw InvalidBatchError("cloud " + std::to_string(i) + " is empty");
        batch.offsets[i] = {total, clouds[i].size()};
        total += clouds[i].size();
    }

    batch.xs.resize(total);
    batch.ys.resize(total);
    batch.zs.resize(total);
    batch.r.resize(total);
    batch.g.resize(total);
    batch.b.resize(total);
    batch.nir.resize(total);

    // Each cloud copies into its own disjoint range.
    parallel_tasks(clouds.size(), threads, [&](std::size_t i) {
        const PointCloud& cloud = clouds[i];
        const std::size_t base = batch.offsets[i].start;
        for (std::size_t j = 0; j < cloud.size(); ++j) {
            batch.xs[base + j] = cloud.points[j].x;
            batch.ys[base + j] = cloud.points[j].y;
            batch.zs[base + j] = cloud.points[j].z;
            batch.r[base + j] = cloud.colors[j].r;
            batch.g[base + j] = cloud.colors[j].g;
            batch.b[base + j] = cloud.colors[j].b;
            batch.nir[base + j] = cloud.colors[j].nir;
        }
    });
    return batch;
}

std::vector<PointCloud> deinterleave_batch(const SoABatch& batch) {
    std::vector<PointCloud> clouds(batch.cloud_count());
    for (std::size_t i = 0; i < batch.cloud_count(); ++i) {
        const auto [start, count] = batch.offsets[i];
        PointCloud& cloud = clouds[i];
        cloud.points.resize(count);
        cloud.colors.resize(count);
        for (std::size_t j = 0; j < count; ++j) {
            cloud.points[j] = {batch.xs[start + j], batch.ys[start + j], batch.zs[start + j]};
            cloud.colors[j] = {batch.r[start + j], batch.g[start + j], batch.b[start + j],
                               batch.nir[start + j]};
        }
    }
    return clouds;
}

namespace {

AxisExtent scan_minmax(const double* values, std::size_t count) {
    AxisExtent e{values[0], values[0]};
    for (std::size_t i = 1; i < count; ++i) {
        e.lo = std::min(e.lo, values[i]);
        e.hi = std::max(e.hi, values[i]);
    }
    return e;
}

// Chunked pairwise reduction; min/max are order-insensitive so the merge
// order cannot change the result.
AxisExtent chunked_minmax(const double* values, std::size_t count, unsigned threads) {
    if (threads <= 1 || count < 4096) return scan_minmax(values, count);
    const unsigned workers = threads < count ? threads : unsigned(count);
    std::vector<AxisExtent> partial(workers);
    parallel_chunks(count, workers, [&](std::size_t begin, std::size_t end, unsigned worker) {
        partial[worker] = scan_minmax(values + begin, end - begin);
    });
    AxisExtent e = partial[0];
    for (unsigned w = 1; w < workers; ++w) {
        e.lo = std::min(e.lo, partial[w].lo);
        e.hi = std::max(e.hi, partial[w].hi);
    }
    return e;
}

}  // namespace

std::vector<Extents> minmax_reduce(const SoABatch& batch, unsigned threads) {
    if (batch.cloud_count() == 0) throw InvalidBatchError("batch is empty");

    std::vector<Extents> extents(batch.cloud_count());
    const double* axes[3] = {batch.xs.data(), batch.ys.data(), batch.zs.data()};

    if (batch.cloud_count() >= threads) {
        parallel_tasks(batch.cloud_count(), threads, [&](std::size_t i) {
            const auto [start, count] = batch.offsets[i];
            for (int ax = 0; ax < 3; ++ax)
                extents[i].axis[ax] = scan_minmax(axes[ax] + start, count);
        });
    } else {
        // Few clouds, many workers: go data-parallel inside each axis scan.
        for (std::size_t i = 0; i < batch.cloud_count(); ++i) {
            const auto [start, count] = batch.offsets[i];
            for (int ax = 0; ax < 3; ++ax)
                extents[i].axis[ax] = chunked_minmax(axes[ax] + start, count, threads);
        }
    }
    return extents;
}

}  // namespace voxwheat
