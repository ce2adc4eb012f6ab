#include "voxwheat/point_cloud.hpp"

#include <cmath>
#include <random>

#include "voxwheat/errors.hpp"
#include "voxwheat/rng.hpp"

namespace voxwheat {

bool same_geometry(const PointCloud& a, const PointCloud& b) {
    return a.points == b.points && a.colors == b.colors;
}

PointCloud generate_synthetic_cloud(const SyntheticSpec& spec) {
    if (spec.count == 0) throw InvalidSpecError("synthetic cloud needs at least one point");
    for (int ax = 0; ax < 3; ++ax) {
        if (!std::isfinite(spec.lo[ax]) || !std::isfinite(spec.hi[ax]))
            throw InvalidSpecError("synthetic extents must be finite");
        if (spec.lo[ax] > spec.hi[ax])
            throw InvalidSpecError("synthetic extent low bound exceeds high bound");
    }

    std::mt19937_64 gen(spec.seed);
    PointCloud cloud;
    cloud.source_id = "synthetic-" + std::to_string(spec.seed);
    cloud.points.reserve(spec.count);
    cloud.colors.reserve(spec.count);

    auto random_color = [&gen] {
        Color4 c;
        c.r = std::uint8_t(rng_below(gen, 256));
        c.g = std::uint8_t(rng_below(gen, 256));
        c.b = std::uint8_t(rng_below(gen, 256));
        c.nir = std::uint8_t(rng_below(gen, 256));
        return c;
    };

    // Corner points pin the per-axis extrema to the requested extents.
    cloud.points.push_back({spec.lo[0], spec.lo[1], spec.lo[2]});
    cloud.colors.push_back(random_color());
    if (spec.count > 1) {
        cloud.points.push_back({spec.hi[0], spec.hi[1], spec.hi[2]});
        cloud.colors.push_back(random_color());
    }

    // Interior samples are clamped so rounding can never push a point past
    // the pinned corners.
    auto interior = [&gen](double lo, double hi) {
        double v = lo + (hi - lo) * rng_unit(gen);
        return v < lo ? lo : (v > hi ? hi : v);
    };
    while (cloud.points.size() < spec.count) {
        Point3 p;
        p.x = interior(spec.lo[0], spec.hi[0]);
        p.y = interior(spec.lo[1], spec.hi[1]);
        p.z = interior(spec.lo[2], spec.hi[2]);
        cloud.points.push_back(p);
        cloud.colors.push_back(random_color());
    }
    return cloud;
}

}  // namespace voxwheat
