#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace voxwheat {

struct Point3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend bool operator==(const Point3&, const Point3&) = default;
};

// One (R,G,B,NIR) intensity tuple, each channel in [0,255].
struct Color4 {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;
    std::uint8_t nir = 0;

    friend bool operator==(const Color4&, const Color4&) = default;
};

/// One scanned plant: N spatial points (millimetres) with per-point
/// multispectral intensities. Coordinates are widened to double on read so
/// downstream slope/intercept divisions stay stable for tight extents.
struct PointCloud {
    std::vector<Point3> points;
    std::vector<Color4> colors;
    std::string source_id;

    std::size_t size() const { return points.size(); }
};

// Equality of points and colours, ignoring source_id.
bool same_geometry(const PointCloud& a, const PointCloud& b);

/// Extent ranges, point count, and seed for a synthetic fixture cloud.
struct SyntheticSpec {
    std::array<double, 3> lo{0.0, 0.0, 0.0};
    std::array<double, 3> hi{1.0, 1.0, 1.0};
    std::size_t count = 1;
    std::uint64_t seed = 0;
};

/// Deterministic fixture cloud. The first point sits on the low extent
/// corner and the second on the high corner, so per-axis min/max equal the
/// requested extents exactly (a single-point cloud keeps only the low
/// corner). Colours are uniform in [0,255].
PointCloud generate_synthetic_cloud(const SyntheticSpec& spec);

}  // namespace voxwheat
