#include "voxwheat/resample.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstring>
#include <vector>

#include "voxwheat/errors.hpp"

namespace voxwheat {

Envelope envelope_preset(std::string_view name) {
    if (name == "spike-rgb") return {75, 300, 95};
    if (name == "head") return {161, 51, 93};
    if (name == "dataset2") return {227, 70, 111};
    throw InvalidSpecError("unknown envelope preset: " + std::string(name));
}

double fit_scale(const VoxelGrid& grid, const Envelope& env) {
    const double sx = double(env.width) / double(grid.width);
    const double sy = double(env.height) / double(grid.height);
    const double sz = double(env.depth) / double(grid.depth);
    return std::min(sx, std::min(sy, sz));
}

VoxelGrid pad_to(const VoxelGrid& grid, const Envelope& env) {
    if (grid.width > env.width) throw PadError(0);
    if (grid.height > env.height) throw PadError(1);
    if (grid.depth > env.depth) throw PadError(2);
    if (grid.width == env.width && grid.height == env.height && grid.depth == env.depth)
        return grid;

    VoxelGrid out = VoxelGrid::zeros(env.width, env.height, env.depth, grid.mode);
    const std::size_t row_bytes = std::size_t(grid.width) * grid.channels;
    for (std::uint32_t z = 0; z < grid.depth; ++z) {
        for (std::uint32_t y = 0; y < grid.height; ++y) {
            std::memcpy(out.at(0, y, z), grid.at(0, y, z), row_bytes);
        }
    }
    return out;
}

namespace {

// round half up, clamped to >= 1
std::uint32_t scaled_dim(std::uint32_t dim, double scale) {
    double v = std::floor(double(dim) * scale + 0.5);
    return v < 1.0 ? 1u : std::uint32_t(v);
}

VoxelGrid resample_nearest(const VoxelGrid& grid, std::uint32_t nw, std::uint32_t nh,
                           std::uint32_t nd) {
    if (nw == grid.width && nh == grid.height && nd == grid.depth) return grid;

    VoxelGrid out = VoxelGrid::zeros(nw, nh, nd, grid.mode);
    auto src_index = [](std::uint32_t i, std::uint32_t n_out, std::uint32_t n_in) {
        // voxel-centre mapping; identical sizes map i -> i
        auto s = std::uint32_t((double(i) + 0.5) * double(n_in) / double(n_out));
        return s >= n_in ? n_in - 1 : s;
    };

    std::vector<std::uint32_t> sx(nw);
    for (std::uint32_t x = 0; x < nw; ++x) sx[x] = src_index(x, nw, grid.width);

    const std::uint32_t channels = grid.channels;
    for (std::uint32_t z = 0; z < nd; ++z) {
        const std::uint32_t zi = src_index(z, nd, grid.depth);
        for (std::uint32_t y = 0; y < nh; ++y) {
            const std::uint32_t yi = src_index(y, nh, grid.height);
            const std::uint8_t* src_row = grid.at(0, yi, zi);
            std::uint8_t* dst = out.at(0, y, z);
            for (std::uint32_t x = 0; x < nw; ++x, dst += channels) {
                std::memcpy(dst, src_row + std::size_t(sx[x]) * channels, channels);
            }
        }
    }
    return out;
}

}  // namespace

VoxelGrid fit_to_envelope(const VoxelGrid& grid, const Envelope& env) {
    if (env.width == 0 || env.height == 0 || env.depth == 0)
        throw InvalidSpecError("envelope dims must be positive");
    if (grid.width == 0 || grid.height == 0 || grid.depth == 0)
        throw InvalidSpecError("grid dims must be positive");

    const double s = fit_scale(grid, env);
    const std::uint32_t nw = scaled_dim(grid.width, s);
    const std::uint32_t nh = scaled_dim(grid.height, s);
    const std::uint32_t nd = scaled_dim(grid.depth, s);
    // rounding the binding axis reproduces the envelope value exactly
    assert(nw <= env.width && nh <= env.height && nd <= env.depth);

    return pad_to(resample_nearest(grid, nw, nh, nd), env);
}

}  // namespace voxwheat
