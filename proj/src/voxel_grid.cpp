#include "voxwheat/voxel_grid.hpp"

#include "voxwheat/errors.hpp"

namespace voxwheat {

std::string_view channel_mode_name(ChannelMode mode) {
    switch (mode) {
        case ChannelMode::Rgb: return "rgb";
        case ChannelMode::Nir: return "nir";
        case ChannelMode::Rgbn: return "rgbn";
    }
    return "?";
}

ChannelMode channel_mode_from_name(std::string_view name) {
    if (name == "rgb") return ChannelMode::Rgb;
    if (name == "nir") return ChannelMode::Nir;
    if (name == "rgbn") return ChannelMode::Rgbn;
    throw InvalidSpecError("unknown channel mode: " + std::string(name));
}

ChannelMode channel_mode_from_count(std::uint32_t channels) {
    switch (channels) {
        case 1: return ChannelMode::Nir;
        case 3: return ChannelMode::Rgb;
        case 4: return ChannelMode::Rgbn;
    }
    throw InvalidSpecError("channel count must be 1, 3, or 4");
}

VoxelGrid VoxelGrid::zeros(std::uint32_t w, std::uint32_t h, std::uint32_t d, ChannelMode mode) {
    VoxelGrid grid;
    grid.width = w;
    grid.height = h;
    grid.depth = d;
    grid.mode = mode;
    grid.channels = channel_count(mode);
    grid.data.assign(std::size_t(w) * h * d * grid.channels, 0);
    return grid;
}

bool VoxelGrid::voxel_empty(std::uint32_t x, std::uint32_t y, std::uint32_t z) const {
    const std::uint8_t* v = at(x, y, z);
    for (std::uint32_t c = 0; c < channels; ++c)
        if (v[c] != 0) return false;
    return true;
}

std::size_t occupied_count(const VoxelGrid& grid) {
    std::size_t occupied = 0;
    const std::size_t voxels = grid.voxel_count();
    const std::uint8_t* p = grid.data.data();
    for (std::size_t v = 0; v < voxels; ++v, p += grid.channels) {
        for (std::uint32_t c = 0; c < grid.channels; ++c) {
            if (p[c] != 0) {
                ++occupied;
                break;
            }
        }
    }
    return occupied;
}

}  // namespace voxwheat
