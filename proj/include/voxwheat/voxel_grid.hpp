#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace voxwheat {

enum class ChannelMode { Rgb, Nir, Rgbn };

constexpr std::uint32_t channel_count(ChannelMode mode) {
    switch (mode) {
        case ChannelMode::Nir: return 1;
        case ChannelMode::Rgb: return 3;
        case ChannelMode::Rgbn: return 4;
    }
    return 0;
}

std::string_view channel_mode_name(ChannelMode mode);
ChannelMode channel_mode_from_name(std::string_view name);
ChannelMode channel_mode_from_count(std::uint32_t channels);

/// Dense multispectral 3D image. A voxel is empty iff all of its channel
/// values are zero. Layout: data[((z*height + y)*width + x)*channels + c],
/// channel fastest.
struct VoxelGrid {
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    std::uint32_t depth = 0;
    std::uint32_t channels = 0;
    ChannelMode mode = ChannelMode::Rgb;
    std::vector<std::uint8_t> data;

    static VoxelGrid zeros(std::uint32_t w, std::uint32_t h, std::uint32_t d, ChannelMode mode);

    std::size_t voxel_count() const {
        return std::size_t(width) * height * depth;
    }

    std::size_t voxel_index(std::uint32_t x, std::uint32_t y, std::uint32_t z) const {
        return (std::size_t(z) * height + y) * width + x;
    }

    std::uint8_t* at(std::uint32_t x, std::uint32_t y, std::uint32_t z) {
        return data.data() + voxel_index(x, y, z) * channels;
    }
    const std::uint8_t* at(std::uint32_t x, std::uint32_t y, std::uint32_t z) const {
        return data.data() + voxel_index(x, y, z) * channels;
    }

    bool voxel_empty(std::uint32_t x, std::uint32_t y, std::uint32_t z) const;

    friend bool operator==(const VoxelGrid& a, const VoxelGrid& b) {
        return a.width == b.width && a.height == b.height && a.depth == b.depth &&
               a.channels == b.channels && a.data == b.data;
    }
};

std::size_t occupied_count(const VoxelGrid& grid);

}  // namespace voxwheat
