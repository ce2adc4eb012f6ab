#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "voxwheat/voxel_grid.hpp"

namespace voxwheat {

enum class TensorFormat { V3d, Npy };

TensorFormat tensor_format_from_name(std::string_view name);
std::string_view tensor_format_name(TensorFormat format);
std::string_view tensor_format_extension(TensorFormat format);

// v3d: magic "V3D1"; u32 width, height, depth, channels; u64 payload length;
// payload bytes in data[z][y][x][c] order, channel fastest. Little-endian
// throughout, no compression, trailing bytes forbidden.
std::vector<std::byte> encode_v3d(const VoxelGrid& grid);
VoxelGrid decode_v3d(std::span<const std::byte> bytes);

// npy format version 1.0, dtype '|u1', C-contiguous,
// shape (depth, height, width, channels), header padded to 64 bytes.
std::vector<std::byte> encode_npy(const VoxelGrid& grid);
VoxelGrid decode_npy(std::span<const std::byte> bytes);

std::vector<std::byte> encode_tensor(const VoxelGrid& grid, TensorFormat format);
// Detects the format from the magic bytes. Throws FormatError (with the
// offending byte offset) on corrupt input.
VoxelGrid decode_tensor(std::span<const std::byte> bytes, TensorFormat* detected = nullptr);

void write_tensor_file(const std::string& path, const VoxelGrid& grid, TensorFormat format);
VoxelGrid read_tensor_file(const std::string& path, TensorFormat* detected = nullptr);

std::vector<std::byte> read_file_bytes(const std::string& path);
void write_file_bytes(const std::string& path, std::span<const std::byte> bytes);

}  // namespace voxwheat
