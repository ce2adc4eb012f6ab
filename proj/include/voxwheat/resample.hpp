#pragma once

#include <cstdint>
#include <string_view>

#include "voxwheat/voxel_grid.hpp"

namespace voxwheat {

/// Fixed training-tensor dimensions, in voxels.
struct Envelope {
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    std::uint32_t depth = 0;

    friend bool operator==(const Envelope&, const Envelope&) = default;
};

// Published training envelopes: "spike-rgb" (75x300x95), "head" (161x51x93),
// "dataset2" (227x70x111). Throws InvalidSpecError for unknown names.
Envelope envelope_preset(std::string_view name);

/// Largest uniform scale that keeps the grid inside the envelope:
/// min(W/w, H/h, D/d).
double fit_scale(const VoxelGrid& grid, const Envelope& env);

/// Zero-pad to the envelope with the content corner-anchored at (0,0,0).
/// Throws PadError(axis) when the grid exceeds the envelope on an axis.
VoxelGrid pad_to(const VoxelGrid& grid, const Envelope& env);

/// Resize by a single shared scale so the grid fills the envelope as far as
/// the original aspect ratios allow (nearest-neighbour), then zero-pad to
/// exactly the envelope. Intermediate dims are max(1, round(dim*s)).
VoxelGrid fit_to_envelope(const VoxelGrid& grid, const Envelope& env);

}  // namespace voxwheat
