#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "voxwheat/point_cloud.hpp"

namespace voxwheat {

struct PlyOptions {
    // Property names probed for the NIR channel, in order of likelihood.
    // The scanner vendor never documented the name, so it stays configurable.
    std::vector<std::string> nir_names{"nir", "NIR", "scalar_NIR", "alpha"};
};

struct ParseReport {
    std::vector<std::string> comments;          // header comment lines, verbatim
    std::vector<std::string> missing_channels;  // colour channels filled with 0
};

struct PlyParseResult {
    PointCloud cloud;
    ParseReport report;
};

/// Parse a PLY file (ascii 1.0 or binary_little_endian 1.0). Vertex
/// properties x/y/z are required; red/green/blue and the NIR candidate are
/// optional and default to 0 when absent (recorded in the report). Face and
/// other non-vertex elements are skipped. Memory use is O(N).
PlyParseResult parse_ply(std::span<const std::byte> bytes, const PlyOptions& options = {},
                         std::string source_id = {});

PlyParseResult parse_ply_file(const std::string& path, const PlyOptions& options = {});

enum class PlyFormat { Ascii, BinaryLittleEndian };

/// Vertex-only writer for fixtures and round-trip checks. ASCII output keeps
/// full double precision; binary output stores float32 coordinates.
std::vector<std::byte> write_ply(const PointCloud& cloud, PlyFormat format);

void write_ply_file(const std::string& path, const PointCloud& cloud, PlyFormat format);

}  // namespace voxwheat
