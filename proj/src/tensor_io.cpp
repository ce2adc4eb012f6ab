#include "voxwheat/tensor_io.hpp"

#include <cstring>
#include <fstream>

#include "voxwheat/errors.hpp"

namespace voxwheat {

namespace {

constexpr char kV3dMagic[4] = {'V', '3', 'D', '1'};
constexpr unsigned char kNpyMagic[6] = {0x93, 'N', 'U', 'M', 'P', 'Y'};

void append_bytes(std::vector<std::byte>& out, const void* src, std::size_t n) {
    const std::size_t pos = out.size();
    out.resize(pos + n);
    std::memcpy(out.data() + pos, src, n);
}

template <typename T>
void append_le(std::vector<std::byte>& out, T value) {
    // host is little-endian; stored verbatim
    append_bytes(out, &value, sizeof value);
}

template <typename T>
T read_le(std::span<const std::byte> bytes, std::size_t offset, const char* what) {
    if (offset + sizeof(T) > bytes.size())
        throw FormatError(bytes.size(), std::string("file ends inside ") + what);
    T value;
    std::memcpy(&value, bytes.data() + offset, sizeof value);
    return value;
}

void check_grid(const VoxelGrid& grid) {
    if (grid.width == 0 || grid.height == 0 || grid.depth == 0)
        throw InvalidSpecError("grid dims must be positive");
    if (grid.channels != channel_count(grid.mode))
        throw InvalidSpecError("grid channel count and mode disagree");
    if (grid.data.size() != grid.voxel_count() * grid.channels)
        throw InvalidSpecError("grid payload size mismatch");
}

}  // namespace

TensorFormat tensor_format_from_name(std::string_view name) {
    if (name == "v3d") return TensorFormat::V3d;
    if (name == "npy") return TensorFormat::Npy;
    throw InvalidSpecError("unknown tensor format: " + std::string(name));
}

std::string_view tensor_format_name(TensorFormat format) {
    return format == TensorFormat::V3d ? "v3d" : "npy";
}

std::string_view tensor_format_extension(TensorFormat format) {
    return format == TensorFormat::V3d ? ".v3d" : ".npy";
}

std::vector<std::byte> encode_v3d(const VoxelGrid& grid) {
    check_grid(grid);
    std::vector<std::byte> out;
    out.reserve(32 + grid.data.size());
    append_bytes(out, kV3dMagic, 4);
    append_le<std::uint32_t>(out, grid.width);
    append_le<std::uint32_t>(out, grid.height);
    append_le<std::uint32_t>(out, grid.depth);
    append_le<std::uint32_t>(out, grid.channels);
    append_le<std::uint64_t>(out, grid.data.size());
    append_bytes(out, grid.data.data(), grid.data.size());
    return out;
}

VoxelGrid decode_v3d(std::span<const std::byte> bytes) {
    if (bytes.size() < 4 || std::memcmp(bytes.data(), kV3dMagic, 4) != 0)
        throw FormatError(0, "bad v3d magic");
    const auto width = read_le<std::uint32_t>(bytes, 4, "width");
    const auto height = read_le<std::uint32_t>(bytes, 8, "height");
    const auto depth = read_le<std::uint32_t>(bytes, 12, "depth");
    const auto channels = read_le<std::uint32_t>(bytes, 16, "channels");
    const auto payload = read_le<std::uint64_t>(bytes, 20, "payload length");

    if (width == 0) throw FormatError(4, "width must be positive");
    if (height == 0) throw FormatError(8, "height must be positive");
    if (depth == 0) throw FormatError(12, "depth must be positive");
    ChannelMode mode;
    try {
        mode = channel_mode_from_count(channels);
    } catch (const InvalidSpecError&) {
        throw FormatError(16, "channel count must be 1, 3, or 4");
    }
    const std::uint64_t expected =
        std::uint64_t(width) * height * depth * channels;
    if (payload != expected) throw FormatError(20, "payload length disagrees with dims");
    if (bytes.size() < 28 + payload)
        throw FormatError(bytes.size(), "file ends inside voxel payload");
    if (bytes.size() > 28 + payload)
        throw FormatError(28 + payload, "trailing bytes after voxel payload");

    VoxelGrid grid;
    grid.width = width;
    grid.height = height;
    grid.depth = depth;
    grid.channels = channels;
    grid.mode = mode;
    grid.data.resize(payload);
    std::memcpy(grid.data.data(), bytes.data() + 28, payload);
    return grid;
}

std::vector<std::byte> encode_npy(const VoxelGrid& grid) {
    check_grid(grid);
    std::string dict = "{'descr': '|u1', 'fortran_order': False, 'shape': (" +
                       std::to_string(grid.depth) + ", " + std::to_string(grid.height) + ", " +
                       std::to_string(grid.width) + ", " + std::to_string(grid.channels) +
                       "), }";
    // magic(6) + version(2) + header_len(2) + dict + padding + '\n',
    // total a multiple of 64
    std::size_t unpadded = 10 + dict.size() + 1;
    std::size_t padding = (64 - unpadded % 64) % 64;
    dict.append(padding, ' ');
    dict.push_back('\n');

    std::vector<std::byte> out;
    out.reserve(10 + dict.size() + grid.data.size());
    append_bytes(out, kNpyMagic, 6);
    append_le<std::uint8_t>(out, 1);  // major version
    append_le<std::uint8_t>(out, 0);  // minor version
    append_le<std::uint16_t>(out, std::uint16_t(dict.size()));
    append_bytes(out, dict.data(), dict.size());
    append_bytes(out, grid.data.data(), grid.data.size());
    return out;
}

namespace {

// Minimal parser for the header dict emitted by numpy-compatible writers.
struct NpyHeader {
    std::string descr;
    bool fortran_order = false;
    std::vector<std::uint64_t> shape;
};

NpyHeader parse_npy_dict(const std::string& dict, std::size_t base_offset) {
    NpyHeader header;

    auto find_value = [&](const std::string& key) {
        const std::string quoted = "'" + key + "'";
        std::size_t at = dict.find(quoted);
        if (at == std::string::npos)
            throw FormatError(base_offset, "header dict lacks key " + key);
        at = dict.find(':', at + quoted.size());
        if (at == std::string::npos) throw FormatError(base_offset, "malformed header dict");
        ++at;
        while (at < dict.size() && dict[at] == ' ') ++at;
        return at;
    };

    std::size_t at = find_value("descr");
    if (at >= dict.size() || dict[at] != '\'')
        throw FormatError(base_offset + at, "descr must be a string");
    std::size_t end = dict.find('\'', at + 1);
    if (end == std::string::npos) throw FormatError(base_offset + at, "unterminated descr");
    header.descr = dict.substr(at + 1, end - at - 1);

    at = find_value("fortran_order");
    if (dict.compare(at, 5, "False") == 0) header.fortran_order = false;
    else if (dict.compare(at, 4, "True") == 0) header.fortran_order = true;
    else throw FormatError(base_offset + at, "fortran_order must be True or False");

    at = find_value("shape");
    if (at >= dict.size() || dict[at] != '(')
        throw FormatError(base_offset + at, "shape must be a tuple");
    ++at;
    while (at < dict.size() && dict[at] != ')') {
        while (at < dict.size() && (dict[at] == ' ' || dict[at] == ',')) ++at;
        if (at < dict.size() && dict[at] == ')') break;
        std::uint64_t value = 0;
        bool any = false;
        while (at < dict.size() && dict[at] >= '0' && dict[at] <= '9') {
            value = value * 10 + std::uint64_t(dict[at] - '0');
            ++at;
            any = true;
        }
        if (!any) throw FormatError(base_offset + at, "bad shape entry");
        header.shape.push_back(value);
    }
    if (at >= dict.size()) throw FormatError(base_offset + dict.size(), "unterminated shape tuple");
    return header;
}

}  // namespace

VoxelGrid decode_npy(std::span<const std::byte> bytes) {
    if (bytes.size() < 6 || std::memcmp(bytes.data(), kNpyMagic, 6) != 0)
        throw FormatError(0, "bad npy magic");
    const auto major = read_le<std::uint8_t>(bytes, 6, "version");
    const auto minor = read_le<std::uint8_t>(bytes, 7, "version");
    if (major != 1 || minor != 0)
        throw FormatError(6, "unsupported npy version " + std::to_string(major) + "." +
                                 std::to_string(minor));
    const auto header_len = read_le<std::uint16_t>(bytes, 8, "header length");
    if (10 + std::size_t(header_len) > bytes.size())
        throw FormatError(bytes.size(), "file ends inside header");

    const std::string dict(reinterpret_cast<const char*>(bytes.data()) + 10, header_len);
    NpyHeader header = parse_npy_dict(dict, 10);

    if (header.descr != "|u1" && header.descr != "u1" && header.descr != "<u1")
        throw FormatError(10, "dtype must be unsigned 8-bit, got " + header.descr);
    if (header.fortran_order) throw FormatError(10, "fortran-order arrays are not supported");
    if (header.shape.size() != 4)
        throw FormatError(10, "shape must be (depth, height, width, channels)");

    const std::uint64_t depth = header.shape[0];
    const std::uint64_t height = header.shape[1];
    const std::uint64_t width = header.shape[2];
    const std::uint64_t channels = header.shape[3];
    if (depth == 0 || height == 0 || width == 0)
        throw FormatError(10, "shape entries must be positive");
    ChannelMode mode;
    try {
        mode = channel_mode_from_count(std::uint32_t(channels));
    } catch (const InvalidSpecError&) {
        throw FormatError(10, "channel count must be 1, 3, or 4");
    }

    const std::size_t data_at = 10 + std::size_t(header_len);
    const std::uint64_t expected = depth * height * width * channels;
    if (bytes.size() < data_at + expected)
        throw FormatError(bytes.size(), "file ends inside voxel payload");
    if (bytes.size() > data_at + expected)
        throw FormatError(data_at + expected, "trailing bytes after voxel payload");

    VoxelGrid grid;
    grid.width = std::uint32_t(width);
    grid.height = std::uint32_t(height);
    grid.depth = std::uint32_t(depth);
    grid.channels = std::uint32_t(channels);
    grid.mode = mode;
    grid.data.resize(expected);
    std::memcpy(grid.data.data(), bytes.data() + data_at, expected);
    return grid;
}

std::vector<std::byte> encode_tensor(const VoxelGrid& grid, TensorFormat format) {
    return format == TensorFormat::V3d ? encode_v3d(grid) : encode_npy(grid);
}

VoxelGrid decode_tensor(std::span<const std::byte> bytes, TensorFormat* detected) {
    if (bytes.size() >= 4 && std::memcmp(bytes.data(), kV3dMagic, 4) == 0) {
        if (detected) *detected = TensorFormat::V3d;
        return decode_v3d(bytes);
    }
    if (bytes.size() >= 6 && std::memcmp(bytes.data(), kNpyMagic, 6) == 0) {
        if (detected) *detected = TensorFormat::Npy;
        return decode_npy(bytes);
    }
    throw FormatError(0, "unrecognized tensor magic");
}

std::vector<std::byte> read_file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::string raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    std::vector<std::byte> bytes(raw.size());
    std::memcpy(bytes.data(), raw.data(), raw.size());
    return bytes;
}

void write_file_bytes(const std::string& path, std::span<const std::byte> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + path + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
    if (!out) throw Error("short write to " + path);
}

void write_tensor_file(const std::string& path, const VoxelGrid& grid, TensorFormat format) {
    write_file_bytes(path, encode_tensor(grid, format));
}

VoxelGrid read_tensor_file(const std::string& path, TensorFormat* detected) {
    return decode_tensor(read_file_bytes(path), detected);
}

}  // namespace voxwheat
