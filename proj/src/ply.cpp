#include "voxwheat/ply.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "voxwheat/errors.hpp"

namespace voxwheat {

namespace {

enum class ScalarType { I8, U8, I16, U16, I32, U32, F32, F64 };

std::optional<ScalarType> scalar_type_from_name(const std::string& name) {
    if (name == "char" || name == "int8") return ScalarType::I8;
    if (name == "uchar" || name == "uint8") return ScalarType::U8;
    if (name == "short" || name == "int16") return ScalarType::I16;
    if (name == "ushort" || name == "uint16") return ScalarType::U16;
    if (name == "int" || name == "int32") return ScalarType::I32;
    if (name == "uint" || name == "uint32") return ScalarType::U32;
    if (name == "float" || name == "float32") return ScalarType::F32;
    if (name == "double" || name == "float64") return ScalarType::F64;
    return std::nullopt;
}

std::size_t scalar_size(ScalarType t) {
    switch (t) {
        case ScalarType::I8:
        case ScalarType::U8: return 1;
        case ScalarType::I16:
        case ScalarType::U16: return 2;
        case ScalarType::I32:
        case ScalarType::U32:
        case ScalarType::F32: return 4;
        case ScalarType::F64: return 8;
    }
    return 0;
}

struct Property {
    std::string name;
    bool is_list = false;
    ScalarType count_type = ScalarType::U8;  // list count type
    ScalarType value_type = ScalarType::F32;
};

struct Element {
    std::string name;
    std::size_t count = 0;
    std::size_t header_line = 0;
    std::vector<Property> properties;
};

struct Header {
    bool binary = false;
    std::vector<Element> elements;
    std::vector<std::string> comments;
    std::size_t body_offset = 0;  // first byte after "end_header\n"
    std::size_t line_count = 0;
};

std::vector<std::string> split_tokens(const std::string& line) {
    std::vector<std::string> tokens;
    std::istringstream stream(line);
    std::string tok;
    while (stream >> tok) tokens.push_back(tok);
    return tokens;
}

Header parse_header(std::span<const std::byte> bytes) {
    Header header;
    const char* data = reinterpret_cast<const char*>(bytes.data());
    const std::size_t size = bytes.size();

    std::size_t pos = 0;
    std::size_t line_no = 0;
    bool saw_format = false;
    bool done = false;

    while (pos < size && !done) {
        std::size_t eol = pos;
        while (eol < size && data[eol] != '\n') ++eol;
        if (eol == size) throw ParseError(line_no + 1, "header not terminated by end_header");
        std::string line(data + pos, eol - pos);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        pos = eol + 1;
        ++line_no;

        if (line_no == 1) {
            if (line != "ply") throw ParseError(1, "missing PLY magic line");
            continue;
        }
        if (line == "comment" || line.rfind("comment ", 0) == 0) {
            std::string text = line.size() > 8 ? line.substr(8) : std::string();
            header.comments.push_back(text);
            continue;
        }
        if (line == "end_header") {
            done = true;
            continue;
        }

        auto tokens = split_tokens(line);
        if (tokens.empty()) throw ParseError(line_no, "blank header line");

        if (tokens[0] == "format") {
            if (tokens.size() != 3) throw ParseError(line_no, "malformed format line");
            if (tokens[1] == "binary_big_endian")
                throw UnsupportedFormatError("binary_big_endian is not supported");
            if (tokens[2] != "1.0")
                throw ParseError(line_no, "unsupported PLY version " + tokens[2]);
            if (tokens[1] == "ascii") header.binary = false;
            else if (tokens[1] == "binary_little_endian") header.binary = true;
            else throw ParseError(line_no, "unknown format " + tokens[1]);
            saw_format = true;
        } else if (tokens[0] == "element") {
            if (tokens.size() != 3) throw ParseError(line_no, "malformed element line");
            Element element;
            element.name = tokens[1];
            element.header_line = line_no;
            try {
                element.count = std::stoull(tokens[2]);
            } catch (const std::exception&) {
                throw ParseError(line_no, "bad element count " + tokens[2]);
            }
            header.elements.push_back(element);
        } else if (tokens[0] == "property") {
            if (header.elements.empty())
                throw ParseError(line_no, "property before any element");
            Property property;
            if (tokens.size() == 5 && tokens[1] == "list") {
                auto ct = scalar_type_from_name(tokens[2]);
                auto vt = scalar_type_from_name(tokens[3]);
                if (!ct || !vt) throw ParseError(line_no, "unknown list property type");
                property.is_list = true;
                property.count_type = *ct;
                property.value_type = *vt;
                property.name = tokens[4];
            } else if (tokens.size() == 3) {
                auto vt = scalar_type_from_name(tokens[1]);
                if (!vt) throw ParseError(line_no, "unknown property type " + tokens[1]);
                property.value_type = *vt;
                property.name = tokens[2];
            } else {
                throw ParseError(line_no, "malformed property line");
            }
            header.elements.back().properties.push_back(property);
        } else if (tokens[0] == "obj_info") {
            // informational, same treatment as comments
            header.comments.push_back(line);
        } else {
            throw ParseError(line_no, "unknown header keyword " + tokens[0]);
        }
    }

    if (!done) throw ParseError(line_no, "header not terminated by end_header");
    if (!saw_format) throw ParseError(line_no, "missing format line");
    header.body_offset = pos;
    header.line_count = line_no;
    return header;
}

double decode_scalar(const std::byte* at, ScalarType type) {
    auto load = [&]<typename T>() {
        T v;
        std::memcpy(&v, at, sizeof(T));
        return double(v);
    };
    switch (type) {
        case ScalarType::I8: return load.operator()<std::int8_t>();
        case ScalarType::U8: return load.operator()<std::uint8_t>();
        case ScalarType::I16: return load.operator()<std::int16_t>();
        case ScalarType::U16: return load.operator()<std::uint16_t>();
        case ScalarType::I32: return load.operator()<std::int32_t>();
        case ScalarType::U32: return load.operator()<std::uint32_t>();
        case ScalarType::F32: return load.operator()<float>();
        case ScalarType::F64: return load.operator()<double>();
    }
    return 0.0;
}

std::uint8_t to_channel(double v) {
    if (std::isnan(v)) return 0;
    double r = std::nearbyint(v);
    if (r < 0.0) return 0;
    if (r > 255.0) return 255;
    return std::uint8_t(r);
}

// Column positions of the interesting vertex properties; -1 = absent.
struct VertexLayout {
    int x = -1, y = -1, z = -1;
    int red = -1, green = -1, blue = -1, nir = -1;
};

VertexLayout find_vertex_layout(const Element& vertex, const PlyOptions& options,
                                ParseReport& report) {
    VertexLayout layout;
    for (std::size_t i = 0; i < vertex.properties.size(); ++i) {
        const auto& p = vertex.properties[i];
        if (p.is_list) continue;
        if (p.name == "x") layout.x = int(i);
        else if (p.name == "y") layout.y = int(i);
        else if (p.name == "z") layout.z = int(i);
        else if (p.name == "red") layout.red = int(i);
        else if (p.name == "green") layout.green = int(i);
        else if (p.name == "blue") layout.blue = int(i);
    }
    for (const auto& candidate : options.nir_names) {
        if (layout.nir >= 0) break;
        for (std::size_t i = 0; i < vertex.properties.size(); ++i) {
            if (!vertex.properties[i].is_list && vertex.properties[i].name == candidate) {
                layout.nir = int(i);
                break;
            }
        }
    }
    if (layout.x < 0 || layout.y < 0 || layout.z < 0)
        throw ParseError(vertex.header_line, "vertex element lacks x/y/z properties");
    if (layout.red < 0) report.missing_channels.push_back("red");
    if (layout.green < 0) report.missing_channels.push_back("green");
    if (layout.blue < 0) report.missing_channels.push_back("blue");
    if (layout.nir < 0) report.missing_channels.push_back("nir");
    return layout;
}

void check_finite(const PointCloud& cloud) {
    for (std::size_t i = 0; i < cloud.points.size(); ++i) {
        const auto& p = cloud.points[i];
        if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z))
            throw DataError(i, "non-finite coordinate");
    }
}

// Whitespace tokenizer over the ASCII body; counts lines for error messages.
// Owns a null-terminated copy so strtod cannot scan past the payload.
struct AsciiCursor {
    std::string body;
    const char* data = nullptr;
    std::size_t size = 0;
    std::size_t pos = 0;
    std::size_t line = 1;

    AsciiCursor(std::span<const std::byte> bytes, std::size_t offset, std::size_t first_line)
        : body(reinterpret_cast<const char*>(bytes.data()) + offset, bytes.size() - offset),
          data(body.c_str()),
          size(body.size()),
          line(first_line) {}

    double next(const char* what) {
        while (pos < size && std::isspace(static_cast<unsigned char>(data[pos]))) {
            if (data[pos] == '\n') ++line;
            ++pos;
        }
        if (pos >= size)
            throw TruncatedError(std::string("payload ended while reading ") + what);
        char* end = nullptr;
        double v = std::strtod(data + pos, &end);
        if (end == data + pos) throw ParseError(line, std::string("bad numeric token for ") + what);
        pos = std::size_t(end - data);
        return v;
    }
};

PointCloud read_vertices_ascii(AsciiCursor& cursor, const Header& header, const Element& vertex,
                               const VertexLayout& layout) {
    PointCloud cloud;
    cloud.points.resize(vertex.count);
    cloud.colors.resize(vertex.count);

    // Elements appear in the body in header order; consume precursors.
    for (const auto& element : header.elements) {
        if (&element == &vertex) break;
        for (std::size_t row = 0; row < element.count; ++row) {
            for (const auto& p : element.properties) {
                if (p.is_list) {
                    std::size_t n = std::size_t(cursor.next("list count"));
                    for (std::size_t k = 0; k < n; ++k) cursor.next("list item");
                } else {
                    cursor.next("scalar");
                }
            }
        }
    }

    std::vector<double> row(vertex.properties.size(), 0.0);
    for (std::size_t i = 0; i < vertex.count; ++i) {
        for (std::size_t c = 0; c < vertex.properties.size(); ++c) {
            const auto& p = vertex.properties[c];
            if (p.is_list) {
                std::size_t n = std::size_t(cursor.next("list count"));
                for (std::size_t k = 0; k < n; ++k) cursor.next("list item");
                row[c] = 0.0;
            } else {
                row[c] = cursor.next(p.name.c_str());
            }
        }
        cloud.points[i] = {row[layout.x], row[layout.y], row[layout.z]};
        Color4 color;
        if (layout.red >= 0) color.r = to_channel(row[layout.red]);
        if (layout.green >= 0) color.g = to_channel(row[layout.green]);
        if (layout.blue >= 0) color.b = to_channel(row[layout.blue]);
        if (layout.nir >= 0) color.nir = to_channel(row[layout.nir]);
        cloud.colors[i] = color;
    }
    return cloud;
}

struct BinaryCursor {
    std::span<const std::byte> bytes;
    std::size_t pos;

    const std::byte* take(std::size_t n, const char* what) {
        if (pos + n > bytes.size())
            throw TruncatedError(std::string("payload ended while reading ") + what);
        const std::byte* at = bytes.data() + pos;
        pos += n;
        return at;
    }
};

void skip_element_binary(BinaryCursor& cursor, const Element& element) {
    // Fast path: fixed-stride rows.
    bool has_list = std::any_of(element.properties.begin(), element.properties.end(),
                                [](const Property& p) { return p.is_list; });
    if (!has_list) {
        std::size_t stride = 0;
        for (const auto& p : element.properties) stride += scalar_size(p.value_type);
        cursor.take(stride * element.count, element.name.c_str());
        return;
    }
    for (std::size_t row = 0; row < element.count; ++row) {
        for (const auto& p : element.properties) {
            if (p.is_list) {
                double n = decode_scalar(cursor.take(scalar_size(p.count_type), "list count"),
                                         p.count_type);
                cursor.take(std::size_t(n) * scalar_size(p.value_type), "list items");
            } else {
                cursor.take(scalar_size(p.value_type), p.name.c_str());
            }
        }
    }
}

PointCloud read_vertices_binary(BinaryCursor& cursor, const Header& header, const Element& vertex,
                                const VertexLayout& layout) {
    for (const auto& element : header.elements) {
        if (&element == &vertex) break;
        skip_element_binary(cursor, element);
    }

    PointCloud cloud;
    cloud.points.resize(vertex.count);
    cloud.colors.resize(vertex.count);

    std::vector<double> row(vertex.properties.size(), 0.0);
    for (std::size_t i = 0; i < vertex.count; ++i) {
        for (std::size_t c = 0; c < vertex.properties.size(); ++c) {
            const auto& p = vertex.properties[c];
            if (p.is_list) {
                double n = decode_scalar(cursor.take(scalar_size(p.count_type), "list count"),
                                         p.count_type);
                cursor.take(std::size_t(n) * scalar_size(p.value_type), "list items");
                row[c] = 0.0;
            } else {
                row[c] = decode_scalar(cursor.take(scalar_size(p.value_type), p.name.c_str()),
                                       p.value_type);
            }
        }
        cloud.points[i] = {row[layout.x], row[layout.y], row[layout.z]};
        Color4 color;
        if (layout.red >= 0) color.r = to_channel(row[layout.red]);
        if (layout.green >= 0) color.g = to_channel(row[layout.green]);
        if (layout.blue >= 0) color.b = to_channel(row[layout.blue]);
        if (layout.nir >= 0) color.nir = to_channel(row[layout.nir]);
        cloud.colors[i] = color;
    }
    return cloud;
}

}  // namespace

PlyParseResult parse_ply(std::span<const std::byte> bytes, const PlyOptions& options,
                         std::string source_id) {
    Header header = parse_header(bytes);

    const Element* vertex = nullptr;
    for (const auto& element : header.elements) {
        if (element.name == "vertex") {
            vertex = &element;
            break;
        }
    }
    if (!vertex) throw ParseError(header.line_count, "no vertex element declared");
    if (vertex->count == 0)
        throw ParseError(vertex->header_line, "vertex element declares zero vertices");

    PlyParseResult result;
    result.report.comments = header.comments;
    VertexLayout layout = find_vertex_layout(*vertex, options, result.report);

    if (header.binary) {
        BinaryCursor cursor{bytes, header.body_offset};
        result.cloud = read_vertices_binary(cursor, header, *vertex, layout);
    } else {
        AsciiCursor cursor(bytes, header.body_offset, header.line_count + 1);
        result.cloud = read_vertices_ascii(cursor, header, *vertex, layout);
    }
    check_finite(result.cloud);
    result.cloud.source_id = std::move(source_id);
    return result;
}

PlyParseResult parse_ply_file(const std::string& path, const PlyOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::string raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_ply(std::as_bytes(std::span<const char>(raw.data(), raw.size())), options,
                     std::filesystem::path(path).stem().string());
}

std::vector<std::byte> write_ply(const PointCloud& cloud, PlyFormat format) {
    std::string out;
    out += "ply\n";
    out += format == PlyFormat::Ascii ? "format ascii 1.0\n" : "format binary_little_endian 1.0\n";
    out += "comment voxwheat point cloud\n";
    out += "element vertex " + std::to_string(cloud.size()) + "\n";
    const char* coord_type = format == PlyFormat::Ascii ? "double" : "float";
    for (const char* axis : {"x", "y", "z"})
        out += std::string("property ") + coord_type + " " + axis + "\n";
    for (const char* channel : {"red", "green", "blue", "nir"})
        out += std::string("property uchar ") + channel + "\n";
    out += "end_header\n";

    if (format == PlyFormat::Ascii) {
        char buf[96];
        for (std::size_t i = 0; i < cloud.size(); ++i) {
            const auto& p = cloud.points[i];
            const auto& c = cloud.colors[i];
            std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g %u %u %u %u\n", p.x, p.y, p.z,
                          unsigned(c.r), unsigned(c.g), unsigned(c.b), unsigned(c.nir));
            out += buf;
        }
        std::vector<std::byte> bytes(out.size());
        std::memcpy(bytes.data(), out.data(), out.size());
        return bytes;
    }

    std::vector<std::byte> bytes(out.size() + cloud.size() * (3 * sizeof(float) + 4));
    std::memcpy(bytes.data(), out.data(), out.size());
    std::size_t pos = out.size();
    auto put = [&](const void* src, std::size_t n) {
        std::memcpy(bytes.data() + pos, src, n);
        pos += n;
    };
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        float coords[3] = {float(cloud.points[i].x), float(cloud.points[i].y),
                           float(cloud.points[i].z)};
        put(coords, sizeof coords);
        const auto& c = cloud.colors[i];
        std::uint8_t channels[4] = {c.r, c.g, c.b, c.nir};
        put(channels, sizeof channels);
    }
    return bytes;
}

void write_ply_file(const std::string& path, const PointCloud& cloud, PlyFormat format) {
    auto bytes = write_ply(cloud, format);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + path + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
    if (!out) throw Error("short write to " + path);
}

}  // namespace voxwheat
