#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace voxwheat {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed file header or record.
struct ParseError : Error {
    ParseError(std::size_t line_, const std::string& reason)
        : Error("parse error at line " + std::to_string(line_) + ": " + reason),
          line(line_) {}
    std::size_t line;
};

// Declared element count exceeds the available payload.
struct TruncatedError : Error {
    using Error::Error;
};

struct UnsupportedFormatError : Error {
    using Error::Error;
};

// Invalid value at a specific point index.
struct DataError : Error {
    DataError(std::size_t index_, const std::string& reason)
        : Error("bad data at point " + std::to_string(index_) + ": " + reason),
          index(index_) {}
    std::size_t index;
};

struct InvalidSpecError : Error {
    using Error::Error;
};

struct InvalidBatchError : Error {
    using Error::Error;
};

struct InvalidResolutionError : Error {
    using Error::Error;
};

// Grid exceeds the target envelope along `axis` (0=x, 1=y, 2=z).
struct PadError : Error {
    explicit PadError(int axis_)
        : Error(std::string("grid exceeds envelope along ") + "xyz"[axis_] + "-axis"),
          axis(axis_) {}
    int axis;
};

struct LabelError : Error {
    using Error::Error;
};

struct FoldError : Error {
    using Error::Error;
};

struct SampleError : Error {
    using Error::Error;
};

struct ShapeError : Error {
    using Error::Error;
};

// Corrupt tensor file; `offset` is the byte position of the problem.
struct FormatError : Error {
    FormatError(std::size_t offset_, const std::string& reason)
        : Error("bad tensor file at byte " + std::to_string(offset_) + ": " + reason),
          offset(offset_) {}
    std::size_t offset;
};

}  // namespace voxwheat
