#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace hubness {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (k out of range, dimension mismatch, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Input data does not conform to its declared format or to the EmbeddingSet invariants.
/// `row()` is the zero-based row the problem was found on, when it is tied to one.
class FormatError : public Error {
public:
    explicit FormatError(const std::string& what, std::optional<std::size_t> row = std::nullopt)
        : Error(row ? what + " (row " + std::to_string(*row + 1) + ")" : what), row_(row) {}

    std::optional<std::size_t> row() const { return row_; }

private:
    std::optional<std::size_t> row_;
};

/// Reading or writing a file failed.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace hubness
