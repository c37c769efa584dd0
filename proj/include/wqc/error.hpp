#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wqc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed Newick text. `position` is the byte offset of the offending character.
class NewickError : public Error {
public:
    NewickError(const std::string& what, std::size_t position)
        : Error(what + " at position " + std::to_string(position)), position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/// A label set that does not match what the operation expects.
class LabelError : public Error {
public:
    using Error::Error;
};

/// Input size beyond a configured enumeration cap.
class CapacityError : public Error {
public:
    using Error::Error;
};

} // namespace wqc
