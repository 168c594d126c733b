#pragma once

#include <stdexcept>
#include <string>

namespace nrs {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Missing, unreadable or unwritable files.
struct IoError : Error {
    using Error::Error;
};

// Mismatched grid shapes or malformed file geometry.
struct DimensionError : Error {
    using Error::Error;
};

}  // namespace nrs
