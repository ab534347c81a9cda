#pragma once

#include <stdexcept>

namespace pqt {

// Base class for every error raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotNormalizedError : Error { using Error::Error; };
struct OutOfRangeError : Error { using Error::Error; };
struct CapacityExceededError : Error { using Error::Error; };
struct BasisNotOrthonormalError : Error { using Error::Error; };
struct UnknownQubitLabelError : Error { using Error::Error; };
struct NoMatchedBasisError : Error { using Error::Error; };
struct UnsupportedDepthError : Error { using Error::Error; };
struct InvalidSpecError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

}  // namespace pqt
