#pragma once

#include <stdexcept>
#include <string>

namespace newsrank {

// Base type for everything thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad input data or configuration. The CLI maps these to exit code 2,
// anything else derived from Error to exit code 1.
struct ValidationError : Error {
    using Error::Error;
};

}  // namespace newsrank
