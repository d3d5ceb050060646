/**
 * @file error.hpp
 * @brief Exception types shared across the library
 */

#pragma once

#include <stdexcept>
#include <string>

namespace gvflow {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Two observations claim the same location with different values.
class ConflictError : public Error {
public:
    using Error::Error;
};

/// Feature that is reserved in the interface but not provided.
class UnsupportedError : public Error {
public:
    using Error::Error;
};

} // namespace gvflow
