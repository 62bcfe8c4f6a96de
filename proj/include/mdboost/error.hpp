#pragma once

#include <stdexcept>
#include <string>

namespace mdboost {

/// Raised for invalid data, invalid parameters and failed computations.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised for malformed command lines and configuration documents.
class UsageError : public Error {
public:
    using Error::Error;
};

} // namespace mdboost
