#ifndef HAPT_ERROR_HPP
#define HAPT_ERROR_HPP

#include <stdexcept>
#include <string>

namespace hapt {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or missing input data (CLI exit code 3).
class DataError : public Error {
public:
    using Error::Error;
};

/// Invalid configuration or usage (CLI exit code 2).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Numerical breakdown, e.g. a non-positive Cholesky pivot.
class NumericError : public Error {
public:
    using Error::Error;
};

} // namespace hapt

#endif // HAPT_ERROR_HPP
