#pragma once

#include <stdexcept>
#include <string>

namespace qdetect {

// Base of everything the library throws on purpose. The CLI maps the
// subclasses to exit codes (config 2, numerical 3, io 4).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the domain of a function (branch cut, k >= 1, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// Iteration or series did not settle; message carries the last state.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

// Invalid geometry / parameter set.
class ParameterError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace qdetect
