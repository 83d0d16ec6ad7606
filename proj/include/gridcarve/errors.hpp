#pragma once

#include <stdexcept>
#include <string>

namespace gridcarve {

// Base of every error thrown by this library. The CLI maps the concrete
// types onto distinct exit codes (see tools/).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Expression text could not be parsed; position() is a 0-based byte offset
// into the source string.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t pos)
        : Error(msg + " (at position " + std::to_string(pos) + ")"), pos_(pos) {}
    std::size_t position() const { return pos_; }

private:
    std::size_t pos_;
};

// Expression evaluated outside its domain (division by zero, sqrt of a
// negative, non-finite result).
class EvalError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class GeometryError : public Error {
public:
    using Error::Error;
};

class MeshError : public Error {
public:
    using Error::Error;
};

class SolveError : public Error {
public:
    using Error::Error;
};

class TimestepError : public Error {
public:
    using Error::Error;
};

} // namespace gridcarve
