#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace unisphere {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class BadShape : public Error {
public:
    using Error::Error;
};

/// A row whose norm is below 1e-12 cannot be projected onto the sphere.
class ZeroRow : public Error {
public:
    ZeroRow(std::size_t row, const std::string& what) : Error(what), row_(row) {}
    std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

class NotUnit : public Error {
public:
    NotUnit(std::size_t row, const std::string& what) : Error(what), row_(row) {}
    std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

class NotOrthogonal : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class BadTail : public Error {
public:
    using Error::Error;
};

class CalibrationUnavailable : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class InRegimeError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// Carries the offending field (JSON) or line (CSV) in its message.
class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace unisphere
