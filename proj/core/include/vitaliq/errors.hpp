// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vitaliq {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument or configuration value is outside its valid domain.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Peak-valley calibration found fewer than one peak and one valley.
class InsufficientExtrema : public Error {
public:
    using Error::Error;
};

/// Point scatter is collinear or otherwise unusable for a circle fit.
class DegenerateGeometry : public Error {
public:
    using Error::Error;
};

/// The quadrature pair carries no usable phase information.
class DegenerateQuadrature : public Error {
public:
    using Error::Error;
};

/// Malformed input file; carries the 1-based line number (0 when not tied to a line).
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line);

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

} // namespace vitaliq
