#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace se2n {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidGrid : public Error {
public:
    using Error::Error;
};

/// A point set is not closed under rotation by 2*pi/N. Carries the offending point.
class NotInvariant : public InvalidGrid {
public:
    NotInvariant(const std::string& what, double x, double y)
        : InvalidGrid(what), witness_x(x), witness_y(y) {}
    double witness_x;
    double witness_y;
};

/// The origin (or a zero frequency) has the whole rotation group as stabilizer.
class TrivialStabilizer : public InvalidGrid {
public:
    using InvalidGrid::InvalidGrid;
};

class ParseError : public Error {
public:
    using Error::Error;
};

class GridMismatch : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class InsufficientSample : public Error {
public:
    using Error::Error;
};

/// A Fourier-Bessel block is singular (or too close to it) for the requested solve.
class WellPosednessError : public Error {
public:
    WellPosednessError(const std::string& what, std::size_t bin, double condition)
        : Error(what), bin(bin), condition(condition) {}
    std::size_t bin;
    double condition;
};

}  // namespace se2n
