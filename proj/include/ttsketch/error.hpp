#pragma once

#include <stdexcept>
#include <string>

namespace ttsketch {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Mode set empty, unsorted, duplicated or outside [0, order).
class InvalidModeSet : public Error {
public:
    using Error::Error;
};

/// Dimensions that do not fit together, or a dense shape too large to allocate.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// Paired contraction modes with different extents.
class ContractionShapeError : public ShapeError {
public:
    using ShapeError::ShapeError;
};

/// NaN or infinity handed to a factorization.
class NumericInputError : public Error {
public:
    using Error::Error;
};

/// Rank tuple of the wrong length, zero entries, or exceeding what the shape admits.
class RankError : public Error {
public:
    using Error::Error;
};

/// Argument outside the mathematical domain of a formula or generator.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Quantity that is undefined for the given input (e.g. relative error of a zero tensor).
class UndefinedError : public Error {
public:
    using Error::Error;
};

/// Malformed tensor file or CSV output failure.
class FormatError : public Error {
public:
    using Error::Error;
};

}  // namespace ttsketch
