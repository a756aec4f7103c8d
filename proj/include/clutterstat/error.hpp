#pragma once

#include <stdexcept>
#include <string>

namespace clutterstat {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Input value outside the mathematical domain of an operation
/// (negative amplitude, non-positive sample where logs are taken, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Data carries no usable information for the requested estimate
/// (all samples equal, zero variance, all-zero amplitudes).
class DegenerateDataError : public Error {
public:
    using Error::Error;
};

/// An iterative estimate ran out of iterations. Carries the last iterate
/// so callers can inspect how far the solver got.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& msg, double last_iterate, int iterations)
        : Error(msg), last_iterate_(last_iterate), iterations_(iterations) {}

    double last_iterate() const noexcept { return last_iterate_; }
    int iterations() const noexcept { return iterations_; }

private:
    double last_iterate_;
    int iterations_;
};

/// The likelihood has no finite maximizer (e.g. identical samples push the
/// Weibull shape to infinity).
class DivergenceError : public Error {
public:
    using Error::Error;
};

/// A file does not follow the expected layout (bad magic, missing sentinel,
/// unparseable field).
class FormatError : public Error {
public:
    using Error::Error;
};

/// A payload is shorter than its header promises.
class LengthError : public Error {
public:
    using Error::Error;
};

/// Coordinates or windows fall outside an image, or shapes disagree.
class BoundsError : public Error {
public:
    using Error::Error;
};

/// The requested model family is not supported by this operation.
class UnsupportedModelError : public Error {
public:
    using Error::Error;
};

/// Filesystem-level failure (cannot open, cannot write).
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace clutterstat
