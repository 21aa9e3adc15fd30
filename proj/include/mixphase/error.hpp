#pragma once

#include <stdexcept>
#include <string>

namespace mixphase {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A spectral bin has (numerically) zero magnitude, so the complex log is singular.
/// This means a zero of X(z) sits on the sampled unit-circle grid.
class ZeroBinError : public Error {
public:
    ZeroBinError(std::size_t bin, double magnitude)
        : Error("zero-magnitude spectral bin " + std::to_string(bin) +
                " (|X| = " + std::to_string(magnitude) + ")"),
          bin_(bin) {}
    std::size_t bin() const noexcept { return bin_; }

private:
    std::size_t bin_;
};

/// Phase unwrapping produced a non-real cepstrum.
class UnwrapError : public Error {
public:
    UnwrapError(const std::string& what, double residue) : Error(what), residue_(residue) {}
    double residue() const noexcept { return residue_; }

private:
    double residue_;
};

/// The polynomial root finder did not converge.
class RootFinderError : public Error {
public:
    RootFinderError(const std::string& what, double residual) : Error(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// No solution for the implicit LF-model constants.
class ModelError : public Error {
public:
    using Error::Error;
};

}  // namespace mixphase
