#ifndef CVDISTILL_ERRORS_HPP
#define CVDISTILL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cvdistill {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// An argument is outside its mathematical domain (T outside (0,1], negative squeezing, ...).
class DomainError : public Error {
public:
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

/// The channel decomposition (r, T) does not exist (C = 1 with S != 0 has no
/// finite-squeezing representation).
class DegenerateDecompositionError : public Error {
public:
    explicit DegenerateDecompositionError(const std::string& msg) : Error(msg) {}
};

/// A matrix that must be inverted is singular; signals an unphysical
/// operation/state pairing.
class SingularMatrixError : public Error {
public:
    explicit SingularMatrixError(const std::string& msg) : Error(msg) {}
};

/// A conditional operation produced a state with trace below the configured
/// floor: the measurement outcome is (numerically) impossible.
class ZeroWeightError : public Error {
public:
    ZeroWeightError(const std::string& msg, double weight)
        : Error(msg), weight_(weight) {}
    double weight() const { return weight_; }
private:
    double weight_;
};

/// The Fock-space cutoff is too small for the requested state or pipeline.
class CutoffError : public Error {
public:
    explicit CutoffError(const std::string& msg) : Error(msg) {}
};

/// Density-matrix elements that must vanish for symmetric inputs exceed
/// tolerance: the input left the symmetric state family.
class SymmetryViolationError : public Error {
public:
    explicit SymmetryViolationError(const std::string& msg) : Error(msg) {}
};

/// An iterative solver (fixed-point match, q tuning) failed to converge or
/// found no root inside its bracket. The message carries diagnostics.
class ConvergenceError : public Error {
public:
    explicit ConvergenceError(const std::string& msg) : Error(msg) {}
};

}  // namespace cvdistill

#endif
