#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace pumped {

/// Base class of every error thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Mismatched matrix/vector dimensions.
struct DimensionError : Error {
    using Error::Error;
};

/// A linear system whose matrix is singular to working tolerance.
struct SingularMatrixError : Error {
    SingularMatrixError(const std::string& what, std::size_t deficiency)
        : Error(what), rank_deficiency(deficiency) {}
    std::size_t rank_deficiency;
};

/// Iterative eigen computation exhausted its budget without converging.
struct ConvergenceError : Error {
    using Error::Error;
};

/// The generator lacks a complete eigenbasis (cluster Gram matrix singular).
struct DefectiveMatrixError : Error {
    using Error::Error;
};

/// An eigenvalue with nonnegative real part; the mode does not decay.
struct NonDecayingModeError : Error {
    NonDecayingModeError(const std::string& what, std::complex<double> lambda)
        : Error(what), eigenvalue(lambda) {}
    std::complex<double> eigenvalue;
};

/// One or more model invariants failed; each entry names a constraint.
struct ValidationError : Error {
    ValidationError(const std::string& what, std::vector<std::string> failed)
        : Error(what), failures(std::move(failed)) {}
    std::vector<std::string> failures;
};

/// The generator annihilates a nonzero state: a decoupled subspace with no
/// decay channel, into which pumping would accumulate without bound.
struct TrappedSubspaceError : Error {
    using Error::Error;
};

/// Norm blow-up detected during direct time integration.
struct InstabilityError : Error {
    using Error::Error;
};

/// The metric quadratic form produced a value that is not real positive.
struct MetricCorruptionError : Error {
    using Error::Error;
};

/// Relaxation outside the class a single-trajectory ensemble can represent.
struct UnsupportedRelaxationError : Error {
    using Error::Error;
};

/// A pumped level with no exit channel; populations grow without bound.
struct UnboundedGrowthError : Error {
    using Error::Error;
};

/// Argument outside a formula's domain of validity.
struct DomainError : Error {
    using Error::Error;
};

/// Malformed configuration input; line is 1-based, 0 when not applicable.
struct ConfigError : Error {
    ConfigError(const std::string& what, int line_number = 0)
        : Error(what), line(line_number) {}
    int line;
};

}  // namespace pumped
