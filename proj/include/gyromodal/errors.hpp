#pragma once

#include <stdexcept>
#include <string>

namespace gyromodal {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operands have incompatible sizes.
class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// A or C deviates from symmetry beyond tolerance.
class NotSymmetric : public Error {
public:
    using Error::Error;
};

/// B deviates from antisymmetry beyond tolerance.
class NotAntisymmetric : public Error {
public:
    using Error::Error;
};

/// A, C (or a derived Gram matrix) fails the positive-definiteness test.
class NotPositiveDefinite : public Error {
public:
    using Error::Error;
};

/// A user-supplied callable threw during evaluation.
class EvaluationFailure : public Error {
public:
    using Error::Error;
};

/// The velocity Jacobian of the generalized forces is not antisymmetric,
/// or the forces do work along velocities.
class ForceNotGyroscopic : public Error {
public:
    using Error::Error;
};

/// The supplied point is not a valid equilibrium of the model.
class NotAnEquilibrium : public Error {
public:
    using Error::Error;
};

/// A factorization hit a singular matrix (defensive; unreachable for
/// validated systems).
class SingularMatrix : public Error {
public:
    using Error::Error;
};

/// The spectrum is not purely imaginary: the linearization does not
/// describe stable oscillations.
class NotOscillatory : public Error {
public:
    using Error::Error;
};

/// An iterative eigen/orthonormalization step failed to converge.
class ConvergenceFailure : public Error {
public:
    using Error::Error;
};

/// Numerical null-space dimension disagrees with the spectral multiplicity.
class KernelDimensionMismatch : public Error {
public:
    using Error::Error;
};

/// A vector pair (or stacked vector) violates the required block structure.
class StructureViolation : public Error {
public:
    using Error::Error;
};

/// The state overflowed during integration.
class NonFinite : public Error {
public:
    using Error::Error;
};

/// Malformed input file (JSON syntax or schema).
class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace gyromodal
