#pragma once

#include <stdexcept>
#include <string>

namespace blowuplab {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Two coordinates (or carrying capacities) are closer than the
/// relative separation floor; weights/residues would be meaningless.
class SeparationViolation : public Error {
public:
    explicit SeparationViolation(const std::string& what) : Error(what) {}
};

/// Input lies outside the operation's stated domain.
class DomainViolation : public Error {
public:
    explicit DomainViolation(const std::string& what) : Error(what) {}
};

/// Evaluation point coincides with (or sits on the wrong side of) a pole.
class PoleViolation : public Error {
public:
    explicit PoleViolation(const std::string& what) : Error(what) {}
};

/// Adaptive quadrature exhausted its panel budget before reaching tolerance.
class QuadratureFailure : public Error {
public:
    explicit QuadratureFailure(const std::string& what) : Error(what) {}
};

/// ODE step size collapsed before the horizon or escape threshold.
class StiffFailure : public Error {
public:
    explicit StiffFailure(const std::string& what) : Error(what) {}
};

/// Rejection sampling failed to produce a separated vector.
class SamplingExhausted : public Error {
public:
    explicit SamplingExhausted(const std::string& what) : Error(what) {}
};

/// Some base 1+x_i is negative with a non-integer exponent a_i.
class UndefinedBaseError : public Error {
public:
    explicit UndefinedBaseError(const std::string& what) : Error(what) {}
};

/// Some base 1+x_i vanishes with exponent a_i <= 0.
class IllDefinedZeroPowError : public Error {
public:
    explicit IllDefinedZeroPowError(const std::string& what) : Error(what) {}
};

} // namespace blowuplab
