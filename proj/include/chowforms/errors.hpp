#pragma once
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace chowforms {

// Base class for every error thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Failure modes that higher-level algorithms treat as a legitimate
// "no answer from this attempt" outcome (e.g. the decomposition driver
// retries with a fresh coordinate change when one of these surfaces).
struct ComputationUndefined : Error {
    using Error::Error;
};

struct ZeroPolynomialError : ComputationUndefined {
    ZeroPolynomialError() : ComputationUndefined("operation needs a nonzero polynomial") {}
};

struct BothZeroError : ComputationUndefined {
    BothZeroError() : ComputationUndefined("gcd(0, 0) is undefined") {}
};

struct NotDivisibleError : ComputationUndefined {
    NotDivisibleError() : ComputationUndefined("exact division left a nonzero remainder") {}
};

struct DivisionByZeroError : ComputationUndefined {
    DivisionByZeroError() : ComputationUndefined("division by zero") {}
};

struct ZeroLeadingCoefficientError : ComputationUndefined {
    ZeroLeadingCoefficientError()
        : ComputationUndefined("polynomial has degree zero in the chosen variable") {}
};

struct NotNormalPositionError : ComputationUndefined {
    NotNormalPositionError()
        : ComputationUndefined("form is not in normal position; cannot normalize") {}
};

struct DegenerateAlphaError : ComputationUndefined {
    DegenerateAlphaError()
        : ComputationUndefined("evaluation point degenerates the parametrization; resample") {}
};

// Undefined outcome inside the decomposition loop, tagged with the loop
// position (equation index i, dimension k, inner separation index l; -1
// where not applicable).
struct UndefinedError : ComputationUndefined {
    int i, k, l;
    UndefinedError(int i_, int k_, int l_, const std::string& what_)
        : ComputationUndefined("undefined at (i=" + std::to_string(i_) + ", k=" +
                               std::to_string(k_) + ", l=" + std::to_string(l_) + "): " + what_),
          i(i_), k(k_), l(l_) {}
};

// Contract violations: the caller passed arguments outside an operation's
// domain.  These are never retried.
struct DegreeExceedsTargetError : Error {
    DegreeExceedsTargetError() : Error("degree exceeds homogenization target") {}
};

struct DuplicatePointError : Error {
    DuplicatePointError() : Error("point list contains a repeated point") {}
};

struct SingularMatrixError : Error {
    SingularMatrixError() : Error("matrix is singular") {}
};

struct NotPAdmissibleError : Error {
    NotPAdmissibleError() : Error("a coefficient denominator vanishes modulo p") {}
    explicit NotPAdmissibleError(std::uint64_t p)
        : Error("a coefficient denominator vanishes modulo " + std::to_string(p)) {}
};

struct EvenPrimeError : Error {
    EvenPrimeError() : Error("p = 2 is rejected: the certified modulus is always even") {}
};

struct BadPrimeModulusError : Error {
    using Error::Error;
};

struct RetriesExhaustedError : Error {
    using Error::Error;
};

struct UnknownKindError : Error {
    using Error::Error;
};

struct ParseError : Error {
    std::size_t line, column;
    std::string message;  // bare text, without the position prefix
    ParseError(std::size_t line_, std::size_t column_, const std::string& what_)
        : Error("parse error at " + std::to_string(line_) + ":" + std::to_string(column_) +
                ": " + what_),
          line(line_), column(column_), message(what_) {}
};

struct InputError : Error {
    using Error::Error;
};

}  // namespace chowforms
