///
/// \file types.hpp
///
/// Shared numeric aliases and the library error type.
///
#ifndef MODELSPACE_TYPES_HPP
#define MODELSPACE_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Core>

namespace modelspace
{

using Complex = std::complex<double>;

/// Truncated H^2 element: entry n is the coefficient of z^n.
using CoeffVec = Eigen::VectorXcd;

/// Dense complex matrix. Column k is the image of the k-th basis vector.
using ComplexMatrix = Eigen::MatrixXcd;

enum class ErrorCode
{
    ZeroOnBoundary,
    NotUnimodular,
    EmptySpec,
    NonPositiveMass,
    BadAngle,
    OutsideDisk,
    BadRadius,
    BadGridSize,
    BadTruncation,
    IndexOutOfRange,
    InsufficientCoefficients,
    BadIterationCount,
    TruncationInsufficient,
    EmptyModelSpace,
    DimensionMismatch,
    LambdaTooLarge,
    NotInModelSpace,
    TooLarge,
    ParseError,
    ValidationError,
    IoError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error
{
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what),
          code_(code)
    {
    }

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Largest singular value.
double operator_norm(const ComplexMatrix& m);

/// Singular values in descending order.
Eigen::VectorXd singular_values(const ComplexMatrix& m);

} // namespace modelspace

#endif // MODELSPACE_TYPES_HPP
