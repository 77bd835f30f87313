#include "modelspace/hardy.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

namespace modelspace
{

ComplexMatrix shift_matrix(Eigen::Index n)
{
    if (n < 1)
    {
        throw Error(ErrorCode::BadTruncation, "shift needs N >= 1");
    }
    ComplexMatrix s = ComplexMatrix::Zero(n, n);
    for (Eigen::Index k = 0; k + 1 < n; ++k)
    {
        s(k + 1, k) = 1.0;
    }
    return s;
}

ComplexMatrix toeplitz_matrix(const SymbolCoeffs& symbol, Eigen::Index n)
{
    if (n < 1)
    {
        throw Error(ErrorCode::BadTruncation, "Toeplitz matrix needs N >= 1");
    }
    ComplexMatrix t = ComplexMatrix::Zero(n, n);
    for (const auto& [m, value] : symbol)
    {
        if (std::abs(m) >= n)
        {
            throw Error(ErrorCode::IndexOutOfRange,
                        "symbol index " + std::to_string(m) +
                            " does not fit N = " + std::to_string(n));
        }
        for (Eigen::Index k = 0; k < n; ++k)
        {
            const Eigen::Index j = k + m;
            if (j >= 0 && j < n)
            {
                t(j, k) = value;
            }
        }
    }
    return t;
}

ComplexMatrix analytic_toeplitz_matrix(const CoeffVec& coeffs, Eigen::Index n)
{
    ComplexMatrix t = ComplexMatrix::Zero(n, n);
    const Eigen::Index len = std::min<Eigen::Index>(coeffs.size(), n);
    for (Eigen::Index k = 0; k < n; ++k)
    {
        for (Eigen::Index m = 0; m < len && k + m < n; ++m)
        {
            t(k + m, k) = coeffs(m);
        }
    }
    return t;
}

ComplexMatrix hankel_matrix(const CoeffVec& coeffs, Eigen::Index n)
{
    if (n < 1)
    {
        throw Error(ErrorCode::BadTruncation, "Hankel matrix needs N >= 1");
    }
    if (coeffs.size() < 2 * n)
    {
        throw Error(ErrorCode::InsufficientCoefficients,
                    "Hankel matrix of size " + std::to_string(n) + " needs " +
                        std::to_string(2 * n) + " coefficients, got " +
                        std::to_string(coeffs.size()));
    }
    ComplexMatrix h(n, n);
    for (Eigen::Index k = 0; k < n; ++k)
    {
        for (Eigen::Index j = 0; j < n; ++j)
        {
            h(j, k) = coeffs(j + k + 1);
        }
    }
    return h;
}

ComplexMatrix h2_asymptotic_block(const ComplexMatrix& t, Eigen::Index n)
{
    const Eigen::Index size = t.rows();
    if (t.cols() != size)
    {
        throw Error(ErrorCode::DimensionMismatch, "operator must be square");
    }
    if (n < 0 || n >= size)
    {
        throw Error(ErrorCode::BadIterationCount,
                    "iteration count " + std::to_string(n) +
                        " outside [0, " + std::to_string(size) + ")");
    }
    ComplexMatrix out = ComplexMatrix::Zero(size, size);
    const Eigen::Index keep = size - n;
    out.topLeftCorner(keep, keep) = t.bottomRightCorner(keep, keep);
    return out;
}

} // namespace modelspace
