///
/// \file hardy.hpp
///
/// Truncated H^2 in the monomial basis {1, z, ..., z^{N-1}}. Entry (j, k)
/// of every matrix is the coefficient of z^j in the image of z^k.
///
/// The shift is nilpotent at finite N, so the identities involving S^n
/// that hold on H^2 only survive on the top-left (N - n) x (N - n) block.
///
#ifndef MODELSPACE_HARDY_HPP
#define MODELSPACE_HARDY_HPP

#include <map>

#include "modelspace/types.hpp"

namespace modelspace
{

/// Fourier coefficients t_m of a symbol, keyed by m (negative allowed).
using SymbolCoeffs = std::map<int, Complex>;

/// Truncated unilateral shift: ones on the first subdiagonal.
ComplexMatrix shift_matrix(Eigen::Index n);

/// Entry (j, k) = t_{j-k}; unspecified coefficients are zero.
ComplexMatrix toeplitz_matrix(const SymbolCoeffs& symbol, Eigen::Index n);

/// Lower-triangular Toeplitz matrix of an analytic symbol given by its
/// first coefficients (missing ones are zero).
ComplexMatrix analytic_toeplitz_matrix(const CoeffVec& coeffs, Eigen::Index n);

/// Entry (j, k) = c_{j+k+1}; needs at least 2n coefficients.
ComplexMatrix hankel_matrix(const CoeffVec& coeffs, Eigen::Index n);

/// adjoint(S)^n T S^n, i.e. entry (j, k) = T_{j+n, k+n} on the surviving
/// block and zero elsewhere.
ComplexMatrix h2_asymptotic_block(const ComplexMatrix& t, Eigen::Index n);

} // namespace modelspace

#endif // MODELSPACE_HARDY_HPP
