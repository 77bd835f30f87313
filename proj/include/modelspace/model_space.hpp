///
/// \file model_space.hpp
///
/// The model space K_Theta = H^2 minus Theta H^2, realised inside the
/// truncated Taylor basis of size N.
///
/// The orthogonal projection onto K_Theta is I - T T^*, where T is the
/// analytic Toeplitz matrix of Theta. At finite N this is exactly the
/// compression of the true projection to polynomials of degree < N, so its
/// eigenvalues cluster at 0 and 1 only when K_Theta is well approximated by
/// polynomials. Finite Blaschke products satisfy this with geometric error.
/// Singular inner functions do not, and the detected dimension then depends
/// on N.
///
#ifndef MODELSPACE_MODEL_SPACE_HPP
#define MODELSPACE_MODEL_SPACE_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "modelspace/inner_function.hpp"

namespace modelspace
{

inline constexpr Eigen::Index kMinTruncation = 64;
inline constexpr double kDefaultTailTol = 1e-24;
inline constexpr double kMaxEigGap = 0.1;
inline constexpr double kMaxKernelRadius = 0.9;

struct TruncationChoice
{
    Eigen::Index n = kMinTruncation;
    /// Estimated sum_{k >= n} |theta_k|^2.
    double estimated_tail = 0.0;
    bool converged = true;
    std::vector<std::string> warnings;
};

/// max(64, smallest N whose estimated coefficient tail energy is below
/// tail_tol). The tail beyond the computed coefficients is extrapolated
/// geometrically from the last two quarter windows.
TruncationChoice choose_truncation(const InnerFunctionSpec& spec,
                                   double tail_tol = kDefaultTailTol);

struct ModelSpaceBasis
{
    explicit ModelSpaceBasis(InnerFunctionSpec s) : spec(std::move(s)) {}

    InnerFunctionSpec spec;
    Eigen::Index n = 0;
    /// N x d, orthonormal columns. Lower trapezoidal: the QR step puts
    /// column k's first nonzero coefficient at z^k where possible.
    ComplexMatrix basis;
    Eigen::Index d = 0;
    /// max over the spectrum of P of min(|lambda|, |lambda - 1|)
    double eig_gap = 0.0;
    /// ||T^* T - I|| on the top-left (N - N/2) block
    double isometry_defect = 0.0;
    /// Theta coefficients 0 .. 2N, kept for kernels and the conjugation.
    CoeffVec theta;
    Eigen::VectorXd projection_eigenvalues;
    std::vector<std::string> warnings;
};

using BasisPtr = std::shared_ptr<const ModelSpaceBasis>;

/// Operator on K_Theta in basis coordinates.
struct OperatorOnK
{
    BasisPtr basis;
    ComplexMatrix matrix;

    Eigen::Index dim() const { return matrix.rows(); }
};

/// N x N matrix I - T T^*.
ComplexMatrix projection_matrix(const InnerFunctionSpec& spec, Eigen::Index n);

/// Throws TruncationInsufficient if eig_gap > 0.1 and EmptyModelSpace if no
/// eigenvalue exceeds the threshold.
BasisPtr extract_basis(const InnerFunctionSpec& spec, Eigen::Index n,
                       double threshold = 0.5);

/// extract_basis at the automatic truncation; truncation warnings are copied
/// into the basis.
BasisPtr extract_basis(const InnerFunctionSpec& spec,
                       const TruncationChoice& truncation,
                       double threshold = 0.5);

OperatorOnK compress(const ComplexMatrix& m, const BasisPtr& basis);

OperatorOnK compressed_shift(const BasisPtr& basis);

/// Coordinates of a Taylor vector, adjoint(B) c.
Eigen::VectorXcd to_coordinates(const ModelSpaceBasis& basis, const CoeffVec& c);

/// Taylor coefficients of the element with the given coordinates, B x.
CoeffVec from_coordinates(const ModelSpaceBasis& basis,
                          const Eigen::VectorXcd& coords);

/// sum_n c_n z^n.
Complex evaluate_series(const CoeffVec& c, Complex z);

struct KernelVector
{
    CoeffVec coeffs;
    Eigen::VectorXcd coords;
    /// |lambda|^N / (1 - |lambda|), the size of the dropped geometric tail.
    double tail_bound = 0.0;
};

/// k_lambda(z) = (1 - conj(Theta(lambda)) Theta(z)) / (1 - conj(lambda) z).
KernelVector kernel_vector(const BasisPtr& basis, Complex lambda);

/// (Theta(z) - Theta(lambda)) / (z - lambda) by synthetic division.
KernelVector conjugate_kernel_vector(const BasisPtr& basis, Complex lambda);

/// Antilinear conjugation f -> Gamma conj(f) with Gamma the Hankel matrix of
/// the Theta coefficients. f must lie within 1e-8 of the basis range.
CoeffVec conjugation_apply(const BasisPtr& basis, const CoeffVec& f);

/// Distance from the basis range, ||f - B B^* f||.
double distance_from_range(const ModelSpaceBasis& basis, const CoeffVec& f);

struct DefectReport
{
    /// ||k_0||^2 = 1 - |Theta(0)|^2 for the unnormalised kernel
    double k0_norm_sq = 0.0;
    /// ||S S^* - (I - k_0 k_0^*)||
    double r1 = 0.0;
    /// residuals[n-1] = ||Q_n - sum_{j<n} S^j k_0 (S^j k_0)^*||
    std::vector<double> residuals;
    /// numerical rank of Q_n = I - S^n S^{*n} (singular values > 1e-8)
    std::vector<Eigen::Index> ranks;
};

/// Checks the defect identities for n = 1 .. n_max (n_max = 0 means d).
DefectReport defect_report(const BasisPtr& basis, Eigen::Index n_max = 0);

/// Basis file: one JSON header line {spec, N, d, eig_gap, isometry_defect}
/// followed by B in the matrix CSV format.
std::string serialize_basis(const ModelSpaceBasis& basis);
BasisPtr deserialize_basis(const std::string& text);

} // namespace modelspace

#endif // MODELSPACE_MODEL_SPACE_HPP
