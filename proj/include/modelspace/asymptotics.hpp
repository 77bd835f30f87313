///
/// \file asymptotics.hpp
///
/// Diagnostics for the sandwich sequence A_n = adjoint(S)^n A S^n of an
/// operator A on K_Theta, where S is the compressed shift.
///
/// At finite dimension every operator is compact, so A_n always tends to
/// zero. The quantities here measure how fast it does so within a budget;
/// they do not decide compactness.
///
#ifndef MODELSPACE_ASYMPTOTICS_HPP
#define MODELSPACE_ASYMPTOTICS_HPP

#include <optional>
#include <string>
#include <vector>

#include "modelspace/hardy.hpp"
#include "modelspace/model_space.hpp"

namespace modelspace
{

struct DecayPoint
{
    int n;
    double value;
};

struct DecayCurve
{
    enum class Kind
    {
        operator_norm,
        vector_norm
    };

    std::vector<DecayPoint> entries;
    Kind kind = Kind::operator_norm;
    /// exp of the least-squares slope of log(value) against n over the last
    /// half of the curve; absent if any value is below 1e-15.
    std::optional<double> fitted_rate;

    double final_value() const { return entries.empty() ? 0.0 : entries.back().value; }
};

/// Builds the curve from raw values at n = 0, 1, ... and fits the rate.
DecayCurve make_decay_curve(const std::vector<double>& values,
                            DecayCurve::Kind kind);

/// A_0 .. A_{n_max}, each obtained from the previous by one conjugation.
std::vector<OperatorOnK> asymptotic_sequence(const OperatorOnK& a, int n_max);

DecayCurve decay_curve(const OperatorOnK& a, int n_max);

struct ProbeResult
{
    DecayCurve sandwich;    ///< n -> ||A_n f||
    DecayCurve shift_orbit; ///< n -> ||S^n f||
    /// max over n of ||A_n f|| - ||S^n f|| ||adjoint(A)||; <= 1e-10 passes
    double worst_excess = 0.0;
    bool bound_holds = true;
};

struct StrongProbeReport
{
    std::vector<ProbeResult> probes;
    double adjoint_norm = 0.0;
    bool all_bounds_hold = true;
};

inline constexpr double kProbeSlack = 1e-10;

/// Probes are normalised on entry (zero probes are left as they are).
StrongProbeReport strong_probe(const OperatorOnK& a,
                               const std::vector<Eigen::VectorXcd>& probes,
                               int n_max);

struct FixedPointReport
{
    /// smallest singular value of X -> adjoint(S) X S - X
    double sigma_min = 0.0;
    bool unique_zero = false;
};

inline constexpr double kFixedPointTol = 1e-8;
inline constexpr Eigen::Index kMaxFixedPointDim = 512;
inline constexpr Eigen::Index kDenseFixedPointDim = 16;

FixedPointReport fixed_point_gap(const BasisPtr& basis);

/// Smallest singular value from the explicit d^2 x d^2 Kronecker matrix.
double fixed_point_sigma_min_dense(const ComplexMatrix& shift);

/// Same quantity by Lanczos on the inverse normal operator, with each
/// inverse applied through a Schur-form Stein solve.
double fixed_point_sigma_min_iterative(const ComplexMatrix& shift);

/// Solves adjoint(S) X S - X = C.
ComplexMatrix solve_stein(const ComplexMatrix& shift, const ComplexMatrix& rhs);

struct FeintuchSplit
{
    ComplexMatrix toeplitz_part;
    ComplexMatrix compact_part;
    SymbolCoeffs symbol;
    /// per diagonal m: max |entry - diagonal mean| over the averaged window
    std::map<int, double> deviations;
    double max_deviation = 0.0;
};

/// Estimates a Toeplitz part from the n_star-shifted block of T by averaging
/// its diagonals over the leading (N - 2 n_star) window; K = T - T1.
FeintuchSplit feintuch_split_h2(const ComplexMatrix& t, int n_star);

struct UnitaryEquivReport
{
    Eigen::Index d_theta = 0;
    Eigen::Index d_psi = 0;
    /// max |sigma_i(S_Theta) - sigma_i(adjoint(S_Psi))| over sorted lists
    double singular_value_distance = 0.0;
    /// Hausdorff distance of the spectra; finite Blaschke specs only
    std::optional<double> eigenvalue_distance;
};

/// Compares S_Theta with adjoint(S_Psi), Psi(z) = conj(Theta(conj z)).
/// n = 0 picks the automatic truncation for each function.
UnitaryEquivReport unitary_equiv_check(const InnerFunctionSpec& spec,
                                       Eigen::Index n = 0);

/// max(max_a min_b |a - b|, max_b min_a |a - b|).
double hausdorff_distance(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b);

enum class Verdict
{
    decayed,
    stalled
};

std::string_view to_string(Verdict v);

struct CompactnessScore
{
    double final_norm = 0.0;
    std::optional<double> fitted_rate;
    Verdict verdict = Verdict::stalled;
    DecayCurve curve;
};

inline constexpr double kDefaultDecayTol = 1e-6;

/// decayed when the last norm is at most tol * ||A||.
CompactnessScore compactness_score(const OperatorOnK& a, int n_max,
                                   double tol = kDefaultDecayTol);

} // namespace modelspace

#endif // MODELSPACE_ASYMPTOTICS_HPP
