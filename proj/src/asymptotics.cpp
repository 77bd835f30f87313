#include "modelspace/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

namespace modelspace
{

namespace
{

constexpr double kLogFloor = 1e-15;

ComplexMatrix reverse_both(const ComplexMatrix& m)
{
    return m.colwise().reverse().rowwise().reverse();
}

// Holds the complex Schur form S = U R U^* and solves the two Stein
// equations that make up M(X) = S^* X S - X and its adjoint.
class SteinSolver
{
public:
    explicit SteinSolver(const ComplexMatrix& shift)
        : schur_(shift, true),
          reversed_adjoint_(reverse_both(schur_.matrixT().adjoint()))
    {
        const auto& r = schur_.matrixT();
        const Eigen::Index d = r.rows();
        singular_ = false;
        for (Eigen::Index i = 0; i < d && !singular_; ++i)
        {
            for (Eigen::Index j = 0; j < d; ++j)
            {
                if (std::abs(std::conj(r(i, i)) * r(j, j) - 1.0) < 1e-14)
                {
                    singular_ = true;
                    break;
                }
            }
        }
    }

    bool singular() const { return singular_; }

    /// S^* X S - X = C
    ComplexMatrix solve(const ComplexMatrix& c) const
    {
        const ComplexMatrix& u = schur_.matrixU();
        const ComplexMatrix y = solve_upper(schur_.matrixT(), u.adjoint() * c * u);
        return u * y * u.adjoint();
    }

    /// S Y S^* - Y = C
    ComplexMatrix solve_adjoint(const ComplexMatrix& c) const
    {
        const ComplexMatrix& u = schur_.matrixU();
        const ComplexMatrix d = reverse_both(u.adjoint() * c * u);
        const ComplexMatrix y = reverse_both(solve_upper(reversed_adjoint_, d));
        return u * y * u.adjoint();
    }

private:
    // R^* Y R - Y = D for upper-triangular R, one column at a time:
    // (R_jj R^* - I) y_j = D_j - R^* sum_{m<j} y_m R_mj.
    static ComplexMatrix solve_upper(const ComplexMatrix& r, const ComplexMatrix& d)
    {
        const Eigen::Index n = r.rows();
        const ComplexMatrix r_adj = r.adjoint();
        ComplexMatrix y = ComplexMatrix::Zero(n, n);
        for (Eigen::Index j = 0; j < n; ++j)
        {
            Eigen::VectorXcd rhs = d.col(j);
            if (j > 0)
            {
                const Eigen::VectorXcd w = y.leftCols(j) * r.col(j).head(j);
                rhs -= r_adj * w;
            }
            ComplexMatrix lhs = r(j, j) * r_adj;
            lhs.diagonal().array() -= 1.0;
            y.col(j) = lhs.triangularView<Eigen::Lower>().solve(rhs);
        }
        return y;
    }

    Eigen::ComplexSchur<ComplexMatrix> schur_;
    ComplexMatrix reversed_adjoint_;
    bool singular_ = false;
};

Eigen::VectorXcd spectrum(const ComplexMatrix& m)
{
    Eigen::ComplexEigenSolver<ComplexMatrix> eig(m, false);
    return eig.eigenvalues();
}

} // namespace

DecayCurve make_decay_curve(const std::vector<double>& values,
                            DecayCurve::Kind kind)
{
    DecayCurve curve;
    curve.kind = kind;
    curve.entries.reserve(values.size());
    bool loggable = !values.empty();
    for (std::size_t i = 0; i < values.size(); ++i)
    {
        curve.entries.push_back({static_cast<int>(i), values[i]});
        if (!(values[i] >= kLogFloor))
        {
            loggable = false;
        }
    }

    const std::size_t begin = values.size() / 2;
    const std::size_t count = values.size() - begin;
    if (loggable && count >= 2)
    {
        double mean_n = 0.0;
        double mean_y = 0.0;
        for (std::size_t i = begin; i < values.size(); ++i)
        {
            mean_n += static_cast<double>(i);
            mean_y += std::log(values[i]);
        }
        mean_n /= static_cast<double>(count);
        mean_y /= static_cast<double>(count);
        double sxy = 0.0;
        double sxx = 0.0;
        for (std::size_t i = begin; i < values.size(); ++i)
        {
            const double dn = static_cast<double>(i) - mean_n;
            sxy += dn * (std::log(values[i]) - mean_y);
            sxx += dn * dn;
        }
        curve.fitted_rate = std::exp(sxy / sxx);
    }
    return curve;
}

std::vector<OperatorOnK> asymptotic_sequence(const OperatorOnK& a, int n_max)
{
    if (a.matrix.rows() != a.basis->d || a.matrix.cols() != a.basis->d)
    {
        throw Error(ErrorCode::DimensionMismatch,
                    "operator is " + std::to_string(a.matrix.rows()) + "x" +
                        std::to_string(a.matrix.cols()) + ", basis has d = " +
                        std::to_string(a.basis->d));
    }
    if (n_max < 1)
    {
        throw Error(ErrorCode::BadIterationCount, "n_max must be at least 1");
    }
    const ComplexMatrix s = compressed_shift(a.basis).matrix;
    std::vector<OperatorOnK> seq;
    seq.reserve(static_cast<std::size_t>(n_max) + 1);
    seq.push_back(a);
    for (int n = 1; n <= n_max; ++n)
    {
        seq.push_back({a.basis, s.adjoint() * seq.back().matrix * s});
    }
    return seq;
}

DecayCurve decay_curve(const OperatorOnK& a, int n_max)
{
    std::vector<double> values;
    for (const auto& an : asymptotic_sequence(a, n_max))
    {
        values.push_back(operator_norm(an.matrix));
    }
    return make_decay_curve(values, DecayCurve::Kind::operator_norm);
}

StrongProbeReport strong_probe(const OperatorOnK& a,
                               const std::vector<Eigen::VectorXcd>& probes,
                               int n_max)
{
    const auto seq = asymptotic_sequence(a, n_max);
    const ComplexMatrix s = compressed_shift(a.basis).matrix;

    StrongProbeReport report;
    report.adjoint_norm = operator_norm(a.matrix.adjoint());
    for (const auto& raw : probes)
    {
        if (raw.size() != a.dim())
        {
            throw Error(ErrorCode::DimensionMismatch,
                        "probe length differs from d");
        }
        Eigen::VectorXcd f = raw;
        if (f.norm() > 0.0)
        {
            f /= f.norm();
        }

        std::vector<double> sandwich;
        std::vector<double> orbit;
        Eigen::VectorXcd shifted = f;
        ProbeResult result;
        result.worst_excess = -std::numeric_limits<double>::infinity();
        for (int n = 0; n <= n_max; ++n)
        {
            const double lhs = (seq[n].matrix * f).norm();
            const double orbit_norm = shifted.norm();
            sandwich.push_back(lhs);
            orbit.push_back(orbit_norm);
            result.worst_excess =
                std::max(result.worst_excess, lhs - orbit_norm * report.adjoint_norm);
            shifted = s * shifted;
        }
        result.sandwich = make_decay_curve(sandwich, DecayCurve::Kind::vector_norm);
        result.shift_orbit = make_decay_curve(orbit, DecayCurve::Kind::vector_norm);
        result.bound_holds = result.worst_excess <= kProbeSlack;
        report.all_bounds_hold = report.all_bounds_hold && result.bound_holds;
        report.probes.push_back(std::move(result));
    }
    return report;
}

double fixed_point_sigma_min_dense(const ComplexMatrix& shift)
{
    const Eigen::Index d = shift.rows();
    // vec(S^* X S) = (S^T kron S^*) vec(X) for column-major vec.
    const ComplexMatrix s_adj = shift.adjoint();
    ComplexMatrix map(d * d, d * d);
    for (Eigen::Index q = 0; q < d; ++q)
    {
        for (Eigen::Index p = 0; p < d; ++p)
        {
            map.block(p * d, q * d, d, d) = shift(q, p) * s_adj;
        }
    }
    map -= ComplexMatrix::Identity(d * d, d * d);
    const Eigen::VectorXd sv = singular_values(map);
    return sv(sv.size() - 1);
}

double fixed_point_sigma_min_iterative(const ComplexMatrix& shift)
{
    const Eigen::Index d = shift.rows();
    const SteinSolver stein(shift);
    if (stein.singular())
    {
        return 0.0;
    }

    // Lanczos with full reorthogonalisation on (M^* M)^{-1} = M^{-1} M^{-*}.
    const auto apply = [&](const Eigen::VectorXcd& x) {
        const ComplexMatrix xm = Eigen::Map<const ComplexMatrix>(x.data(), d, d);
        const ComplexMatrix y = stein.solve(stein.solve_adjoint(xm));
        return Eigen::VectorXcd(Eigen::Map<const Eigen::VectorXcd>(y.data(), d * d));
    };

    const Eigen::Index dim = d * d;
    const Eigen::Index max_steps = std::min<Eigen::Index>(dim, 120);
    ComplexMatrix basis(dim, max_steps);
    std::vector<double> alpha;
    std::vector<double> beta;

    Eigen::VectorXcd v(dim);
    for (Eigen::Index i = 0; i < dim; ++i)
    {
        v(i) = Complex(1.0 + 0.37 * std::sin(1.0 + i), 0.21 * std::cos(2.0 * i));
    }
    v.normalize();

    double ritz = 0.0;
    for (Eigen::Index k = 0; k < max_steps; ++k)
    {
        basis.col(k) = v;
        Eigen::VectorXcd w = apply(v);
        alpha.push_back(v.dot(w).real());
        for (int pass = 0; pass < 2; ++pass)
        {
            w -= basis.leftCols(k + 1) * (basis.leftCols(k + 1).adjoint() * w);
        }

        Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(k + 1, k + 1);
        for (Eigen::Index i = 0; i <= k; ++i)
        {
            tri(i, i) = alpha[i];
            if (i > 0)
            {
                tri(i, i - 1) = tri(i - 1, i) = beta[i - 1];
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(tri, Eigen::EigenvaluesOnly);
        const double next = eig.eigenvalues().maxCoeff();
        const bool settled = k > 0 && std::abs(next - ritz) <= 1e-14 * next;
        ritz = next;

        const double b = w.norm();
        if (settled || b <= 1e-13 * ritz)
        {
            break;
        }
        beta.push_back(b);
        v = w / b;
    }
    return 1.0 / std::sqrt(ritz);
}

ComplexMatrix solve_stein(const ComplexMatrix& shift, const ComplexMatrix& rhs)
{
    const SteinSolver stein(shift);
    if (stein.singular())
    {
        throw Error(ErrorCode::DimensionMismatch,
                    "Stein equation is singular for this shift");
    }
    return stein.solve(rhs);
}

FixedPointReport fixed_point_gap(const BasisPtr& basis)
{
    if (basis->d > kMaxFixedPointDim)
    {
        throw Error(ErrorCode::TooLarge,
                    "d = " + std::to_string(basis->d) + " exceeds " +
                        std::to_string(kMaxFixedPointDim));
    }
    const ComplexMatrix s = compressed_shift(basis).matrix;
    FixedPointReport report;
    report.sigma_min = basis->d <= kDenseFixedPointDim
                           ? fixed_point_sigma_min_dense(s)
                           : fixed_point_sigma_min_iterative(s);
    report.unique_zero = report.sigma_min > kFixedPointTol;
    return report;
}

FeintuchSplit feintuch_split_h2(const ComplexMatrix& t, int n_star)
{
    const Eigen::Index n = t.rows();
    if (t.cols() != n)
    {
        throw Error(ErrorCode::DimensionMismatch, "operator must be square");
    }
    if (n_star < 0 || 2 * static_cast<Eigen::Index>(n_star) >= n)
    {
        throw Error(ErrorCode::BadIterationCount,
                    "need 0 <= 2 n_star < N, got n_star = " +
                        std::to_string(n_star) + ", N = " + std::to_string(n));
    }

    const ComplexMatrix shifted = h2_asymptotic_block(t, n_star);
    const Eigen::Index window = n - 2 * static_cast<Eigen::Index>(n_star);

    FeintuchSplit split;
    for (Eigen::Index m = -(window - 1); m <= window - 1; ++m)
    {
        // Diagonal m holds entries (k + m, k) with both indices in the window.
        const Eigen::Index first = std::max<Eigen::Index>(0, -m);
        const Eigen::Index last = std::min<Eigen::Index>(window, window - m);
        Complex sum(0.0, 0.0);
        for (Eigen::Index k = first; k < last; ++k)
        {
            sum += shifted(k + m, k);
        }
        const Complex mean = sum / static_cast<double>(last - first);
        double deviation = 0.0;
        for (Eigen::Index k = first; k < last; ++k)
        {
            deviation = std::max(deviation, std::abs(shifted(k + m, k) - mean));
        }
        split.symbol[static_cast<int>(m)] = mean;
        split.deviations[static_cast<int>(m)] = deviation;
        split.max_deviation = std::max(split.max_deviation, deviation);
    }

    split.toeplitz_part = toeplitz_matrix(split.symbol, n);
    split.compact_part = t - split.toeplitz_part;
    return split;
}

double hausdorff_distance(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b)
{
    if (a.size() == 0 || b.size() == 0)
    {
        return a.size() == b.size() ? 0.0 : std::numeric_limits<double>::infinity();
    }
    const auto directed = [](const Eigen::VectorXcd& from, const Eigen::VectorXcd& to) {
        double worst = 0.0;
        for (Eigen::Index i = 0; i < from.size(); ++i)
        {
            double best = std::numeric_limits<double>::infinity();
            for (Eigen::Index j = 0; j < to.size(); ++j)
            {
                best = std::min(best, std::abs(from(i) - to(j)));
            }
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(directed(a, b), directed(b, a));
}

UnitaryEquivReport unitary_equiv_check(const InnerFunctionSpec& spec,
                                       Eigen::Index n)
{
    const InnerFunctionSpec psi = reflect(spec);
    const BasisPtr theta_basis = n > 0 ? extract_basis(spec, n)
                                       : extract_basis(spec, choose_truncation(spec));
    const BasisPtr psi_basis = n > 0 ? extract_basis(psi, n)
                                     : extract_basis(psi, choose_truncation(psi));

    const ComplexMatrix s_theta = compressed_shift(theta_basis).matrix;
    const ComplexMatrix s_psi_adj = compressed_shift(psi_basis).matrix.adjoint();

    UnitaryEquivReport report;
    report.d_theta = theta_basis->d;
    report.d_psi = psi_basis->d;
    if (report.d_theta != report.d_psi)
    {
        report.singular_value_distance = std::numeric_limits<double>::infinity();
    }
    else
    {
        report.singular_value_distance =
            (singular_values(s_theta) - singular_values(s_psi_adj))
                .cwiseAbs()
                .maxCoeff();
    }
    if (spec.is_finite_blaschke())
    {
        report.eigenvalue_distance = hausdorff_distance(
            spectrum(s_theta), spectrum(s_psi_adj));
    }
    return report;
}

std::string_view to_string(Verdict v)
{
    return v == Verdict::decayed ? "decayed" : "stalled";
}

CompactnessScore compactness_score(const OperatorOnK& a, int n_max, double tol)
{
    CompactnessScore score;
    score.curve = decay_curve(a, n_max);
    score.final_norm = score.curve.final_value();
    score.fitted_rate = score.curve.fitted_rate;
    const double norm = operator_norm(a.matrix);
    score.verdict =
        score.final_norm <= tol * norm ? Verdict::decayed : Verdict::stalled;
    return score;
}

} // namespace modelspace
