#include "modelspace/model_space.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <json.hpp>

#include "modelspace/hardy.hpp"
#include "modelspace/io.hpp"
#include "modelspace/spec_json.hpp"

namespace modelspace
{

namespace
{

constexpr Eigen::Index kMaxProbeLength = 4096;
constexpr double kRangeTol = 1e-8;
constexpr double kRankTol = 1e-8;

void require_kernel_point(Complex lambda)
{
    if (!(std::abs(lambda) <= kMaxKernelRadius))
    {
        throw Error(ErrorCode::LambdaTooLarge,
                    "|lambda| = " + std::to_string(std::abs(lambda)) +
                        " exceeds " + std::to_string(kMaxKernelRadius));
    }
}

double max_abs(const CoeffVec& c, Eigen::Index begin, Eigen::Index end)
{
    double m = 0.0;
    for (Eigen::Index i = begin; i < end; ++i)
    {
        m = std::max(m, std::abs(c(i)));
    }
    return m;
}

ComplexMatrix hermitian_part(const ComplexMatrix& m)
{
    return 0.5 * (m + m.adjoint());
}

Eigen::Index numerical_rank(const ComplexMatrix& m)
{
    const Eigen::VectorXd sv = singular_values(m);
    return static_cast<Eigen::Index>((sv.array() > kRankTol).count());
}

} // namespace

TruncationChoice choose_truncation(const InnerFunctionSpec& spec,
                                   double tail_tol)
{
    TruncationChoice choice;
    choice.converged = false;
    CoeffVec theta;
    for (Eigen::Index probe = 2 * kMinTruncation; probe <= kMaxProbeLength;
         probe *= 2)
    {
        theta = taylor_coefficients(spec, probe);
        const Eigen::Index quarter = probe / 4;
        const double older = max_abs(theta, probe - 2 * quarter, probe - quarter);
        const double recent = max_abs(theta, probe - quarter, probe);

        double beyond = 0.0;
        if (recent > 0.0)
        {
            if (older == 0.0)
            {
                continue;
            }
            const double ratio =
                std::pow(recent / older, 1.0 / static_cast<double>(quarter));
            if (!(ratio < 0.999))
            {
                continue;
            }
            beyond = recent * recent * ratio * ratio / (1.0 - ratio * ratio);
        }
        if (beyond >= tail_tol)
        {
            continue;
        }

        // Smallest N whose suffix energy plus the extrapolated tail is small.
        double suffix = beyond;
        Eigen::Index n = probe;
        while (n > 0 && suffix + std::norm(theta(n - 1)) < tail_tol)
        {
            suffix += std::norm(theta(n - 1));
            --n;
        }
        choice.n = std::max(kMinTruncation, n);
        choice.estimated_tail = suffix;
        choice.converged = true;
        break;
    }

    if (!choice.converged)
    {
        choice.n = kMinTruncation;
        choice.estimated_tail =
            theta.tail(theta.size() - kMinTruncation).squaredNorm();
    }

    if (!choice.converged)
    {
        choice.warnings.push_back(
            "coefficient tail does not decay geometrically; falling back to N = " +
            std::to_string(choice.n));
    }
    if (!spec.is_finite_blaschke())
    {
        choice.warnings.push_back(
            "singular inner factor: K_Theta is infinite dimensional and the "
            "detected dimension depends on the truncation N");
    }
    return choice;
}

ComplexMatrix projection_matrix(const InnerFunctionSpec& spec, Eigen::Index n)
{
    if (n < 2)
    {
        throw Error(ErrorCode::BadTruncation, "projection needs N >= 2");
    }
    const ComplexMatrix t = analytic_toeplitz_matrix(taylor_coefficients(spec, n), n);
    ComplexMatrix p = ComplexMatrix::Identity(n, n);
    p.noalias() -= t * t.adjoint();
    return hermitian_part(p);
}

BasisPtr extract_basis(const InnerFunctionSpec& spec, Eigen::Index n,
                       double threshold)
{
    if (n < 2)
    {
        throw Error(ErrorCode::BadTruncation, "basis needs N >= 2");
    }
    auto out = std::make_shared<ModelSpaceBasis>(spec);
    out->n = n;
    out->theta = taylor_coefficients(spec, 2 * n + 1);

    const ComplexMatrix t = analytic_toeplitz_matrix(out->theta, n);
    ComplexMatrix p = ComplexMatrix::Identity(n, n);
    p.noalias() -= t * t.adjoint();
    p = hermitian_part(p);

    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(p);
    out->projection_eigenvalues = eig.eigenvalues();
    const Eigen::VectorXd& values = out->projection_eigenvalues;

    out->eig_gap = 0.0;
    for (Eigen::Index i = 0; i < values.size(); ++i)
    {
        out->eig_gap = std::max(out->eig_gap,
                                std::min(std::abs(values(i)), std::abs(values(i) - 1.0)));
    }

    const Eigen::Index keep = n - n / 2;
    ComplexMatrix gram = t.adjoint() * t;
    gram -= ComplexMatrix::Identity(n, n);
    out->isometry_defect = operator_norm(gram.topLeftCorner(keep, keep));

    if (out->eig_gap > kMaxEigGap)
    {
        throw Error(ErrorCode::TruncationInsufficient,
                    "projection spectrum is " + std::to_string(out->eig_gap) +
                        " away from {0, 1} at N = " + std::to_string(n) +
                        " (limit " + std::to_string(kMaxEigGap) + ")");
    }

    std::vector<Eigen::Index> kept;
    for (Eigen::Index i = values.size() - 1; i >= 0; --i)
    {
        if (values(i) > threshold)
        {
            kept.push_back(i);
        }
    }
    out->d = static_cast<Eigen::Index>(kept.size());
    if (out->d == 0)
    {
        throw Error(ErrorCode::EmptyModelSpace, "no eigenvalue above threshold");
    }

    ComplexMatrix range(n, out->d);
    for (Eigen::Index c = 0; c < out->d; ++c)
    {
        range.col(c) = eig.eigenvectors().col(kept[c]);
    }

    // Canonical frame: QR of adjoint(range) gives adjoint(B) upper trapezoidal.
    Eigen::HouseholderQR<ComplexMatrix> qr(range.adjoint());
    ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(out->d, out->d);
    const ComplexMatrix r = q.adjoint() * range.adjoint();
    for (Eigen::Index c = 0; c < out->d; ++c)
    {
        const Complex pivot = r(c, std::min(c, n - 1));
        if (std::abs(pivot) > 0.0)
        {
            q.col(c) *= pivot / std::abs(pivot);
        }
    }
    out->basis = range * q;

    if (!spec.is_finite_blaschke())
    {
        out->warnings.push_back(
            "singular inner factor: detected dimension d = " +
            std::to_string(out->d) + " depends on the truncation N = " +
            std::to_string(n));
    }
    return out;
}

BasisPtr extract_basis(const InnerFunctionSpec& spec,
                       const TruncationChoice& truncation, double threshold)
{
    auto built = extract_basis(spec, truncation.n, threshold);
    auto copy = std::make_shared<ModelSpaceBasis>(*built);
    std::vector<std::string> warnings = truncation.warnings;
    for (const auto& w : copy->warnings)
    {
        if (std::find(warnings.begin(), warnings.end(), w) == warnings.end())
        {
            warnings.push_back(w);
        }
    }
    copy->warnings = std::move(warnings);
    return copy;
}

OperatorOnK compress(const ComplexMatrix& m, const BasisPtr& basis)
{
    if (m.rows() != basis->n || m.cols() != basis->n)
    {
        throw Error(ErrorCode::DimensionMismatch,
                    "operator is " + std::to_string(m.rows()) + "x" +
                        std::to_string(m.cols()) + ", basis has N = " +
                        std::to_string(basis->n));
    }
    return {basis, basis->basis.adjoint() * m * basis->basis};
}

OperatorOnK compressed_shift(const BasisPtr& basis)
{
    return compress(shift_matrix(basis->n), basis);
}

Eigen::VectorXcd to_coordinates(const ModelSpaceBasis& basis, const CoeffVec& c)
{
    if (c.size() != basis.n)
    {
        throw Error(ErrorCode::DimensionMismatch,
                    "coefficient vector length differs from N");
    }
    return basis.basis.adjoint() * c;
}

CoeffVec from_coordinates(const ModelSpaceBasis& basis,
                          const Eigen::VectorXcd& coords)
{
    if (coords.size() != basis.d)
    {
        throw Error(ErrorCode::DimensionMismatch,
                    "coordinate vector length differs from d");
    }
    return basis.basis * coords;
}

Complex evaluate_series(const CoeffVec& c, Complex z)
{
    Complex acc(0.0, 0.0);
    for (Eigen::Index i = c.size() - 1; i >= 0; --i)
    {
        acc = acc * z + c(i);
    }
    return acc;
}

double distance_from_range(const ModelSpaceBasis& basis, const CoeffVec& f)
{
    return (f - basis.basis * (basis.basis.adjoint() * f)).norm();
}

KernelVector kernel_vector(const BasisPtr& basis, Complex lambda)
{
    require_kernel_point(lambda);
    const Eigen::Index n = basis->n;
    CoeffVec u(n);
    Complex power(1.0, 0.0);
    for (Eigen::Index i = 0; i < n; ++i)
    {
        u(i) = power;
        power *= std::conj(lambda);
    }
    const Complex theta_at = evaluate(basis->spec, lambda);

    // (T_Theta u)_k = sum_{m<=k} theta_{k-m} u_m
    CoeffVec theta_u = CoeffVec::Zero(n);
    for (Eigen::Index k = 0; k < n; ++k)
    {
        Complex acc(0.0, 0.0);
        for (Eigen::Index m = 0; m <= k; ++m)
        {
            acc += basis->theta(k - m) * u(m);
        }
        theta_u(k) = acc;
    }

    KernelVector out;
    out.coeffs = u - std::conj(theta_at) * theta_u;
    out.coords = to_coordinates(*basis, out.coeffs);
    out.tail_bound = std::pow(std::abs(lambda), static_cast<double>(n)) /
                     (1.0 - std::abs(lambda));
    return out;
}

KernelVector conjugate_kernel_vector(const BasisPtr& basis, Complex lambda)
{
    require_kernel_point(lambda);
    const Eigen::Index n = basis->n;
    // b_k = sum_{m=k+1}^{N-1} theta_m lambda^{m-1-k}, evaluated backwards.
    CoeffVec b = CoeffVec::Zero(n);
    for (Eigen::Index k = n - 2; k >= 0; --k)
    {
        b(k) = basis->theta(k + 1) + lambda * b(k + 1);
    }

    KernelVector out;
    out.coeffs = std::move(b);
    out.coords = to_coordinates(*basis, out.coeffs);
    out.tail_bound = std::pow(std::abs(lambda), static_cast<double>(n)) /
                     (1.0 - std::abs(lambda));
    return out;
}

CoeffVec conjugation_apply(const BasisPtr& basis, const CoeffVec& f)
{
    if (f.size() != basis->n)
    {
        throw Error(ErrorCode::DimensionMismatch,
                    "coefficient vector length differs from N");
    }
    const double dist = distance_from_range(*basis, f);
    if (dist > kRangeTol * std::max(1.0, f.norm()))
    {
        throw Error(ErrorCode::NotInModelSpace,
                    "vector is " + std::to_string(dist) +
                        " away from the model space");
    }
    return hankel_matrix(basis->theta, basis->n) * f.conjugate();
}

DefectReport defect_report(const BasisPtr& basis, Eigen::Index n_max)
{
    if (n_max <= 0)
    {
        n_max = basis->d;
    }
    const Eigen::Index d = basis->d;
    const ComplexMatrix s = compressed_shift(basis).matrix;
    const ComplexMatrix id = ComplexMatrix::Identity(d, d);

    CoeffVec k0 = -std::conj(basis->theta(0)) * basis->theta.head(basis->n);
    k0(0) += 1.0;
    const Eigen::VectorXcd k0_hat = to_coordinates(*basis, k0);

    DefectReport report;
    report.k0_norm_sq = k0_hat.squaredNorm();
    report.r1 = operator_norm(s * s.adjoint() - (id - k0_hat * k0_hat.adjoint()));

    ComplexMatrix s_pow = id;
    ComplexMatrix expansion = ComplexMatrix::Zero(d, d);
    Eigen::VectorXcd shifted_k0 = k0_hat;
    for (Eigen::Index n = 1; n <= n_max; ++n)
    {
        expansion += shifted_k0 * shifted_k0.adjoint();
        shifted_k0 = s * shifted_k0;
        s_pow = s * s_pow;
        const ComplexMatrix q = id - s_pow * s_pow.adjoint();
        report.residuals.push_back(operator_norm(q - expansion));
        report.ranks.push_back(numerical_rank(q));
    }
    return report;
}

std::string serialize_basis(const ModelSpaceBasis& basis)
{
    const nlohmann::json header{{"spec", spec_to_json(basis.spec)},
                                {"N", basis.n},
                                {"d", basis.d},
                                {"eig_gap", basis.eig_gap},
                                {"isometry_defect", basis.isometry_defect}};
    return header.dump() + "\n" + matrix_to_csv(basis.basis);
}

BasisPtr deserialize_basis(const std::string& text)
{
    const auto newline = text.find('\n');
    if (newline == std::string::npos)
    {
        throw Error(ErrorCode::ParseError, "basis file has no header line");
    }
    nlohmann::json header;
    try
    {
        header = nlohmann::json::parse(text.substr(0, newline));
    }
    catch (const nlohmann::json::parse_error& e)
    {
        throw Error(ErrorCode::ParseError,
                    std::string("basis header: ") + e.what());
    }
    for (const char* key : {"spec", "N", "d", "eig_gap", "isometry_defect"})
    {
        if (!header.contains(key))
        {
            throw Error(ErrorCode::ParseError,
                        std::string("basis header: missing \"") + key + "\"");
        }
    }

    auto out = std::make_shared<ModelSpaceBasis>(
        spec_from_json(header.at("spec"), "spec"));
    out->n = header.at("N").get<Eigen::Index>();
    out->d = header.at("d").get<Eigen::Index>();
    out->eig_gap = header.at("eig_gap").get<double>();
    out->isometry_defect = header.at("isometry_defect").get<double>();

    std::istringstream body(text.substr(newline + 1));
    out->basis = read_matrix_csv(body);
    if (out->basis.rows() != out->n || out->basis.cols() != out->d)
    {
        throw Error(ErrorCode::DimensionMismatch,
                    "basis matrix does not match header N and d");
    }
    out->theta = taylor_coefficients(out->spec, 2 * out->n + 1);
    return out;
}

} // namespace modelspace
