#include "modelspace/inner_function.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace modelspace
{

namespace
{

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double angle)
{
    double a = std::fmod(angle, kTwoPi);
    if (a < 0.0)
    {
        a += kTwoPi;
    }
    // fmod of a value just below 2 pi can round up to 2 pi after the shift.
    return a >= kTwoPi ? 0.0 : a;
}

Complex blaschke_factor(Complex a, Complex z)
{
    if (a == Complex(0.0, 0.0))
    {
        return z;
    }
    return (std::abs(a) / a) * (a - z) / (1.0 - std::conj(a) * z);
}

// (f * g) truncated to the length of f.
CoeffVec truncated_convolution(const CoeffVec& f, const CoeffVec& g)
{
    const Eigen::Index n = f.size();
    CoeffVec out = CoeffVec::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i)
    {
        if (f(i) == Complex(0.0, 0.0))
        {
            continue;
        }
        for (Eigen::Index j = 0; i + j < n; ++j)
        {
            out(i + j) += f(i) * g(j);
        }
    }
    return out;
}

// Multiplies the series in place by one normalised Blaschke factor:
// first by the numerator (|a|/a)(a - z), then divides by (1 - conj(a) z)
// through y_n = x_n + conj(a) y_{n-1}.
void multiply_blaschke_factor(CoeffVec& coeffs, Complex a)
{
    const Eigen::Index n = coeffs.size();
    if (a == Complex(0.0, 0.0))
    {
        for (Eigen::Index i = n - 1; i > 0; --i)
        {
            coeffs(i) = coeffs(i - 1);
        }
        coeffs(0) = 0.0;
        return;
    }
    const Complex phase = std::abs(a) / a;
    for (Eigen::Index i = n - 1; i >= 0; --i)
    {
        const Complex shifted = i > 0 ? coeffs(i - 1) : Complex(0.0, 0.0);
        coeffs(i) = phase * (a * coeffs(i) - shifted);
    }
    const Complex ac = std::conj(a);
    for (Eigen::Index i = 1; i < n; ++i)
    {
        coeffs(i) += ac * coeffs(i - 1);
    }
}

CoeffVec blaschke_coefficients(const InnerFunctionSpec::Blaschke& b,
                               Eigen::Index n)
{
    CoeffVec coeffs = CoeffVec::Zero(n);
    coeffs(0) = b.unimodular;
    for (const Complex& a : b.zeros)
    {
        multiply_blaschke_factor(coeffs, a);
    }
    return coeffs;
}

// exp of the Herglotz series g(z) = -sum_i m_i (xi_i + z)/(xi_i - z) via
// (k+1) f_{k+1} = sum_{j<=k} (j+1) g_{j+1} f_{k-j}.
CoeffVec singular_coefficients(const InnerFunctionSpec::Singular& s,
                               Eigen::Index n)
{
    CoeffVec g = CoeffVec::Zero(n);
    for (const SingularAtom& atom : s.atoms)
    {
        const Complex xi_conj = std::polar(1.0, -atom.angle);
        g(0) -= atom.mass;
        Complex power(1.0, 0.0);
        for (Eigen::Index k = 1; k < n; ++k)
        {
            power *= xi_conj;
            g(k) -= 2.0 * atom.mass * power;
        }
    }

    CoeffVec f = CoeffVec::Zero(n);
    f(0) = std::exp(g(0));
    for (Eigen::Index k = 0; k + 1 < n; ++k)
    {
        Complex acc(0.0, 0.0);
        for (Eigen::Index j = 0; j <= k; ++j)
        {
            acc += static_cast<double>(j + 1) * g(j + 1) * f(k - j);
        }
        f(k + 1) = acc / static_cast<double>(k + 1);
    }
    return f;
}

} // namespace

InnerFunctionSpec::InnerFunctionSpec(Payload payload)
    : payload_(std::make_shared<const Payload>(std::move(payload)))
{
}

InnerFunctionSpec::Kind InnerFunctionSpec::kind() const noexcept
{
    return static_cast<Kind>(payload_->index());
}

const InnerFunctionSpec::Blaschke& InnerFunctionSpec::blaschke() const
{
    return std::get<Blaschke>(*payload_);
}

const InnerFunctionSpec::Singular& InnerFunctionSpec::singular() const
{
    return std::get<Singular>(*payload_);
}

const InnerFunctionSpec::Product& InnerFunctionSpec::product() const
{
    return std::get<Product>(*payload_);
}

bool InnerFunctionSpec::is_finite_blaschke() const
{
    switch (kind())
    {
    case Kind::blaschke: return true;
    case Kind::singular: return false;
    case Kind::product:
        for (const auto& f : product().factors)
        {
            if (!f.is_finite_blaschke())
            {
                return false;
            }
        }
        return true;
    }
    return false;
}

std::vector<Complex> InnerFunctionSpec::zeros() const
{
    switch (kind())
    {
    case Kind::blaschke: return blaschke().zeros;
    case Kind::singular: return {};
    case Kind::product:
    {
        std::vector<Complex> out;
        for (const auto& f : product().factors)
        {
            const auto z = f.zeros();
            out.insert(out.end(), z.begin(), z.end());
        }
        return out;
    }
    }
    return {};
}

std::vector<SingularAtom> InnerFunctionSpec::atoms() const
{
    switch (kind())
    {
    case Kind::blaschke: return {};
    case Kind::singular: return singular().atoms;
    case Kind::product:
    {
        std::vector<SingularAtom> out;
        for (const auto& f : product().factors)
        {
            const auto a = f.atoms();
            out.insert(out.end(), a.begin(), a.end());
        }
        return out;
    }
    }
    return {};
}

InnerFunctionSpec make_blaschke(std::vector<Complex> zeros, Complex unimodular)
{
    if (zeros.empty())
    {
        throw Error(ErrorCode::EmptySpec,
                    "a Blaschke product needs at least one zero");
    }
    for (const Complex& a : zeros)
    {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag()) ||
            std::abs(a) >= 1.0 - kZeroRadiusMargin)
        {
            throw Error(ErrorCode::ZeroOnBoundary,
                        "zero (" + std::to_string(a.real()) + ", " +
                            std::to_string(a.imag()) +
                            ") is not strictly inside the disk");
        }
    }
    if (!(std::abs(std::abs(unimodular) - 1.0) < kUnimodularTol))
    {
        throw Error(ErrorCode::NotUnimodular,
                    "unimodular factor has modulus " +
                        std::to_string(std::abs(unimodular)));
    }
    return InnerFunctionSpec(
        InnerFunctionSpec::Blaschke{std::move(zeros), unimodular});
}

InnerFunctionSpec make_singular(std::vector<SingularAtom> atoms)
{
    if (atoms.empty())
    {
        throw Error(ErrorCode::EmptySpec,
                    "a singular inner function needs at least one atom");
    }
    for (SingularAtom& atom : atoms)
    {
        if (!(atom.mass > 0.0) || !std::isfinite(atom.mass))
        {
            throw Error(ErrorCode::NonPositiveMass,
                        "atom mass " + std::to_string(atom.mass) +
                            " is not positive");
        }
        if (!std::isfinite(atom.angle))
        {
            throw Error(ErrorCode::BadAngle, "atom angle is not finite");
        }
        atom.angle = wrap_angle(atom.angle);
    }
    return InnerFunctionSpec(InnerFunctionSpec::Singular{std::move(atoms)});
}

InnerFunctionSpec make_product(std::vector<InnerFunctionSpec> factors)
{
    if (factors.empty())
    {
        throw Error(ErrorCode::EmptySpec, "product has no factors");
    }
    return InnerFunctionSpec(InnerFunctionSpec::Product{std::move(factors)});
}

Complex evaluate(const InnerFunctionSpec& spec, Complex z)
{
    if (!(std::abs(z) < 1.0))
    {
        throw Error(ErrorCode::OutsideDisk,
                    "evaluation point has modulus " +
                        std::to_string(std::abs(z)));
    }
    switch (spec.kind())
    {
    case InnerFunctionSpec::Kind::blaschke:
    {
        const auto& b = spec.blaschke();
        Complex value = b.unimodular;
        for (const Complex& a : b.zeros)
        {
            value *= blaschke_factor(a, z);
        }
        return value;
    }
    case InnerFunctionSpec::Kind::singular:
    {
        Complex exponent(0.0, 0.0);
        for (const SingularAtom& atom : spec.singular().atoms)
        {
            const Complex xi = std::polar(1.0, atom.angle);
            exponent -= atom.mass * (xi + z) / (xi - z);
        }
        return std::exp(exponent);
    }
    case InnerFunctionSpec::Kind::product:
    {
        Complex value(1.0, 0.0);
        for (const auto& f : spec.product().factors)
        {
            value *= evaluate(f, z);
        }
        return value;
    }
    }
    return {};
}

CoeffVec taylor_coefficients(const InnerFunctionSpec& spec, Eigen::Index n)
{
    if (n < 1)
    {
        throw Error(ErrorCode::BadTruncation,
                    "need at least one Taylor coefficient");
    }
    switch (spec.kind())
    {
    case InnerFunctionSpec::Kind::blaschke:
        return blaschke_coefficients(spec.blaschke(), n);
    case InnerFunctionSpec::Kind::singular:
        return singular_coefficients(spec.singular(), n);
    case InnerFunctionSpec::Kind::product:
    {
        const auto& factors = spec.product().factors;
        CoeffVec acc = taylor_coefficients(factors.front(), n);
        for (std::size_t i = 1; i < factors.size(); ++i)
        {
            if (factors[i].kind() == InnerFunctionSpec::Kind::blaschke)
            {
                const auto& b = factors[i].blaschke();
                acc *= b.unimodular;
                for (const Complex& a : b.zeros)
                {
                    multiply_blaschke_factor(acc, a);
                }
            }
            else
            {
                acc = truncated_convolution(acc,
                                            taylor_coefficients(factors[i], n));
            }
        }
        return acc;
    }
    }
    return {};
}

InnerFunctionSpec reflect(const InnerFunctionSpec& spec)
{
    switch (spec.kind())
    {
    case InnerFunctionSpec::Kind::blaschke:
    {
        const auto& b = spec.blaschke();
        std::vector<Complex> zeros;
        zeros.reserve(b.zeros.size());
        for (const Complex& a : b.zeros)
        {
            zeros.push_back(std::conj(a));
        }
        return make_blaschke(std::move(zeros), std::conj(b.unimodular));
    }
    case InnerFunctionSpec::Kind::singular:
    {
        std::vector<SingularAtom> atoms = spec.singular().atoms;
        for (SingularAtom& atom : atoms)
        {
            atom.angle = -atom.angle;
        }
        return make_singular(std::move(atoms));
    }
    case InnerFunctionSpec::Kind::product:
    {
        std::vector<InnerFunctionSpec> factors;
        for (const auto& f : spec.product().factors)
        {
            factors.push_back(reflect(f));
        }
        return make_product(std::move(factors));
    }
    }
    return spec;
}

InnerCheckReport verify_inner(const InnerFunctionSpec& spec, double r,
                              int grid_size)
{
    if (!(r > 0.0 && r < 1.0))
    {
        throw Error(ErrorCode::BadRadius, "radius must lie in (0, 1)");
    }
    if (grid_size < 8)
    {
        throw Error(ErrorCode::BadGridSize, "grid_size must be at least 8");
    }

    InnerCheckReport report;
    report.arc_half_width = 10.0 * (1.0 - r);
    const auto atoms = spec.atoms();

    for (int k = 0; k < grid_size; ++k)
    {
        const double angle = kTwoPi * k / grid_size;
        bool excluded = false;
        for (const SingularAtom& atom : atoms)
        {
            const double d = std::abs(std::remainder(angle - atom.angle, kTwoPi));
            if (d < report.arc_half_width)
            {
                excluded = true;
                break;
            }
        }
        if (excluded)
        {
            ++report.excluded_points;
            continue;
        }
        const double modulus = std::abs(evaluate(spec, std::polar(r, angle)));
        report.boundary_deviation =
            std::max(report.boundary_deviation, std::abs(modulus - 1.0));
    }

    report.interior_excess = -std::numeric_limits<double>::infinity();
    constexpr int kRings = 8;
    for (int ring = 0; ring <= kRings; ++ring)
    {
        const double rho = r * ring / kRings;
        const int points = ring == 0 ? 1 : grid_size;
        for (int k = 0; k < points; ++k)
        {
            const double modulus =
                std::abs(evaluate(spec, std::polar(rho, kTwoPi * k / grid_size)));
            report.interior_excess =
                std::max(report.interior_excess, modulus - 1.0);
        }
    }
    return report;
}

} // namespace modelspace
