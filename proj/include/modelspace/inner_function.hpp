///
/// \file inner_function.hpp
///
/// Inner functions on the unit disk built from three families: finite
/// Blaschke products, atomic singular inner functions, and finite products
/// of these. Values are immutable once constructed.
///
#ifndef MODELSPACE_INNER_FUNCTION_HPP
#define MODELSPACE_INNER_FUNCTION_HPP

#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "modelspace/types.hpp"

namespace modelspace
{

/// Point mass of the singular measure at exp(i * angle).
struct SingularAtom
{
    double angle; ///< radians, normalised to [0, 2 pi)
    double mass;  ///< > 0
};

class InnerFunctionSpec
{
public:
    enum class Kind
    {
        blaschke,
        singular,
        product
    };

    struct Blaschke
    {
        std::vector<Complex> zeros;
        Complex unimodular{1.0, 0.0};
    };

    struct Singular
    {
        std::vector<SingularAtom> atoms;
    };

    struct Product
    {
        std::vector<InnerFunctionSpec> factors;
    };

    Kind kind() const noexcept;

    const Blaschke& blaschke() const;
    const Singular& singular() const;
    const Product& product() const;

    /// True when the spec contains no singular factor anywhere.
    bool is_finite_blaschke() const;

    /// All Blaschke zeros with multiplicity, flattened over products.
    std::vector<Complex> zeros() const;

    /// All singular atoms, flattened over products.
    std::vector<SingularAtom> atoms() const;

    friend InnerFunctionSpec make_blaschke(std::vector<Complex>, Complex);
    friend InnerFunctionSpec make_singular(std::vector<SingularAtom>);
    friend InnerFunctionSpec make_product(std::vector<InnerFunctionSpec>);

private:
    using Payload = std::variant<Blaschke, Singular, Product>;

    explicit InnerFunctionSpec(Payload payload);

    // Shared so that copies of large products stay cheap; never mutated.
    std::shared_ptr<const Payload> payload_;
};

inline constexpr double kZeroRadiusMargin = 1e-9;
inline constexpr double kUnimodularTol = 1e-12;

/// Finite Blaschke product
///   c * prod_j (|a_j| / a_j) (a_j - z) / (1 - conj(a_j) z),
/// where a zero at the origin contributes the factor z.
InnerFunctionSpec make_blaschke(std::vector<Complex> zeros,
                                Complex unimodular = Complex(1.0, 0.0));

/// exp(-sum_i m_i (xi_i + z) / (xi_i - z)) with xi_i = exp(i angle_i).
InnerFunctionSpec make_singular(std::vector<SingularAtom> atoms);

InnerFunctionSpec make_product(std::vector<InnerFunctionSpec> factors);

/// Theta(z) for |z| < 1.
Complex evaluate(const InnerFunctionSpec& spec, Complex z);

/// First n Taylor coefficients of Theta at the origin.
CoeffVec taylor_coefficients(const InnerFunctionSpec& spec, Eigen::Index n);

/// The reflected function Psi(z) = conj(Theta(conj(z))).
InnerFunctionSpec reflect(const InnerFunctionSpec& spec);

struct InnerCheckReport
{
    /// max | |Theta(r xi_k)| - 1 | over grid points outside the atom arcs
    double boundary_deviation = 0.0;
    /// max (|Theta(z)| - 1) over an interior grid; <= 1e-12 for inner Theta
    double interior_excess = 0.0;
    int excluded_points = 0;
    double arc_half_width = 0.0;
};

/// Samples |Theta| on the circle of radius r and on an interior grid.
/// Arcs of half-width 10 (1 - r) around singular atoms are skipped.
InnerCheckReport verify_inner(const InnerFunctionSpec& spec, double r,
                              int grid_size);

} // namespace modelspace

#endif // MODELSPACE_INNER_FUNCTION_HPP
