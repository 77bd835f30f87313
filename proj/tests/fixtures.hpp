#ifndef MODELSPACE_TESTS_FIXTURES_HPP
#define MODELSPACE_TESTS_FIXTURES_HPP

#include <random>
#include <string>
#include <vector>

#include "modelspace/inner_function.hpp"

namespace fixtures
{

using modelspace::Complex;
using modelspace::InnerFunctionSpec;

struct NamedSpec
{
    std::string name;
    InnerFunctionSpec spec;
};

/// Degree-8 Blaschke zeros with |a| <= 0.8, drawn once from a seeded
/// generator and frozen here so every platform sees the same values.
inline std::vector<Complex> random_degree8_zeros()
{
    return {{0.064714, -0.269243}, {-0.492622, 0.371309}, {-0.203432, 0.010529},
            {0.293942, 0.372066},  {-0.270939, 0.269985}, {-0.456315, 0.620708},
            {-0.749875, -0.102195}, {-0.269564, -0.132584}};
}

inline std::vector<NamedSpec> finite_blaschke()
{
    using modelspace::make_blaschke;
    return {
        {"z", make_blaschke({0.0})},
        {"z^3", make_blaschke({0.0, 0.0, 0.0})},
        {"blaschke(0.5)", make_blaschke({0.5})},
        {"blaschke(0.5,-0.5)", make_blaschke({0.5, -0.5})},
        {"blaschke(0.5,0.3i)", make_blaschke({0.5, Complex(0.0, 0.3)})},
        {"blaschke(random8)", make_blaschke(random_degree8_zeros())},
    };
}

inline InnerFunctionSpec singular_atom()
{
    return modelspace::make_singular({{0.0, 1.0}});
}

/// Random complex matrix with entries of standard deviation 1/sqrt(d).
inline modelspace::ComplexMatrix random_operator(Eigen::Index d, std::mt19937_64& rng)
{
    std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(2.0 * d));
    modelspace::ComplexMatrix m(d, d);
    for (Eigen::Index k = 0; k < d; ++k)
    {
        for (Eigen::Index j = 0; j < d; ++j)
        {
            m(j, k) = Complex(normal(rng), normal(rng));
        }
    }
    return m;
}

inline Eigen::VectorXcd random_vector(Eigen::Index d, std::mt19937_64& rng)
{
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXcd v(d);
    for (Eigen::Index i = 0; i < d; ++i)
    {
        v(i) = Complex(normal(rng), normal(rng));
    }
    return v;
}

/// Rank-r operator built from random outer products.
inline modelspace::ComplexMatrix random_rank(Eigen::Index d, int rank,
                                             std::mt19937_64& rng)
{
    modelspace::ComplexMatrix m = modelspace::ComplexMatrix::Zero(d, d);
    for (int i = 0; i < rank; ++i)
    {
        m += random_vector(d, rng) * random_vector(d, rng).adjoint();
    }
    return m;
}

/// Random inner function from the three families, for property tests.
inline InnerFunctionSpec random_spec(std::mt19937_64& rng, int depth = 0)
{
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double pick = unit(rng);
    if (pick < 0.45 || depth > 1)
    {
        const int degree = 1 + static_cast<int>(unit(rng) * 4);
        std::vector<Complex> zeros;
        for (int i = 0; i < degree; ++i)
        {
            zeros.push_back(std::polar(0.95 * unit(rng), 6.283185307179586 * unit(rng)));
        }
        return modelspace::make_blaschke(zeros, std::polar(1.0, 6.283185307179586 * unit(rng)));
    }
    if (pick < 0.75)
    {
        const int count = 1 + static_cast<int>(unit(rng) * 2);
        std::vector<modelspace::SingularAtom> atoms;
        for (int i = 0; i < count; ++i)
        {
            atoms.push_back({6.283185307179586 * unit(rng), 0.1 + 1.5 * unit(rng)});
        }
        return modelspace::make_singular(atoms);
    }
    return modelspace::make_product({random_spec(rng, depth + 1), random_spec(rng, depth + 1)});
}

} // namespace fixtures

#endif // MODELSPACE_TESTS_FIXTURES_HPP
