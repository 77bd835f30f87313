#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fixtures.hpp"
#include "modelspace/inner_function.hpp"
#include "modelspace/spec_json.hpp"

using namespace modelspace;

namespace
{

// Cauchy integral on |z| = r by the trapezoid rule; spectrally accurate for
// functions analytic on a larger disk.
CoeffVec cauchy_coefficients(const InnerFunctionSpec& spec, Eigen::Index n,
                             double r = 0.5, int samples = 1024)
{
    CoeffVec out = CoeffVec::Zero(n);
    for (int s = 0; s < samples; ++s)
    {
        const double t = 2.0 * std::numbers::pi * s / samples;
        const Complex value = evaluate(spec, std::polar(r, t));
        for (Eigen::Index k = 0; k < n; ++k)
        {
            out(k) += value * std::polar(1.0, -static_cast<double>(k) * t);
        }
    }
    for (Eigen::Index k = 0; k < n; ++k)
    {
        out(k) /= samples * std::pow(r, static_cast<double>(k));
    }
    return out;
}

} // namespace

TEST_CASE("make_blaschke")
{
    SUBCASE("zero at the origin is the identity map")
    {
        const auto spec = make_blaschke({0.0});
        CHECK(std::abs(evaluate(spec, 0.3) - 0.3) < 1e-15);
    }
    SUBCASE("triple zero at the origin is z^3")
    {
        const auto spec = make_blaschke({0.0, 0.0, 0.0});
        CHECK(std::abs(evaluate(spec, Complex(0.2, 0.4)) - std::pow(Complex(0.2, 0.4), 3)) < 1e-15);
    }
    SUBCASE("single real zero")
    {
        const auto spec = make_blaschke({0.5});
        CHECK(std::abs(evaluate(spec, 0.0) - 0.5) < 1e-15);
        CHECK(std::abs(evaluate(spec, 0.5)) < 1e-15);
    }
    SUBCASE("errors")
    {
        CHECK_THROWS_AS(make_blaschke({0.9999999999}), Error);
        try
        {
            make_blaschke({Complex(1.0, 0.0)});
            FAIL("expected ZeroOnBoundary");
        }
        catch (const Error& e)
        {
            CHECK(e.code() == ErrorCode::ZeroOnBoundary);
        }
        try
        {
            make_blaschke({0.5}, Complex(1.1, 0.0));
            FAIL("expected NotUnimodular");
        }
        catch (const Error& e)
        {
            CHECK(e.code() == ErrorCode::NotUnimodular);
        }
        try
        {
            make_blaschke({});
            FAIL("expected EmptySpec");
        }
        catch (const Error& e)
        {
            CHECK(e.code() == ErrorCode::EmptySpec);
        }
    }
}

TEST_CASE("make_singular")
{
    CHECK(std::abs(evaluate(make_singular({{0.0, 1.0}}), 0.0) - std::exp(-1.0)) < 1e-15);
    CHECK(std::abs(evaluate(make_singular({{std::numbers::pi, 2.0}}), 0.0) - std::exp(-2.0)) < 1e-15);
    try
    {
        make_singular({{0.0, 0.0}});
        FAIL("expected NonPositiveMass");
    }
    catch (const Error& e)
    {
        CHECK(e.code() == ErrorCode::NonPositiveMass);
    }
    CHECK(make_singular({{-1.0, 1.0}}).singular().atoms[0].angle ==
          doctest::Approx(2.0 * std::numbers::pi - 1.0));
}

TEST_CASE("make_product")
{
    const auto z = make_blaschke({0.0});
    const auto z2 = make_product({z, z});
    for (const Complex p : {Complex(0.1, 0.2), Complex(-0.7, 0.0), Complex(0.0, 0.9)})
    {
        CHECK(std::abs(evaluate(z2, p) - p * p) < 1e-15);
    }
    const auto mixed = make_product({make_blaschke({0.5}), make_singular({{0.0, 1.0}})});
    CHECK(std::abs(evaluate(mixed, 0.0) - 0.5 * std::exp(-1.0)) < 1e-15);
    CHECK(std::abs(evaluate(mixed, 0.0) - 0.18394) < 1e-5);
    try
    {
        make_product({});
        FAIL("expected EmptySpec");
    }
    catch (const Error& e)
    {
        CHECK(e.code() == ErrorCode::EmptySpec);
    }
}

TEST_CASE("evaluate")
{
    const auto z3 = make_blaschke({0.0, 0.0, 0.0});
    CHECK(std::abs(evaluate(z3, 0.5) - 0.125) < 1e-15);
    CHECK(std::abs(evaluate(make_blaschke({0.5}), 0.5)) < 1e-15);
    CHECK(std::abs(evaluate(make_singular({{0.0, 1.0}}), 0.0) - 0.3678794) < 1e-7);
    try
    {
        evaluate(z3, 1.0);
        FAIL("expected OutsideDisk");
    }
    catch (const Error& e)
    {
        CHECK(e.code() == ErrorCode::OutsideDisk);
    }
}

TEST_CASE("taylor_coefficients")
{
    SUBCASE("identity")
    {
        const CoeffVec c = taylor_coefficients(make_blaschke({0.0}), 4);
        CHECK(c.isApprox(CoeffVec::Unit(4, 1)));
    }
    SUBCASE("single Blaschke factor against the closed form")
    {
        const CoeffVec c = taylor_coefficients(make_blaschke({0.5}), 40);
        CHECK(std::abs(c(0) - 0.5) < 1e-15);
        CHECK(std::abs(c(1) + 0.75) < 1e-15);
        CHECK(std::abs(c(2) + 0.375) < 1e-15);
        CHECK(std::abs(c(3) + 0.1875) < 1e-15);
        for (Eigen::Index n = 1; n < 40; ++n)
        {
            CHECK(std::abs(c(n) + 0.75 * std::pow(0.5, n - 1)) < 1e-15);
        }
    }
    SUBCASE("singular atom constant term")
    {
        const CoeffVec c = taylor_coefficients(make_singular({{0.0, 1.0}}), 1);
        REQUIRE(c.size() == 1);
        CHECK(std::abs(c(0) - 0.3678794) < 1e-7);
    }
    SUBCASE("agrees with a Cauchy-integral oracle")
    {
        const InnerFunctionSpec specs[] = {
            make_singular({{0.0, 1.0}}),
            make_singular({{1.0, 0.5}, {4.0, 0.3}}),
            make_blaschke({Complex(0.3, -0.4), 0.6, Complex(-0.2, 0.1)}, Complex(0.0, 1.0)),
            make_product({make_blaschke({0.5}), make_singular({{2.0, 0.7}})}),
        };
        for (const auto& spec : specs)
        {
            const CoeffVec fast = taylor_coefficients(spec, 24);
            const CoeffVec oracle = cauchy_coefficients(spec, 24);
            // Roundoff in the oracle grows like r^{-k}.
            for (Eigen::Index k = 0; k < 24; ++k)
            {
                CHECK(std::abs(fast(k) - oracle(k)) < 1e-13 * std::pow(2.0, k));
            }
        }
    }
    CHECK_THROWS_AS(taylor_coefficients(make_blaschke({0.0}), 0), Error);
}

TEST_CASE("verify_inner")
{
    SUBCASE("z^3 near the circle")
    {
        const auto rep = verify_inner(make_blaschke({0.0, 0.0, 0.0}), 0.999, 64);
        CHECK(rep.boundary_deviation == doctest::Approx(1.0 - std::pow(0.999, 3)).epsilon(1e-12));
        CHECK(rep.boundary_deviation == doctest::Approx(0.002997).epsilon(1e-3));
        CHECK(rep.interior_excess <= 1e-12);
    }
    SUBCASE("z at radius one half")
    {
        const auto rep = verify_inner(make_blaschke({0.0}), 0.5, 8);
        CHECK(rep.interior_excess <= 0.0);
    }
    SUBCASE("Blaschke factor")
    {
        const auto rep = verify_inner(make_blaschke({0.5}), 0.999, 128);
        CHECK(rep.boundary_deviation <= 5e-3);
        CHECK(rep.interior_excess <= 1e-12);
    }
    SUBCASE("singular atom arcs are excluded")
    {
        const auto rep = verify_inner(make_singular({{0.0, 1.0}}), 0.999, 4096);
        CHECK(rep.excluded_points > 0);
        CHECK(rep.arc_half_width == doctest::Approx(0.01));
        CHECK(rep.interior_excess <= 1e-12);
    }
    CHECK_THROWS_AS(verify_inner(make_blaschke({0.0}), 1.0, 8), Error);
    CHECK_THROWS_AS(verify_inner(make_blaschke({0.0}), 0.5, 4), Error);
}

TEST_CASE("reflect conjugates parameters")
{
    const auto psi = reflect(make_blaschke({Complex(0.2, 0.5)}, Complex(0.0, 1.0)));
    const auto theta = make_blaschke({Complex(0.2, 0.5)}, Complex(0.0, 1.0));
    for (const Complex z : {Complex(0.1, 0.3), Complex(-0.5, -0.2)})
    {
        CHECK(std::abs(evaluate(psi, z) - std::conj(evaluate(theta, std::conj(z)))) < 1e-14);
    }
    const auto s = make_singular({{1.0, 0.5}});
    const Complex z(0.3, 0.4);
    CHECK(std::abs(evaluate(reflect(s), z) - std::conj(evaluate(s, std::conj(z)))) < 1e-14);
}

TEST_CASE("property: random inner functions")
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 60; ++trial)
    {
        const auto spec = fixtures::random_spec(rng);
        CAPTURE(trial);

        const Eigen::Index n = 48;
        const CoeffVec c = taylor_coefficients(spec, n);
        CHECK(c.squaredNorm() <= 1.0 + 1e-10);

        for (int k = 0; k < 10; ++k)
        {
            const Complex z = std::polar(0.99 * std::sqrt(unit(rng)), 6.283185307179586 * unit(rng));
            CHECK(std::abs(evaluate(spec, z)) <= 1.0 + 1e-12);

            const Complex w = std::polar(0.5 * std::sqrt(unit(rng)), 6.283185307179586 * unit(rng));
            Complex partial(0.0, 0.0);
            Complex power(1.0, 0.0);
            for (Eigen::Index i = 0; i < n; ++i)
            {
                partial += c(i) * power;
                power *= w;
            }
            CHECK(std::abs(partial - evaluate(spec, w)) <= 2.0 * std::pow(0.5, n) / 0.5 + 1e-13);
        }
    }
}

TEST_CASE("property: product coefficients are the truncated convolution")
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 30; ++trial)
    {
        const auto a = fixtures::random_spec(rng, 2);
        const auto b = fixtures::random_spec(rng, 1);
        const Eigen::Index n = 32;
        const CoeffVec ca = taylor_coefficients(a, n);
        const CoeffVec cb = taylor_coefficients(b, n);
        CoeffVec conv = CoeffVec::Zero(n);
        for (Eigen::Index i = 0; i < n; ++i)
        {
            for (Eigen::Index j = 0; i + j < n; ++j)
            {
                conv(i + j) += ca(i) * cb(j);
            }
        }
        const CoeffVec prod = taylor_coefficients(make_product({a, b}), n);
        CHECK((prod - conv).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("spec JSON round trip")
{
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial)
    {
        const auto spec = fixtures::random_spec(rng);
        const auto back = spec_from_json(nlohmann::json::parse(spec_to_json(spec).dump()));
        CHECK(spec_to_json(back) == spec_to_json(spec));
        CHECK(std::abs(evaluate(back, Complex(0.3, -0.2)) - evaluate(spec, Complex(0.3, -0.2))) < 1e-15);
    }

    const auto bad = nlohmann::json::parse(R"({"type":"blaschke","zeros":[{"re":0.5}]})");
    try
    {
        spec_from_json(bad);
        FAIL("expected ParseError");
    }
    catch (const Error& e)
    {
        CHECK(e.code() == ErrorCode::ParseError);
        CHECK(std::string(e.what()).find("inner.zeros[0]") != std::string::npos);
    }
}
