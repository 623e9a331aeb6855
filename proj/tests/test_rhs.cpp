#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "ksfd/grid.hpp"
#include "ksfd/properties.hpp"
#include "ksfd/rhs.hpp"

using namespace ksfd;

namespace {

const TruncationLevel all_levels[] = {
    TruncationLevel::Conventional,
    TruncationLevel::FirstCorrection,
    TruncationLevel::SecondCorrection,
    TruncationLevel::LowOrderEq3,
};

// Independent oracle for the constant-state check: sum each stencil block's
// coefficients by brute force on a literal constant array, without going
// through rhs_terms.
double brute_force_constant_tendency(double c, double R, double gamma, double h)
{
    // every block below is a plain transliteration of the scheme's terms at
    // u_j == c for all j
    double d2 = c - 2 * c + c;
    double d4 = c - 4 * c + 6 * c - 4 * c + c;
    double g = 0.0;
    g += -(gamma * R / (h * h)) * d2;
    g += -(gamma / (2 * h)) * c * (c - c);
    g += -(gamma * gamma / (h * h * h * h)) * d4;
    g += (gamma * gamma * R / (12 * h * h)) * d4;
    g += (gamma * gamma / (48 * h)) *
         (c * c + 3 * c * c - 3 * c * c - 3 * c * c + 3 * c * c + 3 * c * c - 3 * c * c - c * c);
    g += (gamma * h * h * c * c / 120) * d2;
    g += (gamma * gamma * h * h / 60480) *
         (c * c * (-30 * c - 170 * c + 256 * c - 170 * c - 30 * c) +
          c * (-126 * c * c - 54 * c * c - 126 * c * c) + c * c * (10 * c - 20 * c + 235 * c) +
          c * c * (10 * c - 20 * c + 235 * c));
    return g;
}

} // namespace

TEST_CASE("zero state is a fixed point of every scheme")
{
    GridSpec g(8);
    StateVector u(g);
    ModelParams p(2.0, 1.0);
    for (auto level : all_levels)
        CHECK(norm_linf(rhs_terms(u, p, level)) == 0.0);
}

TEST_CASE("constant states are fixed points, cross-checked by brute-force block sums")
{
    std::mt19937 rng(21);
    std::uniform_real_distribution<double> cd(-10.0, 10.0), Rd(0.0, 4.0), gd(0.0, 1.0);
    GridSpec g(8);
    for (int t = 0; t < 100; ++t) {
        double c = cd(rng), R = Rd(rng), gamma = gd(rng);
        CHECK(brute_force_constant_tendency(c, R, gamma, g.spacing()) == Catch::Approx(0.0).margin(1e-11));
        ModelParams p(R, gamma);
        StateVector u(g, std::vector<double>(8, c));
        for (auto level : all_levels)
            CHECK(norm_linf(rhs_terms(u, p, level)) <=
                  1e-12 * (1.0 + std::abs(c) * std::abs(c) * std::abs(c)));
    }
}

TEST_CASE("unit impulse exposes the fourth-difference row")
{
    // m = 11, h = 1, R = 0, gamma = 1: only the fourth difference survives,
    // the nonlinear term needs two adjacent nonzero neighbours.
    GridSpec g(11, 11.0);
    StateVector u(g);
    u[5] = 1.0;
    ModelParams p(0.0, 1.0);
    StateVector out = rhs_terms(u, p, TruncationLevel::Conventional);
    double expected[11] = {0, 0, 0, -1, 4, -6, 4, -1, 0, 0, 0};
    for (int j = 0; j < 11; ++j)
        CHECK(out[j] == Catch::Approx(expected[j]).margin(1e-14));
}

TEST_CASE("nonlinear alternatives on simple data")
{
    GridSpec g(5, 5.0); // h = 1
    StateVector z(g);
    CHECK(norm_linf(nonlinear_advective(z)) == 0.0);
    CHECK(norm_linf(nonlinear_conservative(z)) == 0.0);

    StateVector c(g, std::vector<double>(5, 3.7));
    CHECK(norm_linf(nonlinear_advective(c)) == 0.0);
    CHECK(norm_linf(nonlinear_conservative(c)) == 0.0);

    StateVector u(g, {0.0, 1.0, 2.0, 1.0, 0.0});
    StateVector adv = nonlinear_advective(u);
    CHECK(adv[2] == Catch::Approx(0.0).margin(1e-15));
    CHECK(adv[1] == Catch::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("conservative form telescopes to zero")
{
    CHECK(check_conservative_telescoping().passed);
}

TEST_CASE("first correction coincides with the low-order model at gamma = 1")
{
    auto res = check_cross_scheme_equivalence();
    INFO("worst relative difference " << res.worst);
    CHECK(res.passed);
}

TEST_CASE("equivalence or equivariance breaks when a coefficient variant is toggled")
{
    StencilVariant printed_quadratic{false, true};
    CHECK_FALSE((check_cross_scheme_equivalence(100, 43, printed_quadratic).passed &&
                 check_reflection_equivariance(100, 45, printed_quadratic).passed));

    StencilVariant printed_cubic{true, false};
    CHECK_FALSE((check_cross_scheme_equivalence(100, 43, printed_cubic).passed &&
                 check_reflection_equivariance(100, 45, printed_cubic).passed));
}

TEST_CASE("translation and reflection-negation equivariance")
{
    CHECK(check_translation_equivariance().passed);
    CHECK(check_reflection_equivariance().passed);
}

TEST_CASE("linear symbol at k = 0 vanishes")
{
    GridSpec g(8);
    ModelParams p(2.0, 1.0);
    for (auto level : all_levels)
        CHECK(linear_symbol(0, p, g, level) == Catch::Approx(0.0).margin(1e-13));
}

TEST_CASE("linear symbol is purely damping at R = 0")
{
    GridSpec g(16);
    ModelParams p(0.0, 1.0);
    for (auto level : all_levels)
        for (int k = 1; k <= 8; ++k)
            CHECK(linear_symbol(k, p, g, level) < 0.0);
}

TEST_CASE("gravest mode grows at R = 2 and approaches the continuum rate")
{
    ModelParams p(2.0, 1.0);
    GridSpec g(64);
    double sym = linear_symbol(1, p, g, TruncationLevel::Conventional);
    CHECK(sym > 0.0);
    // continuum dispersion R k^2 - k^4 = 1 at k = 1; O(h^2) scheme
    double h = g.spacing();
    CHECK(std::abs(sym - 1.0) < 5.0 * h * h);
}

TEST_CASE("linear symbol rejects out-of-range wavenumbers")
{
    GridSpec g(8);
    ModelParams p(2.0, 1.0);
    CHECK_THROWS_AS(linear_symbol(-1, p, g, TruncationLevel::Conventional), std::invalid_argument);
    CHECK_THROWS_AS(linear_symbol(5, p, g, TruncationLevel::Conventional), std::invalid_argument);
}
