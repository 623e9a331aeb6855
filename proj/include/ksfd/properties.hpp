#pragma once

// Randomized structural checks on the discrete schemes, shared between the
// CLI suite runner and the test binaries.  Deterministic seeds throughout.

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "ksfd/grid.hpp"
#include "ksfd/rhs.hpp"

namespace ksfd {

struct PropertyResult {
    std::string name;
    bool passed = false;
    double worst = 0.0; // worst-case deviation observed
};

namespace detail {

inline StateVector random_state(const GridSpec& g, std::mt19937& rng, double scale = 1.0)
{
    std::uniform_real_distribution<double> dist(-scale, scale);
    StateVector u(g);
    for (int j = 0; j < g.num_nodes(); ++j) u[j] = dist(rng);
    return u;
}

inline StateVector shift_state(const StateVector& u, int s)
{
    StateVector out(u.grid());
    for (int j = 0; j < u.size(); ++j) out[j] = u(j - s);
    return out;
}

// (sigma u)_j = -u_{-j}: the x -> -x, u -> -u symmetry on the ring.
inline StateVector reflect_negate(const StateVector& u)
{
    StateVector out(u.grid());
    for (int j = 0; j < u.size(); ++j) out[j] = -u(-j);
    return out;
}

inline double rel_diff(const StateVector& a, const StateVector& b)
{
    double num = 0.0, den = 0.0;
    for (int j = 0; j < a.size(); ++j) {
        num = std::max(num, std::abs(a[j] - b[j]));
        den = std::max(den, std::abs(a[j]));
    }
    return num / std::max(den, 1e-30);
}

inline const TruncationLevel all_levels[] = {
    TruncationLevel::Conventional,
    TruncationLevel::FirstCorrection,
    TruncationLevel::SecondCorrection,
    TruncationLevel::LowOrderEq3,
};

} // namespace detail

// max |rhs(c*1)| <= 1e-12 * (1 + |c|^3), all schemes, random (c, R, gamma).
inline PropertyResult check_fixed_point_invariance(int trials = 100, unsigned seed = 42)
{
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> cd(-10.0, 10.0), Rd(0.0, 4.0);
    const double gammas[] = {0.0, 0.5, 1.0};
    GridSpec g(8);
    PropertyResult res{"fixed-point-invariance", true, 0.0};
    for (int t = 0; t < trials; ++t) {
        double c = cd(rng);
        ModelParams p(Rd(rng), gammas[t % 3]);
        StateVector u(g);
        for (int j = 0; j < 8; ++j) u[j] = c;
        for (auto level : detail::all_levels) {
            StateVector gv = rhs_terms(u, p, level);
            double mx = norm_linf(gv);
            double bound = 1e-12 * (1.0 + std::abs(c) * std::abs(c) * std::abs(c));
            res.worst = std::max(res.worst, mx / bound);
            if (mx > bound) res.passed = false;
        }
    }
    return res;
}

// At gamma = 1, FirstCorrection and the low-order model are the same scheme.
inline PropertyResult check_cross_scheme_equivalence(int trials = 100, unsigned seed = 43,
                                                     StencilVariant variant = {})
{
    std::mt19937 rng(seed);
    GridSpec g(8);
    PropertyResult res{"cross-scheme-equivalence", true, 0.0};
    for (int t = 0; t < trials; ++t) {
        StateVector u = detail::random_state(g, rng, 5.0);
        ModelParams p(2.0, 1.0);
        StateVector a = rhs_terms(u, p, TruncationLevel::FirstCorrection, TermSet::Full, variant);
        StateVector b = rhs_terms(u, p, TruncationLevel::LowOrderEq3, TermSet::Full, variant);
        double d = detail::rel_diff(a, b);
        res.worst = std::max(res.worst, d);
        if (d > 1e-12) res.passed = false;
    }
    return res;
}

inline PropertyResult check_translation_equivariance(int trials = 100, unsigned seed = 44)
{
    std::mt19937 rng(seed);
    GridSpec g(8);
    std::uniform_int_distribution<int> sd(1, 7);
    PropertyResult res{"translation-equivariance", true, 0.0};
    for (int t = 0; t < trials; ++t) {
        StateVector u = detail::random_state(g, rng, 5.0);
        int s = sd(rng);
        ModelParams p(2.0, 1.0);
        for (auto level : detail::all_levels) {
            StateVector lhs = rhs_terms(detail::shift_state(u, s), p, level);
            StateVector rhs_shifted = detail::shift_state(rhs_terms(u, p, level), s);
            double d = detail::rel_diff(lhs, rhs_shifted);
            res.worst = std::max(res.worst, d);
            if (d > 1e-12) res.passed = false;
        }
    }
    return res;
}

inline PropertyResult check_reflection_equivariance(int trials = 100, unsigned seed = 45,
                                                    StencilVariant variant = {})
{
    std::mt19937 rng(seed);
    GridSpec g(8);
    PropertyResult res{"reflection-negation-equivariance", true, 0.0};
    for (int t = 0; t < trials; ++t) {
        StateVector u = detail::random_state(g, rng, 5.0);
        ModelParams p(2.0, 1.0);
        for (auto level : detail::all_levels) {
            StateVector lhs = rhs_terms(detail::reflect_negate(u), p, level, TermSet::Full, variant);
            StateVector rhs_ref =
                detail::reflect_negate(rhs_terms(u, p, level, TermSet::Full, variant));
            double d = detail::rel_diff(lhs, rhs_ref);
            res.worst = std::max(res.worst, d);
            if (d > 1e-12) res.passed = false;
        }
    }
    return res;
}

inline PropertyResult check_conservative_telescoping(int trials = 100, unsigned seed = 46)
{
    std::mt19937 rng(seed);
    GridSpec g(8);
    PropertyResult res{"conservative-telescoping", true, 0.0};
    for (int t = 0; t < trials; ++t) {
        StateVector u = detail::random_state(g, rng, 5.0);
        StateVector v = nonlinear_conservative(u);
        double sum = 0.0;
        for (int j = 0; j < v.size(); ++j) sum += v[j];
        sum *= g.spacing();
        res.worst = std::max(res.worst, std::abs(sum));
        if (std::abs(sum) > 1e-12) res.passed = false;
    }
    return res;
}

inline std::vector<PropertyResult> run_property_checks()
{
    return {
        check_fixed_point_invariance(),
        check_cross_scheme_equivalence(),
        check_translation_equivariance(),
        check_reflection_equivariance(),
        check_conservative_telescoping(),
    };
}

} // namespace ksfd
