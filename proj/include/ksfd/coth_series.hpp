#pragma once

// Exact Taylor coefficients of the inter-element coupling operator
// (z/2)*coth(z/2) = sum_k c_k z^{2k}.  Computed in arbitrary-precision
// rational arithmetic by matching series coefficients of
// f(z)*sinh(z/2) = (z/2)*cosh(z/2); denominators grow factorially so
// floating generation is useless here.

#include <stdexcept>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace ksfd {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

struct RationalCoefficient {
    BigInt numerator;
    BigInt denominator; // > 0, lowest terms
    int order;          // even exponent 2k it multiplies
};

inline std::vector<RationalCoefficient> coth_half_series(int max_order)
{
    if (max_order < 0 || max_order % 2 != 0)
        throw std::invalid_argument("coth_half_series: max_order must be even and >= 0");

    const int n_terms = max_order / 2 + 1;

    // s_j = 1 / (2^{2j+1} (2j+1)!)  -- sinh(z/2), coefficient of z^{2j+1}
    // t_n = 1 / (2^{2n+1} (2n)!)    -- (z/2)cosh(z/2), coefficient of z^{2n+1}
    std::vector<BigRational> s(n_terms), t(n_terms);
    BigInt fact = 1; // running (2j+1)!
    BigInt pow2 = 2; // running 2^{2j+1}
    for (int j = 0; j < n_terms; ++j) {
        if (j > 0) {
            fact *= BigInt(2 * j) * BigInt(2 * j + 1);
            pow2 *= 4;
        }
        s[j] = BigRational(1, pow2 * fact);
        t[j] = s[j] * BigInt(2 * j + 1); // (2n)! = (2n+1)!/(2n+1)
    }

    std::vector<BigRational> c(n_terms);
    for (int n = 0; n < n_terms; ++n) {
        BigRational acc = t[n];
        for (int k = 0; k < n; ++k)
            acc -= c[k] * s[n - k];
        c[n] = acc / s[0];
    }

    std::vector<RationalCoefficient> out;
    out.reserve(n_terms);
    for (int k = 0; k < n_terms; ++k)
        out.push_back({numerator(c[k]), denominator(c[k]), 2 * k});
    return out;
}

// Floating partial sum at z, for convergence checks against (z/2)coth(z/2).
inline double evaluate_series(const std::vector<RationalCoefficient>& coeffs, double z)
{
    double acc = 0.0;
    double zpow = 1.0;
    for (const auto& c : coeffs) {
        acc += static_cast<double>(BigRational(c.numerator, c.denominator)) * zpow;
        zpow *= z * z;
    }
    return acc;
}

} // namespace ksfd
