#pragma once

// Discrete right-hand sides du_j/dt of the Kuramoto-Sivashinsky model on a
// periodic grid: the conventional second-order scheme, its first and second
// holistic corrections, and the standalone low-order model.  All stencils are
// direct gather loops over wrapped indices; coefficients are exact rationals
// converted once.

#include <cmath>
#include <stdexcept>

#include "ksfd/grid.hpp"

namespace ksfd {

// Two quadratic/cubic coefficient variants exist in circulation for the
// corrected schemes.  The defaults are the forms fixed by the cross-scheme
// identity with the low-order model and by reflection-negation equivariance;
// the alternates are kept selectable so the discrepancy stays documented in
// the test suite rather than being silently erased.
struct StencilVariant {
    bool squared_edge_terms = true;  // -3*u_{j+1}^2 / +3*u_{j-1}^2 vs lone -3*u_{j+1} / +3*u_{j-1}
    bool mirrored_cubic_tail = true; // u_{j-1}^2*(10*u_{j-2}-...) vs u_{j-1}^2*(10*u_{j-1}-...)
};

// Which blocks of the tendency to evaluate.  LinearR isolates the R-term
// discretisation for order-of-accuracy probes; Linear keeps all linear
// blocks (R term plus fourth difference) for symbol computation.
enum class TermSet { Full, Linear, LinearR };

namespace detail {

// Exact rational coefficient literals.
inline constexpr double c12 = 1.0 / 12.0;
inline constexpr double c16 = 1.0 / 16.0;
inline constexpr double c48 = 1.0 / 48.0;
inline constexpr double c120 = 1.0 / 120.0;
inline constexpr double c60480 = 1.0 / 60480.0;

} // namespace detail

struct RhsEvaluation {
    StateVector tendency;
    TruncationLevel level;
    ModelParams params;
};

inline StateVector rhs_terms(const StateVector& u, const ModelParams& p, TruncationLevel level,
                             TermSet terms = TermSet::Full, StencilVariant variant = {})
{
    const GridSpec& g = u.grid();
    const int m = g.num_nodes();
    const double h = g.spacing();
    const double h2 = h * h, h4 = h2 * h2;
    const double R = p.R, gam = p.gamma, gam2 = gam * gam;

    StateVector out(g);

    for (int j = 0; j < m; ++j) {
        const double um2 = u(j - 2), um1 = u(j - 1), u0 = u(j), up1 = u(j + 1), up2 = u(j + 2);
        const double d2 = up1 - 2.0 * u0 + um1;
        const double d4 = up2 - 4.0 * up1 + 6.0 * u0 - 4.0 * um1 + um2;

        double gval = 0.0;

        if (level == TruncationLevel::LowOrderEq3) {
            // Written with everything on the left equalling zero; the
            // tendency is the negation of the bracketed terms.
            if (terms != TermSet::LinearR)
                gval -= d4 / h4;
            gval -= R * (-up2 + 16.0 * up1 - 30.0 * u0 + 16.0 * um1 - um2) * detail::c12 / h2;
            if (terms == TermSet::Full) {
                gval -= u0 * (-up2 + 9.0 * up1 - 9.0 * um1 + um2) * detail::c16 / h;
                gval -= (up1 * up1 - um1 * um1) * detail::c16 / h;
                gval += (up2 * up1 - um2 * um1) * detail::c48 / h;
            }
            out[j] = gval;
            continue;
        }

        // Conventional truncation.
        gval -= gam * R * d2 / h2;
        if (terms != TermSet::LinearR)
            gval -= gam2 * d4 / h4;
        if (terms == TermSet::Full)
            gval -= gam * u0 * (up1 - um1) / (2.0 * h);

        if (level == TruncationLevel::Conventional) {
            out[j] = gval;
            continue;
        }

        // First correction: fourth-order R term and the quadratic block.
        gval += gam2 * R * detail::c12 * d4 / h2;
        if (terms == TermSet::Full) {
            const double edge_p = variant.squared_edge_terms ? up1 * up1 : up1;
            const double edge_m = variant.squared_edge_terms ? um1 * um1 : um1;
            const double q = up2 * up1 + 3.0 * up2 * u0 - 3.0 * edge_p - 3.0 * up1 * u0
                           + 3.0 * um1 * u0 + 3.0 * edge_m - 3.0 * um2 * u0 - um2 * um1;
            gval += gam2 * detail::c48 * q / h;
        }

        if (level == TruncationLevel::FirstCorrection) {
            out[j] = gval;
            continue;
        }

        // Second correction: cubic blocks, all nonlinear.
        if (terms == TermSet::Full) {
            gval += gam * h2 * u0 * u0 * detail::c120 * d2;
            const double tail = variant.mirrored_cubic_tail ? um2 : um1;
            const double c = u0 * u0 * (-30.0 * up2 - 170.0 * up1 + 256.0 * u0 - 170.0 * um1 - 30.0 * um2)
                           + u0 * (-126.0 * up2 * up1 - 54.0 * up1 * um1 - 126.0 * um2 * um1)
                           + up1 * up1 * (10.0 * up2 - 20.0 * up1 + 235.0 * u0)
                           + um1 * um1 * (10.0 * tail - 20.0 * um1 + 235.0 * u0);
            gval += gam2 * h2 * detail::c60480 * c;
        }
        out[j] = gval;
    }
    return out;
}

inline RhsEvaluation rhs(const StateVector& u, const ModelParams& p, TruncationLevel level,
                         StencilVariant variant = {})
{
    return {rhs_terms(u, p, level, TermSet::Full, variant), level, p};
}

// First alternative discretisation of u*u_x.
inline StateVector nonlinear_advective(const StateVector& u)
{
    const int m = u.size();
    const double h = u.grid().spacing();
    StateVector out(u.grid());
    for (int j = 0; j < m; ++j)
        out[j] = u(j) * (u(j + 1) - u(j - 1)) / (2.0 * h);
    return out;
}

// Second alternative; telescopes to zero over the periodic ring.
inline StateVector nonlinear_conservative(const StateVector& u)
{
    const int m = u.size();
    const double h = u.grid().spacing();
    StateVector out(u.grid());
    for (int j = 0; j < m; ++j)
        out[j] = (u(j + 1) * u(j + 1) - u(j - 1) * u(j - 1)) / (4.0 * h);
    return out;
}

// Eigenvalue of the linear part of the scheme on the circulant mode
// cos(k x_j), read off numerically by applying the stencil to the sampled
// mode and projecting; exact for circulant operators.
inline double linear_symbol(int k, const ModelParams& p, const GridSpec& g, TruncationLevel level)
{
    const int m = g.num_nodes();
    if (k < 0 || 2 * k > m)
        throw std::invalid_argument("linear_symbol: need 0 <= k <= m/2");
    StateVector mode(g);
    for (int j = 0; j < m; ++j)
        mode[j] = std::cos(k * g.node(j));
    StateVector applied = rhs_terms(mode, p, level, TermSet::Linear);
    double num = 0.0, den = 0.0;
    for (int j = 0; j < m; ++j) {
        num += applied[j] * mode[j];
        den += mode[j] * mode[j];
    }
    return num / den;
}

} // namespace ksfd
