#pragma once

// Grid-refinement verification of the truncation-order claims: apply a
// discrete RHS to a smooth analytic field, subtract the exact continuum
// tendency at the nodes, and fit the L-inf residual slope in log h.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ksfd/grid.hpp"
#include "ksfd/rhs.hpp"

namespace ksfd {

// Smooth periodic field with closed-form derivatives, so the continuum
// tendency needs no second numerical differentiation layer.
struct AnalyticField {
    std::function<double(double)> u;
    std::function<double(double)> du;   // u_x
    std::function<double(double)> d2u;  // u_xx
    std::function<double(double)> d4u;  // u_xxxx
};

inline AnalyticField sine_field(double amplitude = 1.0, int k = 1)
{
    double a = amplitude;
    double kk = static_cast<double>(k);
    return {
        [a, kk](double x) { return a * std::sin(kk * x); },
        [a, kk](double x) { return a * kk * std::cos(kk * x); },
        [a, kk](double x) { return -a * kk * kk * std::sin(kk * x); },
        [a, kk](double x) { return a * kk * kk * kk * kk * std::sin(kk * x); },
    };
}

enum class ProbeKind {
    LinearR,                // R-term blocks only, vs -R u_xx
    Full,                   // whole tendency, vs -(u u_x + R u_xx + u_xxxx)
    AdvectiveNonlinear,     // u_j(u_{j+1}-u_{j-1})/2h vs u u_x
    ConservativeNonlinear,  // (u_{j+1}^2-u_{j-1}^2)/4h vs u u_x
};

inline const char* name(ProbeKind probe) noexcept
{
    switch (probe) {
        case ProbeKind::LinearR: return "linear-R";
        case ProbeKind::Full: return "full";
        case ProbeKind::AdvectiveNonlinear: return "advective";
        case ProbeKind::ConservativeNonlinear: return "conservative";
    }
    return "?";
}

struct OrderEstimate {
    TruncationLevel scheme;
    ProbeKind probe;
    std::vector<int> m_values;
    std::vector<double> residuals;     // L-inf per grid
    std::vector<bool> excluded;        // residual at rounding level, left out of the fit
    double fitted_order = 0.0;         // slope from the finest three usable grids
    bool degenerate = false;           // field in the stencil's null space everywhere
};

namespace detail {

inline double fit_slope(const std::vector<double>& log_h, const std::vector<double>& log_e)
{
    const std::size_t n = log_h.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += log_h[i];
        sy += log_e[i];
        sxx += log_h[i] * log_h[i];
        sxy += log_h[i] * log_e[i];
    }
    double denom = n * sxx - sx * sx;
    return (n * sxy - sx * sy) / denom;
}

} // namespace detail

inline double linf_residual(const AnalyticField& field, const ModelParams& p,
                            TruncationLevel level, ProbeKind probe, const GridSpec& g)
{
    const int m = g.num_nodes();
    StateVector u(g);
    for (int j = 0; j < m; ++j)
        u[j] = field.u(g.node(j));

    StateVector discrete = [&] {
        switch (probe) {
            case ProbeKind::LinearR: return rhs_terms(u, p, level, TermSet::LinearR);
            case ProbeKind::Full: return rhs_terms(u, p, level, TermSet::Full);
            case ProbeKind::AdvectiveNonlinear: return nonlinear_advective(u);
            case ProbeKind::ConservativeNonlinear: return nonlinear_conservative(u);
        }
        throw std::logic_error("unreachable");
    }();

    double res = 0.0;
    for (int j = 0; j < m; ++j) {
        double x = g.node(j);
        double exact = 0.0;
        switch (probe) {
            case ProbeKind::LinearR: exact = -p.R * field.d2u(x); break;
            case ProbeKind::Full:
                exact = -(field.u(x) * field.du(x) + p.R * field.d2u(x) + field.d4u(x));
                break;
            case ProbeKind::AdvectiveNonlinear:
            case ProbeKind::ConservativeNonlinear:
                exact = field.u(x) * field.du(x);
                break;
        }
        res = std::max(res, std::abs(discrete[j] - exact));
    }
    return res;
}

inline OrderEstimate observed_order(const AnalyticField& field, const ModelParams& p,
                                    TruncationLevel level, ProbeKind probe,
                                    const std::vector<int>& m_list, double length = two_pi)
{
    if (m_list.size() < 3)
        throw std::invalid_argument("observed_order: need at least 3 grid levels");
    for (std::size_t i = 0; i < m_list.size(); ++i) {
        if (m_list[i] < 5 || (i > 0 && m_list[i] <= m_list[i - 1]))
            throw std::invalid_argument("observed_order: m_list must be increasing, each >= 5");
    }

    OrderEstimate est;
    est.scheme = level;
    est.probe = probe;
    est.m_values = m_list;

    for (int m : m_list) {
        GridSpec g(m, length);
        double res = linf_residual(field, p, level, probe, g);
        est.residuals.push_back(res);
        est.excluded.push_back(res <= 1e-14);
    }

    // Fit over the finest three grids with usable residuals; coarse grids can
    // sit outside the asymptotic range and bias the slope.
    std::vector<double> log_h, log_e;
    for (std::size_t i = m_list.size(); i-- > 0 && log_h.size() < 3;) {
        if (est.excluded[i]) continue;
        log_h.push_back(std::log(length / m_list[i]));
        log_e.push_back(std::log(est.residuals[i]));
    }
    if (log_h.size() < 3) {
        est.degenerate = true;
        return est;
    }
    est.fitted_order = detail::fit_slope(log_h, log_e);
    return est;
}

// Residual scaling in the field amplitude at fixed m, separating O(h^p)
// from O(|u|^q) contributions: residual measured at a in {1, 1/2, 1/4}
// and the slope fitted in log a.
struct AmplitudeEstimate {
    std::vector<double> amplitudes;
    std::vector<double> residuals;
    double fitted_order = 0.0;
};

inline AmplitudeEstimate amplitude_order(const std::function<AnalyticField(double)>& family,
                                         const ModelParams& p, TruncationLevel level,
                                         ProbeKind probe, int m, double length = two_pi)
{
    AmplitudeEstimate est;
    est.amplitudes = {1.0, 0.5, 0.25};
    GridSpec g(m, length);
    std::vector<double> log_a, log_e;
    for (double a : est.amplitudes) {
        double res = linf_residual(family(a), p, level, probe, g);
        est.residuals.push_back(res);
        log_a.push_back(std::log(a));
        log_e.push_back(std::log(std::max(res, 1e-300)));
    }
    est.fitted_order = detail::fit_slope(log_a, log_e);
    return est;
}

} // namespace ksfd
