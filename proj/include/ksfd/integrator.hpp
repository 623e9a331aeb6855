#pragma once

// Adaptive embedded Runge-Kutta integration (Dormand-Prince 5(4)) with a
// proportional-integral step controller and fourth-order dense output.
// Matrix-free: the right-hand side is any callable on raw state vectors.
// Output states are produced at exactly the requested times from the
// method's own interpolant, never by re-stepping.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

namespace ksfd {

struct IntegrationConfig {
    double t_start = 0.0;
    double t_end = 1.0;
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    long max_steps = 1'000'000;
    std::vector<double> output_times; // sorted, within [t_start, t_end]
    std::optional<double> initial_step;
    std::optional<double> max_step; // stability cap, e.g. from the linear symbol

    void validate() const
    {
        if (!(t_end > t_start))
            throw std::invalid_argument("IntegrationConfig: t_end must exceed t_start");
        if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
            throw std::invalid_argument("IntegrationConfig: tolerances must be positive");
        if (max_steps <= 0)
            throw std::invalid_argument("IntegrationConfig: max_steps must be positive");
        for (std::size_t i = 0; i < output_times.size(); ++i) {
            double t = output_times[i];
            if (t < t_start || t > t_end)
                throw std::invalid_argument("IntegrationConfig: output time outside span");
            if (i > 0 && !(t > output_times[i - 1]))
                throw std::invalid_argument("IntegrationConfig: output times must be strictly increasing");
        }
    }
};

enum class IntegrationStatus { Success, MaxStepsExceeded, StepSizeUnderflow };

struct OdeTrajectory {
    std::vector<double> times;
    std::vector<std::vector<double>> states;
    long steps_accepted = 0;
    long steps_rejected = 0;
    IntegrationStatus status = IntegrationStatus::Success;

    bool ok() const noexcept { return status == IntegrationStatus::Success; }
};

using RhsFunction = std::function<void(double t, const std::vector<double>& y, std::vector<double>& dydt)>;

namespace dopri {

// Butcher tableau, Dormand & Prince order 5(4).
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
inline constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// b - bhat (error weights), stage 7 = FSAL.
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// Dense-output weights (Hairer & Wanner CONTD5).
inline constexpr double d1 = -12715105075.0 / 11282082432.0;
inline constexpr double d3 = 87487479700.0 / 32700410799.0;
inline constexpr double d4 = -10690763975.0 / 1880347072.0;
inline constexpr double d5 = 701980252875.0 / 199316789632.0;
inline constexpr double d6 = -1453857185.0 / 822651844.0;
inline constexpr double d7 = 69997945.0 / 29380423.0;

} // namespace dopri

namespace detail {

inline double error_norm(const std::vector<double>& err, const std::vector<double>& y0,
                         const std::vector<double>& y1, double atol, double rtol)
{
    double sum = 0.0;
    const std::size_t n = err.size();
    for (std::size_t i = 0; i < n; ++i) {
        double sc = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
        double q = err[i] / sc;
        sum += q * q;
    }
    return std::sqrt(sum / static_cast<double>(n));
}

inline bool all_finite(const std::vector<double>& v)
{
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

// Hairer's curvature-based starting step (two trial RHS evaluations).
inline double initial_step_guess(const RhsFunction& f, double t0, const std::vector<double>& y0,
                                 const std::vector<double>& f0, double atol, double rtol,
                                 double t_span)
{
    const std::size_t n = y0.size();
    double dn0 = 0.0, dn1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double sc = atol + rtol * std::abs(y0[i]);
        dn0 += (y0[i] / sc) * (y0[i] / sc);
        dn1 += (f0[i] / sc) * (f0[i] / sc);
    }
    dn0 = std::sqrt(dn0 / n);
    dn1 = std::sqrt(dn1 / n);
    double h0 = (dn0 < 1e-5 || dn1 < 1e-5) ? 1e-6 : 0.01 * dn0 / dn1;
    h0 = std::min(h0, t_span);

    std::vector<double> y1(n), f1(n);
    for (std::size_t i = 0; i < n; ++i)
        y1[i] = y0[i] + h0 * f0[i];
    f(t0 + h0, y1, f1);
    double dn2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double sc = atol + rtol * std::abs(y0[i]);
        double d = (f1[i] - f0[i]) / sc;
        dn2 += d * d;
    }
    dn2 = std::sqrt(dn2 / n) / h0;

    double dmax = std::max(dn1, dn2);
    double h1 = (dmax <= 1e-15) ? std::max(1e-6, h0 * 1e-3)
                                : std::pow(0.01 / dmax, 1.0 / 5.0);
    return std::min({100.0 * h0, h1, t_span});
}

} // namespace detail

inline OdeTrajectory integrate(const RhsFunction& f, const std::vector<double>& y0,
                               const IntegrationConfig& cfg)
{
    cfg.validate();
    const std::size_t n = y0.size();
    const double safety = 0.9, min_factor = 0.2, max_factor = 10.0;
    const double alpha = 0.7 / 5.0, beta = 0.4 / 5.0; // PI exponents
    const double hmin = 16.0 * std::numeric_limits<double>::epsilon() *
                        std::max(std::abs(cfg.t_start), std::abs(cfg.t_end));

    OdeTrajectory traj;
    traj.times.reserve(cfg.output_times.size());
    traj.states.reserve(cfg.output_times.size());

    std::vector<double> y = y0, k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);
    std::vector<double> ytmp(n), ynew(n), err(n);
    double t = cfg.t_start;

    f(t, y, k1);
    double h = cfg.initial_step
                   ? *cfg.initial_step
                   : detail::initial_step_guess(f, t, y, k1, cfg.abs_tol, cfg.rel_tol,
                                                cfg.t_end - cfg.t_start);
    if (cfg.max_step) h = std::min(h, *cfg.max_step);

    std::size_t next_out = 0;
    // Emit any output exactly at t_start.
    while (next_out < cfg.output_times.size() && cfg.output_times[next_out] <= t) {
        traj.times.push_back(cfg.output_times[next_out]);
        traj.states.push_back(y);
        ++next_out;
    }

    double err_prev = 1.0;
    long steps = 0;

    while (t < cfg.t_end) {
        if (steps >= cfg.max_steps) {
            traj.status = IntegrationStatus::MaxStepsExceeded;
            return traj;
        }
        h = std::min(h, cfg.t_end - t);
        if (cfg.max_step) h = std::min(h, *cfg.max_step);
        if (h < hmin) {
            traj.status = IntegrationStatus::StepSizeUnderflow;
            return traj;
        }

        using namespace dopri;
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * a21 * k1[i];
        f(t + c2 * h, ytmp, k2);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        f(t + c3 * h, ytmp, k3);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        f(t + c4 * h, ytmp, k4);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        f(t + c5 * h, ytmp, k5);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        f(t + h, ytmp, k6);
        for (std::size_t i = 0; i < n; ++i)
            ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        f(t + h, ynew, k7); // FSAL

        ++steps;

        bool finite = detail::all_finite(ynew) && detail::all_finite(k7);
        double enorm = std::numeric_limits<double>::infinity();
        if (finite) {
            for (std::size_t i = 0; i < n; ++i)
                err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            enorm = detail::error_norm(err, y, ynew, cfg.abs_tol, cfg.rel_tol);
        }

        if (!std::isfinite(enorm) || enorm > 1.0) {
            // Rejected: halve on non-finite, PI shrink otherwise.
            ++traj.steps_rejected;
            double factor = std::isfinite(enorm)
                                ? std::max(min_factor, safety * std::pow(enorm, -alpha))
                                : 0.5;
            h *= std::min(factor, 0.9);
            continue;
        }

        // Dense output over [t, t+h] before advancing.
        if (next_out < cfg.output_times.size()) {
            std::vector<double> rc1(n), rc2(n), rc3(n), rc4(n), rc5(n);
            bool prepared = false;
            while (next_out < cfg.output_times.size() && cfg.output_times[next_out] <= t + h) {
                if (!prepared) {
                    using namespace dopri;
                    for (std::size_t i = 0; i < n; ++i) {
                        double dy = ynew[i] - y[i];
                        double bspl = h * k1[i] - dy;
                        rc1[i] = y[i];
                        rc2[i] = dy;
                        rc3[i] = bspl;
                        rc4[i] = dy - h * k7[i] - bspl;
                        rc5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] +
                                      d6 * k6[i] + d7 * k7[i]);
                    }
                    prepared = true;
                }
                double tout = cfg.output_times[next_out];
                double theta = (tout - t) / h, omt = 1.0 - theta;
                std::vector<double> yout(n);
                for (std::size_t i = 0; i < n; ++i)
                    yout[i] = rc1[i] + theta * (rc2[i] + omt * (rc3[i] + theta * (rc4[i] + omt * rc5[i])));
                traj.times.push_back(tout);
                traj.states.push_back(std::move(yout));
                ++next_out;
            }
        }

        // Accept.
        ++traj.steps_accepted;
        t += h;
        y.swap(ynew);
        k1.swap(k7);

        double factor = safety * std::pow(enorm > 0 ? enorm : 1e-16, -alpha) *
                        std::pow(err_prev, beta);
        factor = std::clamp(factor, min_factor, max_factor);
        h *= factor;
        err_prev = std::max(enorm, 1e-16);
    }

    return traj;
}

} // namespace ksfd
