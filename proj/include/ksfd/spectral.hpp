#pragma once

// High-resolution Fourier pseudospectral reference solver for
//   u_t + u u_x + R u_xx + u_xxxx = 0
// on the periodic domain.  The linear symbol R k^2 - k^4 is propagated
// exactly through per-step integrating factors; the dealiased nonlinear
// update is advanced by an embedded Runge-Kutta 5(4) pair with adaptive
// error control.  Power-of-two resolutions only (own radix-2 FFT).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

#include "ksfd/grid.hpp"
#include "ksfd/integrator.hpp"

namespace ksfd {

namespace fft {

inline bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// In-place iterative radix-2 Cooley-Tukey; sign = -1 forward, +1 inverse.
// Inverse includes the 1/n scaling.
inline void transform(std::vector<std::complex<double>>& a, int sign)
{
    const std::size_t n = a.size();
    if (!is_power_of_two(static_cast<int>(n)))
        throw std::invalid_argument("fft: length must be a power of two");

    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        double ang = sign * two_pi / static_cast<double>(len);
        std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                std::complex<double> u = a[i + k];
                std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
    if (sign > 0) {
        double inv = 1.0 / static_cast<double>(n);
        for (auto& x : a) x *= inv;
    }
}

inline void forward(std::vector<std::complex<double>>& a) { transform(a, -1); }
inline void inverse(std::vector<std::complex<double>>& a) { transform(a, +1); }

// Signed wavenumber index of spectral bin i on an n-point grid.
inline int wavenumber(std::size_t i, std::size_t n)
{
    return i <= n / 2 ? static_cast<int>(i) : static_cast<int>(i) - static_cast<int>(n);
}

} // namespace fft

struct SpectralConfig {
    int N = 128; // collocation points, power of two, >= 64
    bool dealias = true;
    double R = 2.0;
    double length = two_pi;
    double t_start = 0.0;
    double t_end = 1.0;
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    long max_steps = 10'000'000;
    std::vector<double> output_times;

    void validate() const
    {
        if (!fft::is_power_of_two(N) || N < 64)
            throw std::invalid_argument("SpectralConfig: N must be a power of two >= 64");
        if (!(t_end > t_start))
            throw std::invalid_argument("SpectralConfig: t_end must exceed t_start");
        if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
            throw std::invalid_argument("SpectralConfig: tolerances must be positive");
    }
};

struct FineTrajectory {
    std::vector<double> times;
    std::vector<std::vector<double>> states; // real space, N values each
    int N = 0;
    double length = two_pi;
    long steps_accepted = 0;
    long steps_rejected = 0;
    IntegrationStatus status = IntegrationStatus::Success;
    bool resolution_warning = false; // energy crept into the top third of the spectrum
    double max_imag_residue = 0.0;

    bool ok() const noexcept { return status == IntegrationStatus::Success; }
};

namespace detail {

class SpectralWorkspace {
public:
    explicit SpectralWorkspace(const SpectralConfig& cfg)
        : cfg_(cfg), n_(static_cast<std::size_t>(cfg.N))
    {
        k_.resize(n_);
        lin_.resize(n_);
        keep_.resize(n_);
        const double kscale = two_pi / cfg.length;
        for (std::size_t i = 0; i < n_; ++i) {
            double k = kscale * fft::wavenumber(i, n_);
            k_[i] = k;
            lin_[i] = cfg.R * k * k - k * k * k * k; // u_hat' = lin*u_hat + N(u_hat)
            keep_[i] = !cfg.dealias || std::abs(fft::wavenumber(i, n_)) <= static_cast<int>(n_) / 3;
        }
    }

    // N(u_hat) = -FFT(u * u_x), 2/3-rule dealiased.
    void nonlinear(const std::vector<std::complex<double>>& uhat,
                   std::vector<std::complex<double>>& out) const
    {
        std::vector<std::complex<double>> a(n_), b(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            std::complex<double> ui = keep_[i] ? uhat[i] : std::complex<double>(0.0, 0.0);
            a[i] = ui;
            b[i] = std::complex<double>(0.0, 1.0) * k_[i] * ui;
        }
        fft::inverse(a);
        fft::inverse(b);
        for (std::size_t i = 0; i < n_; ++i)
            a[i] = std::complex<double>(a[i].real() * b[i].real(), 0.0);
        fft::forward(a);
        for (std::size_t i = 0; i < n_; ++i)
            out[i] = keep_[i] ? -a[i] : std::complex<double>(0.0, 0.0);
    }

    const std::vector<double>& linear_symbol() const { return lin_; }
    std::size_t size() const { return n_; }

private:
    SpectralConfig cfg_;
    std::size_t n_;
    std::vector<double> k_;
    std::vector<double> lin_;
    std::vector<bool> keep_;
};

inline double spectral_error_norm(const std::vector<std::complex<double>>& err,
                                  const std::vector<std::complex<double>>& y0,
                                  const std::vector<std::complex<double>>& y1,
                                  double atol, double rtol)
{
    double sum = 0.0;
    const std::size_t n = err.size();
    for (std::size_t i = 0; i < n; ++i) {
        double sc = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
        double q = std::abs(err[i]) / sc;
        sum += q * q;
    }
    return std::sqrt(sum / static_cast<double>(n));
}

} // namespace detail

inline FineTrajectory reference_solve(const std::function<double(double)>& ic,
                                      const SpectralConfig& cfg)
{
    cfg.validate();
    const std::size_t n = static_cast<std::size_t>(cfg.N);
    detail::SpectralWorkspace ws(cfg);
    const std::vector<double>& lin = ws.linear_symbol();

    FineTrajectory traj;
    traj.N = cfg.N;
    traj.length = cfg.length;

    // Initial spectrum.
    std::vector<std::complex<double>> uhat(n);
    for (std::size_t i = 0; i < n; ++i)
        uhat[i] = ic(cfg.length * static_cast<double>(i) / static_cast<double>(n));
    fft::forward(uhat);

    auto emit = [&](double t, const std::vector<std::complex<double>>& spec) {
        std::vector<std::complex<double>> tmp = spec;
        fft::inverse(tmp);
        std::vector<double> u(n);
        double imag_max = 0.0, e_total = 0.0, e_top = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            u[i] = tmp[i].real();
            imag_max = std::max(imag_max, std::abs(tmp[i].imag()));
        }
        for (std::size_t i = 0; i < n; ++i) {
            double e = std::norm(spec[i]);
            e_total += e;
            if (std::abs(fft::wavenumber(i, n)) > static_cast<int>(n) / 3) e_top += e;
        }
        if (e_total > 0.0 && e_top > 1e-8 * e_total) traj.resolution_warning = true;
        traj.max_imag_residue = std::max(traj.max_imag_residue, imag_max);
        traj.times.push_back(t);
        traj.states.push_back(std::move(u));
    };

    std::vector<double> outs = cfg.output_times;
    if (outs.empty()) outs = {cfg.t_end};

    // Lawson form of Dormand-Prince 5(4): stage values carry exp(lin*dt*(c_i-c_j))
    // factors, so every exponential has a nonpositive multiple of k^4 and cannot
    // overflow.  Steps land exactly on output times.
    using Cvec = std::vector<std::complex<double>>;
    const double cs[7] = {0.0, dopri::c2, dopri::c3, dopri::c4, dopri::c5, 1.0, 1.0};
    const double a[7][6] = {
        {},
        {dopri::a21},
        {dopri::a31, dopri::a32},
        {dopri::a41, dopri::a42, dopri::a43},
        {dopri::a51, dopri::a52, dopri::a53, dopri::a54},
        {dopri::a61, dopri::a62, dopri::a63, dopri::a64, dopri::a65},
        {dopri::b1, 0.0, dopri::b3, dopri::b4, dopri::b5, dopri::b6},
    };
    const double e[7] = {dopri::e1, 0.0, dopri::e3, dopri::e4, dopri::e5, dopri::e6, dopri::e7};

    const double safety = 0.9, min_factor = 0.2, max_factor = 10.0;
    const double alpha = 0.7 / 5.0, beta = 0.4 / 5.0;
    const double hmin = 64.0 * std::numeric_limits<double>::epsilon() *
                        std::max(std::abs(cfg.t_start), std::abs(cfg.t_end));

    double t = cfg.t_start;
    std::size_t next_out = 0;
    while (next_out < outs.size() && outs[next_out] <= t) {
        emit(outs[next_out], uhat);
        ++next_out;
    }

    // Initial step: bound by the nonlinear advection rate.
    double umax = 0.0;
    {
        Cvec tmp = uhat;
        fft::inverse(tmp);
        for (auto& z : tmp) umax = std::max(umax, std::abs(z.real()));
    }
    double kmax = two_pi / cfg.length * (static_cast<double>(n) / 2.0);
    double h = std::min(0.1 / std::max(1.0, umax * kmax), cfg.t_end - cfg.t_start);

    std::vector<Cvec> kst(7, Cvec(n));
    Cvec stage(n), unew(n), err(n);
    double err_prev = 1.0;
    long steps = 0;

    while (t < cfg.t_end) {
        if (steps >= cfg.max_steps) {
            traj.status = IntegrationStatus::MaxStepsExceeded;
            return traj;
        }
        double t_limit = next_out < outs.size() ? outs[next_out] : cfg.t_end;
        h = std::min(h, t_limit - t);
        if (h < hmin) {
            traj.status = IntegrationStatus::StepSizeUnderflow;
            return traj;
        }

        ws.nonlinear(uhat, kst[0]);
        for (int s = 1; s < 7; ++s) {
            for (std::size_t i = 0; i < n; ++i) {
                std::complex<double> acc = std::exp(lin[i] * cs[s] * h) * uhat[i];
                for (int j = 0; j < s; ++j) {
                    if (a[s][j] == 0.0) continue;
                    acc += h * a[s][j] * std::exp(lin[i] * (cs[s] - cs[j]) * h) * kst[j][i];
                }
                stage[i] = acc;
            }
            if (s < 6)
                ws.nonlinear(stage, kst[s]);
            else {
                unew = stage; // stage 7 shares c=1 and the b-row: this is u_{n+1}
                ws.nonlinear(unew, kst[6]);
            }
        }

        ++steps;
        for (std::size_t i = 0; i < n; ++i) {
            std::complex<double> acc(0.0, 0.0);
            for (int s = 0; s < 7; ++s) {
                if (e[s] == 0.0) continue;
                acc += e[s] * std::exp(lin[i] * (1.0 - cs[s]) * h) * kst[s][i];
            }
            err[i] = h * acc;
        }
        double enorm = detail::spectral_error_norm(err, uhat, unew, cfg.abs_tol, cfg.rel_tol);

        if (!std::isfinite(enorm) || enorm > 1.0) {
            ++traj.steps_rejected;
            double factor = std::isfinite(enorm)
                                ? std::max(min_factor, safety * std::pow(enorm, -alpha))
                                : 0.5;
            h *= std::min(factor, 0.9);
            continue;
        }

        ++traj.steps_accepted;
        t += h;
        uhat.swap(unew);

        while (next_out < outs.size() && outs[next_out] <= t + hmin) {
            emit(outs[next_out], uhat);
            ++next_out;
        }

        double factor = safety * std::pow(enorm > 0 ? enorm : 1e-16, -alpha) *
                        std::pow(err_prev, beta);
        h *= std::clamp(factor, min_factor, max_factor);
        err_prev = std::max(enorm, 1e-16);
    }
    while (next_out < outs.size()) {
        emit(outs[next_out], uhat);
        ++next_out;
    }

    return traj;
}

// Restrict a fine-grid trajectory to a coarse model grid.  Exact nodal
// extraction when the fine grid is a multiple; trigonometric interpolation
// (exact for band-limited data) otherwise.
struct SampledTrajectory {
    std::vector<double> times;
    std::vector<StateVector> states;
};

inline SampledTrajectory sample_at(const FineTrajectory& traj, const GridSpec& grid)
{
    if (std::abs(traj.length - grid.length()) > 1e-12 * std::max(1.0, grid.length()))
        throw std::invalid_argument("sample_at: domain lengths differ");

    const std::size_t n = static_cast<std::size_t>(traj.N);
    const int m = grid.num_nodes();
    SampledTrajectory out;
    out.times = traj.times;
    out.states.reserve(traj.states.size());

    const bool exact = traj.N % m == 0;
    const int stride = exact ? traj.N / m : 0;

    for (const auto& fine : traj.states) {
        std::vector<double> coarse(static_cast<std::size_t>(m));
        if (exact) {
            for (int j = 0; j < m; ++j)
                coarse[static_cast<std::size_t>(j)] = fine[static_cast<std::size_t>(j * stride)];
        } else {
            std::vector<std::complex<double>> spec(fine.begin(), fine.end());
            fft::forward(spec);
            for (int j = 0; j < m; ++j) {
                double x = grid.node(j);
                std::complex<double> acc(0.0, 0.0);
                for (std::size_t i = 0; i < n; ++i) {
                    int k = fft::wavenumber(i, n);
                    double w = (2 * std::abs(k) == static_cast<int>(n)) ? 0.5 : 1.0;
                    // Nyquist split keeps the interpolant real.
                    double phase = two_pi / traj.length * k * x;
                    acc += w * spec[i] * std::complex<double>(std::cos(phase), std::sin(phase));
                    if (2 * std::abs(k) == static_cast<int>(n))
                        acc += w * std::conj(spec[i]) *
                               std::complex<double>(std::cos(phase), -std::sin(phase));
                }
                coarse[static_cast<std::size_t>(j)] = acc.real() / static_cast<double>(n);
            }
        }
        out.states.emplace_back(grid, std::move(coarse));
    }
    return out;
}

} // namespace ksfd
