#pragma once

// Experiment orchestration: run the model-vs-reference comparison from a
// single config, compute error histories, and emit CSV data files plus a
// plotting helper script.

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ksfd/consistency.hpp"
#include "ksfd/grid.hpp"
#include "ksfd/integrator.hpp"
#include "ksfd/rhs.hpp"
#include "ksfd/spectral.hpp"

namespace ksfd {

struct FourierMode {
    int k = 1;
    double amplitude = 1.0;
    double phase = 0.0;
};

struct InitialCondition {
    enum class Kind { Sine, Fourier, SeededRandom };
    Kind kind = Kind::Sine;
    double amplitude = 10.0;          // Sine
    std::vector<FourierMode> modes;   // Fourier
    std::uint32_t seed = 1;           // SeededRandom
    int mode_cutoff = 4;              // SeededRandom

    std::function<double(double)> build() const
    {
        switch (kind) {
            case Kind::Sine: {
                double a = amplitude;
                return [a](double x) { return a * std::sin(x); };
            }
            case Kind::Fourier: {
                auto ms = modes;
                return [ms](double x) {
                    double s = 0.0;
                    for (const auto& m : ms) s += m.amplitude * std::sin(m.k * x + m.phase);
                    return s;
                };
            }
            case Kind::SeededRandom: {
                std::mt19937 rng(seed);
                std::uniform_real_distribution<double> amp(-1.0, 1.0), ph(0.0, two_pi);
                std::vector<FourierMode> ms;
                for (int k = 1; k <= mode_cutoff; ++k)
                    ms.push_back({k, amp(rng) / k, ph(rng)});
                return [ms](double x) {
                    double s = 0.0;
                    for (const auto& m : ms) s += m.amplitude * std::sin(m.k * x + m.phase);
                    return s;
                };
            }
        }
        throw std::logic_error("unreachable");
    }
};

// Defaults reproduce the reference comparison: R = 2, m = 8 on [0, 2*pi),
// u(x,0) = 10 sin x, integrated over 0 < t < 1.
struct ExperimentConfig {
    double R = 2.0;
    int m = 8;
    double length = two_pi;
    InitialCondition ic;
    double t_end = 1.0;
    int num_outputs = 51; // uniform in [0, t_end]
    std::vector<TruncationLevel> schemes = {
        TruncationLevel::Conventional,
        TruncationLevel::FirstCorrection,
        TruncationLevel::SecondCorrection,
        TruncationLevel::LowOrderEq3,
    };
    double gamma = 1.0;
    int oracle_n = 128;
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;

    std::vector<double> output_times() const
    {
        std::vector<double> t(static_cast<std::size_t>(num_outputs));
        for (int i = 0; i < num_outputs; ++i)
            t[static_cast<std::size_t>(i)] = t_end * i / (num_outputs - 1);
        return t;
    }

    void validate() const
    {
        if (m < 5) throw std::invalid_argument("config: m must be >= 5");
        if (!(t_end > 0.0)) throw std::invalid_argument("config: t_end must be positive");
        if (num_outputs < 2) throw std::invalid_argument("config: need at least 2 output times");
        if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::invalid_argument("config: gamma in [0,1]");
        if (!fft::is_power_of_two(oracle_n) || oracle_n < 64)
            throw std::invalid_argument("config: oracle_n must be a power of two >= 64");
        if (schemes.empty()) throw std::invalid_argument("config: no schemes requested");
        if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
            throw std::invalid_argument("config: tolerances must be positive");
    }
};

namespace detail {

// Shortest round-trip decimal formatting.
inline std::string format_double(double x)
{
    std::array<char, 32> buf{};
    auto [p, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), p);
}

inline double parse_double(const std::string& s)
{
    double x = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (ec != std::errc{} || p != s.data() + s.size())
        throw std::invalid_argument("config: bad number '" + s + "'");
    return x;
}

inline std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

inline std::string trim(const std::string& s)
{
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

} // namespace detail

inline TruncationLevel parse_scheme(const std::string& s)
{
    if (s == "conventional") return TruncationLevel::Conventional;
    if (s == "first") return TruncationLevel::FirstCorrection;
    if (s == "second") return TruncationLevel::SecondCorrection;
    if (s == "eq3") return TruncationLevel::LowOrderEq3;
    throw std::invalid_argument("unknown scheme '" + s + "'");
}

inline std::string emit_config(const ExperimentConfig& cfg)
{
    using detail::format_double;
    std::ostringstream os;
    os << "R = " << format_double(cfg.R) << "\n";
    os << "m = " << cfg.m << "\n";
    os << "L = " << format_double(cfg.length) << "\n";
    os << "gamma = " << format_double(cfg.gamma) << "\n";
    os << "t_end = " << format_double(cfg.t_end) << "\n";
    os << "num_outputs = " << cfg.num_outputs << "\n";
    os << "oracle_n = " << cfg.oracle_n << "\n";
    os << "rel_tol = " << format_double(cfg.rel_tol) << "\n";
    os << "abs_tol = " << format_double(cfg.abs_tol) << "\n";
    os << "schemes = ";
    for (std::size_t i = 0; i < cfg.schemes.size(); ++i)
        os << (i ? "," : "") << name(cfg.schemes[i]);
    os << "\n";
    switch (cfg.ic.kind) {
        case InitialCondition::Kind::Sine:
            os << "ic = sine\n";
            os << "ic_amplitude = " << format_double(cfg.ic.amplitude) << "\n";
            break;
        case InitialCondition::Kind::Fourier:
            os << "ic = fourier\n";
            os << "ic_modes = ";
            for (std::size_t i = 0; i < cfg.ic.modes.size(); ++i) {
                const auto& m = cfg.ic.modes[i];
                os << (i ? ";" : "") << m.k << ":" << format_double(m.amplitude) << ":"
                   << format_double(m.phase);
            }
            os << "\n";
            break;
        case InitialCondition::Kind::SeededRandom:
            os << "ic = random\n";
            os << "ic_seed = " << cfg.ic.seed << "\n";
            os << "ic_cutoff = " << cfg.ic.mode_cutoff << "\n";
            break;
    }
    return os.str();
}

inline ExperimentConfig parse_config(std::istream& in)
{
    ExperimentConfig cfg;
    std::string line;
    std::map<std::string, std::string> kv;
    while (std::getline(in, line)) {
        std::string t = detail::trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto eq = t.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: expected 'key = value', got '" + t + "'");
        kv[detail::trim(t.substr(0, eq))] = detail::trim(t.substr(eq + 1));
    }
    auto get = [&](const std::string& key) -> const std::string* {
        auto it = kv.find(key);
        return it == kv.end() ? nullptr : &it->second;
    };
    if (auto* v = get("R")) cfg.R = detail::parse_double(*v);
    if (auto* v = get("m")) cfg.m = std::stoi(*v);
    if (auto* v = get("L")) cfg.length = detail::parse_double(*v);
    if (auto* v = get("gamma")) cfg.gamma = detail::parse_double(*v);
    if (auto* v = get("t_end")) cfg.t_end = detail::parse_double(*v);
    if (auto* v = get("num_outputs")) cfg.num_outputs = std::stoi(*v);
    if (auto* v = get("oracle_n")) cfg.oracle_n = std::stoi(*v);
    if (auto* v = get("rel_tol")) cfg.rel_tol = detail::parse_double(*v);
    if (auto* v = get("abs_tol")) cfg.abs_tol = detail::parse_double(*v);
    if (auto* v = get("schemes")) {
        cfg.schemes.clear();
        for (const auto& s : detail::split(*v, ','))
            cfg.schemes.push_back(parse_scheme(detail::trim(s)));
    }
    if (auto* v = get("ic")) {
        if (*v == "sine") cfg.ic.kind = InitialCondition::Kind::Sine;
        else if (*v == "fourier") cfg.ic.kind = InitialCondition::Kind::Fourier;
        else if (*v == "random") cfg.ic.kind = InitialCondition::Kind::SeededRandom;
        else throw std::invalid_argument("config: unknown ic '" + *v + "'");
    }
    if (auto* v = get("ic_amplitude")) cfg.ic.amplitude = detail::parse_double(*v);
    if (auto* v = get("ic_modes")) {
        cfg.ic.modes.clear();
        for (const auto& entry : detail::split(*v, ';')) {
            auto parts = detail::split(entry, ':');
            if (parts.size() != 3)
                throw std::invalid_argument("config: ic_modes entries are k:amp:phase");
            cfg.ic.modes.push_back({std::stoi(parts[0]), detail::parse_double(parts[1]),
                                    detail::parse_double(parts[2])});
        }
    }
    if (auto* v = get("ic_seed")) cfg.ic.seed = static_cast<std::uint32_t>(std::stoul(*v));
    if (auto* v = get("ic_cutoff")) cfg.ic.mode_cutoff = std::stoi(*v);
    cfg.validate();
    return cfg;
}

// FNV-1a over the canonical emission; pins the default setup in tests.
inline std::uint64_t config_hash(const ExperimentConfig& cfg)
{
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : emit_config(cfg)) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

// Explicit stability cap for the model integrations: the most negative
// linear eigenvalue over all resolvable modes bounds the usable step.
inline double stability_step_cap(const ModelParams& p, const GridSpec& g, TruncationLevel level)
{
    double rho = 0.0;
    for (int k = 0; 2 * k <= g.num_nodes(); ++k)
        rho = std::max(rho, std::abs(linear_symbol(k, p, g, level)));
    return rho > 0.0 ? 3.0 / rho : 1.0;
}

struct SchemeResult {
    TruncationLevel level;
    bool failed = false;
    long steps_accepted = 0;
    long steps_rejected = 0;
    std::vector<StateVector> states;   // at output times
    std::vector<double> l2_error;      // vs sampled reference
    std::vector<double> linf_error;
    double max_l2 = 0.0;
    double max_linf = 0.0;
    double peak_linf = 0.0; // L-inf restricted to nodes around the reference maximum
};

struct ErrorReport {
    ExperimentConfig config;
    std::vector<double> times;
    std::vector<SchemeResult> schemes;
    SampledTrajectory reference; // oracle sampled on the model grid
    FineTrajectory fine;         // oracle on its own grid, for the field CSV
    bool oracle_resolution_warning = false;
    long oracle_steps = 0;
    double wall_seconds = 0.0;

    bool any_failed() const
    {
        for (const auto& s : schemes)
            if (s.failed) return true;
        return false;
    }
};

inline ErrorReport run_comparison(const ExperimentConfig& cfg)
{
    cfg.validate();
    auto t_begin = std::chrono::steady_clock::now();

    ErrorReport report;
    report.config = cfg;
    report.times = cfg.output_times();

    GridSpec grid(cfg.m, cfg.length);
    ModelParams params(cfg.R, cfg.gamma);
    auto ic = cfg.ic.build();

    // Reference solve, tighter tolerances than the model runs.
    SpectralConfig scfg;
    scfg.N = cfg.oracle_n;
    scfg.R = cfg.R;
    scfg.length = cfg.length;
    scfg.t_end = cfg.t_end;
    scfg.rel_tol = std::min(cfg.rel_tol, 1e-10);
    scfg.abs_tol = std::min(cfg.abs_tol, 1e-12);
    scfg.output_times = report.times;
    FineTrajectory fine = reference_solve(ic, scfg);
    report.oracle_resolution_warning = fine.resolution_warning;
    report.oracle_steps = fine.steps_accepted;
    report.reference = sample_at(fine, grid);
    report.fine = std::move(fine);

    StateVector u0(grid);
    for (int j = 0; j < cfg.m; ++j)
        u0[j] = ic(grid.node(j));

    for (TruncationLevel level : cfg.schemes) {
        SchemeResult res;
        res.level = level;

        RhsFunction f = [&grid, &params, level](double, const std::vector<double>& y,
                                                std::vector<double>& dydt) {
            StateVector u(grid, y);
            StateVector g = rhs_terms(u, params, level);
            dydt = g.values();
        };

        IntegrationConfig icfg;
        icfg.t_start = 0.0;
        icfg.t_end = cfg.t_end;
        icfg.rel_tol = cfg.rel_tol;
        icfg.abs_tol = cfg.abs_tol;
        icfg.output_times = report.times;
        icfg.max_step = stability_step_cap(params, grid, level);

        OdeTrajectory traj = integrate(f, u0.values(), icfg);
        res.failed = !traj.ok();
        res.steps_accepted = traj.steps_accepted;
        res.steps_rejected = traj.steps_rejected;

        for (std::size_t i = 0; i < traj.states.size(); ++i) {
            StateVector s(grid, traj.states[i]);
            const StateVector& ref = report.reference.states[i];
            std::vector<double> diff(static_cast<std::size_t>(cfg.m));
            for (int j = 0; j < cfg.m; ++j)
                diff[static_cast<std::size_t>(j)] = s[j] - ref[j];
            StateVector d(grid, std::move(diff));
            double l2 = norm_l2(d), li = norm_linf(d);
            res.l2_error.push_back(l2);
            res.linf_error.push_back(li);
            res.max_l2 = std::max(res.max_l2, l2);
            res.max_linf = std::max(res.max_linf, li);

            // Error near the reference peak (window of one node either side).
            int jmax = 0;
            for (int j = 1; j < cfg.m; ++j)
                if (ref[j] > ref[jmax]) jmax = j;
            for (int dj = -1; dj <= 1; ++dj) {
                int j = wrap(jmax + dj, cfg.m);
                res.peak_linf = std::max(res.peak_linf, std::abs(s[j] - ref[j]));
            }
            res.states.push_back(std::move(s));
        }
        report.schemes.push_back(std::move(res));
    }

    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_begin).count();
    return report;
}

namespace detail {

inline void write_field_csv(const std::filesystem::path& path, const std::vector<double>& times,
                            const std::vector<std::vector<double>>& states, int n)
{
    std::ofstream out(path, std::ios::binary);
    out << "t";
    for (int j = 0; j < n; ++j) out << ",x_" << j;
    out << "\n";
    for (std::size_t i = 0; i < times.size(); ++i) {
        out << format_double(times[i]);
        for (int j = 0; j < n; ++j) out << "," << format_double(states[i][static_cast<std::size_t>(j)]);
        out << "\n";
    }
}

} // namespace detail

// Helper script for an external plotter; the artifact renders nothing itself.
inline std::string plot_script_text()
{
    return R"(#!/usr/bin/env python3
"""Contour plot of the comparison data (contour interval 3).

Usage: python3 plot_contours.py [data_dir] [--half]
  --half restricts the view to x in [0, pi]; the CSVs always hold the full domain.
"""
import sys, csv, math
import numpy as np
import matplotlib.pyplot as plt

data_dir = sys.argv[1] if len(sys.argv) > 1 and not sys.argv[1].startswith("-") else "."
half = "--half" in sys.argv

def load(name):
    with open(f"{data_dir}/{name}") as f:
        rows = list(csv.reader(f))
    t = np.array([float(r[0]) for r in rows[1:]])
    u = np.array([[float(v) for v in r[1:]] for r in rows[1:]])
    return t, u

styles = {"oracle": "-", "conventional": ":", "first": "--", "second": "-."}
fig, ax = plt.subplots()
for name, ls in styles.items():
    try:
        t, u = load(f"fields_{name}.csv")
    except FileNotFoundError:
        continue
    m = u.shape[1]
    x = np.linspace(0, 2 * math.pi, m, endpoint=False)
    # close the periodic seam
    x = np.append(x, 2 * math.pi)
    u = np.hstack([u, u[:, :1]])
    umax = abs(u).max()
    levels = np.arange(-math.floor(umax / 3) * 3, umax + 3, 3.0)
    ax.contour(x, t, u, levels=levels, linestyles=ls, colors="k", linewidths=0.8)
if half:
    ax.set_xlim(0, math.pi)
ax.set_xlabel("x")
ax.set_ylabel("t")
fig.savefig(f"{data_dir}/contours.png", dpi=150)
print(f"wrote {data_dir}/contours.png")
)";
}

inline void write_report_files(const ErrorReport& report, const std::filesystem::path& dir)
{
    namespace fs = std::filesystem;
    fs::create_directories(dir);

    const int m = report.config.m;
    for (const auto& s : report.schemes) {
        std::vector<std::vector<double>> vals;
        for (const auto& st : s.states) vals.push_back(st.values());
        detail::write_field_csv(dir / (std::string("fields_") + name(s.level) + ".csv"),
                                report.times, vals, m);
    }
    detail::write_field_csv(dir / "fields_oracle.csv", report.fine.times, report.fine.states,
                            report.fine.N);

    {
        std::ofstream out(dir / "errors.csv", std::ios::binary);
        out << "t,scheme,L2,Linf\n";
        for (const auto& s : report.schemes)
            for (std::size_t i = 0; i < report.times.size(); ++i)
                out << detail::format_double(report.times[i]) << "," << name(s.level) << ","
                    << detail::format_double(s.l2_error[i]) << ","
                    << detail::format_double(s.linf_error[i]) << "\n";
    }
    {
        std::ofstream out(dir / "report.txt", std::ios::binary);
        out << "configuration\n-------------\n" << emit_config(report.config) << "\n";
        out << "reference: N = " << report.config.oracle_n
            << ", steps = " << report.oracle_steps
            << (report.oracle_resolution_warning ? " (RESOLUTION WARNING)" : "") << "\n";
        out << "wall time: " << detail::format_double(report.wall_seconds) << " s\n\n";
        out << "scheme        max L2        max Linf      peak Linf     steps  rejected  status\n";
        for (const auto& s : report.schemes) {
            char line[256];
            std::snprintf(line, sizeof line, "%-12s  %-12.5e  %-12.5e  %-12.5e  %-5ld  %-8ld  %s\n",
                          name(s.level), s.max_l2, s.max_linf, s.peak_linf, s.steps_accepted,
                          s.steps_rejected, s.failed ? "FAILED" : "ok");
            out << line;
        }
    }
    {
        std::ofstream out(dir / "plot_contours.py", std::ios::binary);
        out << plot_script_text();
    }
    {
        std::ofstream out(dir / "config.txt", std::ios::binary);
        out << emit_config(report.config);
    }
}

} // namespace ksfd
