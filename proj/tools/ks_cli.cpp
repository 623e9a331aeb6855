// Command-line driver: scheme-vs-reference comparisons, convergence-order
// checks, coupling-operator coefficients, and canned verification suites.
//
// Exit codes: 0 success, 1 numerical failure, 2 configuration error.

#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ksfd/consistency.hpp"
#include "ksfd/coth_series.hpp"
#include "ksfd/experiment.hpp"
#include "ksfd/properties.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_numerical = 1;
constexpr int exit_config = 2;

int cmd_compare(const std::string& config_file, const std::vector<std::string>& scheme_names,
                const ksfd::ExperimentConfig& overrides, const std::vector<std::string>& set_keys,
                const std::string& out_dir)
{
    ksfd::ExperimentConfig cfg;
    if (!config_file.empty()) {
        std::ifstream in(config_file);
        if (!in) {
            std::cerr << "cannot open config file '" << config_file << "'\n";
            return exit_config;
        }
        cfg = ksfd::parse_config(in);
    }
    for (const auto& key : set_keys) {
        if (key == "R") cfg.R = overrides.R;
        else if (key == "m") cfg.m = overrides.m;
        else if (key == "gamma") cfg.gamma = overrides.gamma;
        else if (key == "t_end") cfg.t_end = overrides.t_end;
        else if (key == "oracle_n") cfg.oracle_n = overrides.oracle_n;
        else if (key == "amplitude") cfg.ic.amplitude = overrides.ic.amplitude;
    }
    if (!scheme_names.empty()) {
        cfg.schemes.clear();
        for (const auto& s : scheme_names) cfg.schemes.push_back(ksfd::parse_scheme(s));
    }
    cfg.validate();

    ksfd::ErrorReport report = ksfd::run_comparison(cfg);
    ksfd::write_report_files(report, out_dir);

    std::cout << "wrote " << out_dir << "/{fields_*.csv,errors.csv,report.txt,plot_contours.py}\n";
    for (const auto& s : report.schemes)
        std::cout << ksfd::name(s.level) << ": max L2 = " << s.max_l2
                  << ", max Linf = " << s.max_linf << (s.failed ? "  FAILED" : "") << "\n";
    if (report.oracle_resolution_warning)
        std::cerr << "warning: reference solution under-resolved\n";
    return report.any_failed() ? exit_numerical : exit_ok;
}

int cmd_consistency(const std::vector<std::string>& scheme_names, const std::vector<int>& m_list,
                    double R, const std::string& out_file)
{
    std::vector<ksfd::TruncationLevel> levels;
    for (const auto& s : scheme_names) levels.push_back(ksfd::parse_scheme(s));

    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!out_file.empty()) {
        file.open(out_file, std::ios::binary);
        os = &file;
    }
    *os << "scheme,probe,m,residual,fitted_order\n";
    ksfd::ModelParams params(R, 1.0);
    ksfd::AnalyticField field = ksfd::sine_field();
    for (auto level : levels) {
        for (auto probe : {ksfd::ProbeKind::LinearR, ksfd::ProbeKind::Full}) {
            auto est = ksfd::observed_order(field, params, level, probe, m_list);
            for (std::size_t i = 0; i < est.m_values.size(); ++i)
                *os << ksfd::name(level) << "," << ksfd::name(probe) << "," << est.m_values[i]
                    << "," << est.residuals[i] << "," << est.fitted_order << "\n";
        }
    }
    return exit_ok;
}

int cmd_coefficients(int max_order)
{
    auto coeffs = ksfd::coth_half_series(max_order);
    std::cout << "order, numerator, denominator\n";
    for (const auto& c : coeffs)
        std::cout << c.order << ", " << c.numerator << ", " << c.denominator << "\n";
    return exit_ok;
}

int suite_properties()
{
    auto results = ksfd::run_property_checks();
    bool all = true;
    std::cout << "{\n  \"suite\": \"properties\",\n  \"checks\": [\n";
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& r = results[i];
        all = all && r.passed;
        std::cout << "    {\"name\": \"" << r.name << "\", \"passed\": "
                  << (r.passed ? "true" : "false") << ", \"worst\": " << r.worst << "}"
                  << (i + 1 < results.size() ? "," : "") << "\n";
    }
    std::cout << "  ],\n  \"passed\": " << (all ? "true" : "false") << "\n}\n";
    return all ? exit_ok : exit_numerical;
}

int suite_consistency()
{
    ksfd::ModelParams params(2.0, 1.0);
    ksfd::AnalyticField field = ksfd::sine_field();
    std::vector<int> ms = {16, 32, 64};

    auto conv = ksfd::observed_order(field, params, ksfd::TruncationLevel::Conventional,
                                     ksfd::ProbeKind::LinearR, ms);
    auto first = ksfd::observed_order(field, params, ksfd::TruncationLevel::FirstCorrection,
                                      ksfd::ProbeKind::LinearR, ms);
    bool conv_ok = conv.fitted_order > 1.8 && conv.fitted_order < 2.2;
    bool first_ok = first.fitted_order > 3.8 && first.fitted_order < 4.2;
    std::cout << "{\n  \"suite\": \"consistency\",\n"
              << "  \"conventional_linear_R_order\": " << conv.fitted_order << ",\n"
              << "  \"first_correction_linear_R_order\": " << first.fitted_order << ",\n"
              << "  \"passed\": " << ((conv_ok && first_ok) ? "true" : "false") << "\n}\n";
    return (conv_ok && first_ok) ? exit_ok : exit_numerical;
}

int suite_figure1()
{
    ksfd::ExperimentConfig cfg; // defaults are the reference setup
    ksfd::ErrorReport report = ksfd::run_comparison(cfg);
    double conv = 0.0, first = 0.0, second = 0.0;
    for (const auto& s : report.schemes) {
        if (s.level == ksfd::TruncationLevel::Conventional) conv = s.max_l2;
        if (s.level == ksfd::TruncationLevel::FirstCorrection) first = s.max_l2;
        if (s.level == ksfd::TruncationLevel::SecondCorrection) second = s.max_l2;
    }
    bool ordering = first < conv && second < conv;
    bool ok = ordering && !report.any_failed();
    std::cout << "{\n  \"suite\": \"figure1\",\n"
              << "  \"max_l2\": {\"conventional\": " << conv << ", \"first\": " << first
              << ", \"second\": " << second << "},\n"
              << "  \"corrections_beat_conventional\": " << (ordering ? "true" : "false") << ",\n"
              << "  \"passed\": " << (ok ? "true" : "false") << "\n}\n";
    return ok ? exit_ok : exit_numerical;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Holistic finite-difference models of the Kuramoto-Sivashinsky equation"};
    app.require_subcommand(1);

    // compare
    auto* compare = app.add_subcommand("compare", "run schemes against the spectral reference");
    std::string config_file, out_dir = "out";
    std::vector<std::string> scheme_names;
    ksfd::ExperimentConfig ov;
    compare->add_option("--config", config_file, "config file (key = value lines)");
    auto* oR = compare->add_option("--R", ov.R, "linear growth parameter");
    auto* om = compare->add_option("--m", ov.m, "model grid nodes");
    auto* og = compare->add_option("--gamma", ov.gamma, "element coupling in [0,1]");
    auto* ot = compare->add_option("--t-end", ov.t_end, "integration end time");
    auto* on = compare->add_option("--oracle-n", ov.oracle_n, "reference resolution (power of two)");
    auto* oa = compare->add_option("--amplitude", ov.ic.amplitude, "sine initial-condition amplitude");
    compare->add_option("--scheme", scheme_names, "conventional|first|second|eq3 (repeatable)");
    compare->add_option("--out", out_dir, "output directory");

    // consistency
    auto* consistency = app.add_subcommand("consistency", "grid-refinement order verification");
    std::vector<std::string> cs_schemes = {"conventional", "first", "second", "eq3"};
    std::vector<int> cs_m = {8, 16, 32, 64};
    double cs_R = 2.0;
    std::string cs_out;
    consistency->add_option("--schemes", cs_schemes, "schemes to probe")->delimiter(',');
    consistency->add_option("--m", cs_m, "grid sizes")->delimiter(',');
    consistency->add_option("--R", cs_R, "linear growth parameter");
    consistency->add_option("--out", cs_out, "CSV output file (default stdout)");

    // coefficients
    auto* coefficients = app.add_subcommand("coefficients", "coupling-operator series coefficients");
    int max_order = 6;
    coefficients->add_option("--max-order", max_order, "highest even order");

    // suite
    auto* suite = app.add_subcommand("suite", "canned verification suites");
    std::string suite_kind;
    suite->add_option("kind", suite_kind, "properties|consistency|figure1")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*compare) {
            std::vector<std::string> set_keys;
            if (*oR) set_keys.push_back("R");
            if (*om) set_keys.push_back("m");
            if (*og) set_keys.push_back("gamma");
            if (*ot) set_keys.push_back("t_end");
            if (*on) set_keys.push_back("oracle_n");
            if (*oa) set_keys.push_back("amplitude");
            return cmd_compare(config_file, scheme_names, ov, set_keys, out_dir);
        }
        if (*consistency) return cmd_consistency(cs_schemes, cs_m, cs_R, cs_out);
        if (*coefficients) return cmd_coefficients(max_order);
        if (*suite) {
            if (suite_kind == "properties") return suite_properties();
            if (suite_kind == "consistency") return suite_consistency();
            if (suite_kind == "figure1") return suite_figure1();
            std::cerr << "unknown suite '" << suite_kind << "'\n";
            return exit_config;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return exit_config;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_numerical;
    }
    return exit_config;
}
