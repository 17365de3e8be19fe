#pragma once

// Command-line front end: simulate, estimate, experiment, tables, constants.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nifbm/harness.hpp"

namespace nifbm::cli {

/// Model parameters shared by simulate and estimate.
struct ModelArgs {
    std::string model = "one-nifbm";
    double H1 = 0.5;
    double H2 = 0.3;
    double a2 = 1.0;
    double b2 = 1.0;
    double h = 1.0;

    void add_to(CLI::App& app, bool with_params) {
        app.add_option("--model", model, "one-nifbm or two-nifbm")
            ->check(CLI::IsMember({"one-nifbm", "two-nifbm"}));
        app.add_option("--h", h, "grid step (window width)");
        if (!with_params) return;
        app.add_option("--H,--H1", H1, "Hurst index (larger one for two-nifbm)");
        app.add_option("--H2", H2, "second Hurst index");
        app.add_option("--a2", a2, "scale of the first component");
        app.add_option("--b2", b2, "scale of the second component");
    }

    [[nodiscard]] NoiseModel noise_model() const {
        return model == "two-nifbm" ? NoiseModel::two_nifbm : NoiseModel::one_nifbm;
    }

    [[nodiscard]] NoiseSpec noise() const {
        if (noise_model() == NoiseModel::one_nifbm) return NifbmParams(HurstIndex(H1), h, a2);
        return MixedParams(HurstIndex(H1), HurstIndex(H2), a2, b2);
    }
};

struct DriftArgs {
    std::string g;  // empty: no drift
    std::string g_time = "index";
    double mu = 4.0;

    void add_to(CLI::App& app, bool with_mu) {
        app.add_option("--g", g, "drift function G")->check(CLI::IsMember({"paper-g", "linear"}));
        app.add_option("--g-time", g_time, "argument of G: index k or time k*h")
            ->check(CLI::IsMember({"index", "grid"}));
        if (with_mu) app.add_option("--mu", mu, "drift coefficient");
    }

    [[nodiscard]] std::vector<double> samples(double h, std::size_t N) const {
        DriftDescriptor d;
        d.kind = g == "linear" ? GKind::linear : GKind::paper_g;
        d.time = g_time == "grid" ? GTime::grid : GTime::index;
        return drift_samples(d, h, N);
    }
};

/// Increments from CSV text: a header naming an `increment` column, or one
/// number per line (last column used).
inline std::vector<double> read_series(std::istream& in, const std::string& source) {
    std::vector<double> out;
    std::string line;
    int lineno = 0;
    long column = -1;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(detail::trim(cell));
        if (out.empty() && column < 0) {
            const auto it = std::find(cells.begin(), cells.end(), "increment");
            if (it != cells.end()) {
                column = it - cells.begin();
                continue;
            }
        }
        const std::size_t idx = column >= 0 ? static_cast<std::size_t>(column) : cells.size() - 1;
        if (idx >= cells.size()) {
            throw std::invalid_argument(source + ":" + std::to_string(lineno) + ": missing increment column");
        }
        try {
            out.push_back(detail::parse_double(cells[idx]));
        } catch (const std::exception&) {
            throw std::invalid_argument(source + ":" + std::to_string(lineno) + ": not a number: '" +
                                        cells[idx] + "'");
        }
    }
    if (out.empty()) throw std::invalid_argument(source + ": no increments read");
    return out;
}

inline OutputFormat parse_format(const std::string& s) {
    return s == "json" ? OutputFormat::json : OutputFormat::csv;
}

inline void emit_rows(const std::vector<ResultRow>& rows, const std::string& out_path,
                      const std::string& format, std::ostream& out) {
    if (out_path.empty()) {
        write_results(rows, out, parse_format(format));
    } else {
        write_results(rows, output_path(out_path), parse_format(format));
    }
}

inline std::string json_bool(bool b) { return b ? "true" : "false"; }

inline int cli_main(int argc, const char* const* argv, std::istream& in, std::ostream& out,
                    std::ostream& err) {
    CLI::App app{"nifbm: simulation and estimation for integrated fractional Brownian motion"};
    app.require_subcommand(1);
    // --h is the grid step, so help is long-form only
    app.set_help_flag("--help", "print this help message and exit");
    app.set_help_all_flag("--help-all", "show help for all subcommands");

    // simulate
    auto* sim = app.add_subcommand("simulate", "emit one sampled increment series as CSV");
    ModelArgs sim_model;
    DriftArgs sim_drift;
    std::size_t sim_N = 128;
    int sim_j = 1;
    std::uint64_t sim_seed = 42, sim_stream = 0;
    sim_model.add_to(*sim, true);
    sim_drift.add_to(*sim, true);
    sim->add_option("--N", sim_N, "number of increments")->check(CLI::PositiveNumber);
    sim->add_option("--j", sim_j, "aggregation factor: increments of width j*h")
        ->check(CLI::IsMember({1, 2, 4, 8}));
    sim->add_option("--seed", sim_seed, "random seed");
    sim->add_option("--stream", sim_stream, "stream index");

    // estimate
    auto* est = app.add_subcommand("estimate", "estimate parameters from a series CSV");
    ModelArgs est_model;
    DriftArgs est_drift;
    std::string est_input;
    est_model.add_to(*est, false);
    est_drift.add_to(*est, false);
    est->add_option("--input", est_input, "series CSV (default: stdin)");

    // experiment
    auto* exp = app.add_subcommand("experiment", "run a Monte Carlo experiment from a config file");
    std::string exp_config, exp_out, exp_format = "csv";
    unsigned exp_threads = 0;
    bool exp_timing = false;
    exp->add_option("--config", exp_config, "config file")->required();
    exp->add_option("--out", exp_out, "output file (default: stdout)");
    exp->add_option("--format", exp_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    exp->add_option("--threads", exp_threads, "worker threads (0: hardware)");
    exp->add_flag("--timing", exp_timing, "record wall time per grid point");

    // tables
    auto* tab = app.add_subcommand("tables", "run the built-in table configurations");
    std::string tab_which = "all", tab_out, tab_format = "csv";
    std::size_t tab_reps = 100;
    std::uint64_t tab_seed = 42;
    unsigned tab_threads = 0;
    tab->add_option("--which", tab_which, "1, 2, 3, 4 or all")
        ->check(CLI::IsMember({"1", "2", "3", "4", "all"}));
    tab->add_option("--replications", tab_reps, "replications per grid point")->check(CLI::PositiveNumber);
    tab->add_option("--seed", tab_seed, "random seed");
    tab->add_option("--out", tab_out, "output file (default: stdout)");
    tab->add_option("--format", tab_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    tab->add_option("--threads", tab_threads, "worker threads (0: hardware)");

    // constants
    auto* con = app.add_subcommand("constants", "print gamma values, H0 and the asymptotic covariance");
    double con_H = 0.5, con_h = 1.0;
    int con_max_lag = 10;
    con->add_option("--H", con_H, "Hurst index")->required();
    con->add_option("--h", con_h, "window width");
    con->add_option("--max-lag", con_max_lag, "largest lag printed")->check(CLI::NonNegativeNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }

    try {
        if (*sim) {
            const NoiseSpec noise = sim_model.noise();
            const SampleGrid grid(sim_model.h, sim_N, sim_j);
            const IncrementSampler sampler(noise, grid);
            auto series = sampler.sample(RngSeed{sim_seed, sim_stream});
            if (!sim_drift.g.empty()) {
                // G at the observation times of the width-j*h grid
                auto g = sim_drift.samples(sim_model.h * sim_j, sim_N);
                series = add_drift(series, DriftSpec(sim_drift.mu, std::move(g)));
            }
            out << "k,increment\n";
            for (std::size_t k = 0; k < series.size(); ++k) {
                out << k << ',' << detail::fmt17(series.values[k]) << '\n';
            }
            return 0;
        }
        if (*est) {
            std::vector<double> inc;
            if (est_input.empty()) {
                inc = read_series(in, "<stdin>");
            } else {
                std::ifstream f(est_input);
                if (!f) throw std::runtime_error("cannot open '" + est_input + "'");
                inc = read_series(f, est_input);
            }
            const double h = est_model.h;
            if (!(h > 0.0)) throw std::invalid_argument("--h must be positive");
            const std::size_t N = inc.size();
            const bool two = est_model.noise_model() == NoiseModel::two_nifbm;
            out << "{\"model\": " << detail::json_str(est_model.model) << ", \"h\": " << detail::json_num(h)
                << ", \"N\": " << N;
            auto print_noise = [&](const std::variant<OneNifbmEstimate, TwoNifbmEstimate>& v) {
                if (const auto* o = std::get_if<OneNifbmEstimate>(&v)) {
                    out << ", \"H\": " << detail::json_num(o->H_hat) << ", \"a2\": " << detail::json_num(o->a2_hat)
                        << ", \"degenerate\": " << json_bool(o->degenerate);
                } else {
                    const auto& t = std::get<TwoNifbmEstimate>(v);
                    out << ", \"H1\": " << detail::json_num(t.H1_hat) << ", \"H2\": " << detail::json_num(t.H2_hat)
                        << ", \"a2\": " << detail::json_num(t.a2_hat) << ", \"b2\": " << detail::json_num(t.b2_hat)
                        << ", \"discriminant\": " << detail::json_num(t.discriminant)
                        << ", \"degenerate\": " << json_bool(t.degenerate);
                }
            };
            if (!est_drift.g.empty()) {
                std::vector<double> y(N + 1, 0.0);
                for (std::size_t k = 0; k < N; ++k) y[k + 1] = y[k] + inc[k];
                const auto g = est_drift.samples(h, N);
                const auto res = two_stage_estimate(y, g, h, est_model.noise_model());
                out << ", \"mu\": " << detail::json_num(res.drift.mu_hat)
                    << ", \"mu_variance\": " << detail::json_num(res.drift.variance)
                    << ", \"weak_drift_warning\": " << json_bool(res.weak_drift_warning);
                print_noise(res.noise);
            } else {
                const IncrementSeries series(SampleGrid(h, N, 1), std::move(inc));
                if (two) {
                    print_noise(estimate_two_nifbm(xi_shared_horizon(series), h));
                } else {
                    print_noise(estimate_one_nifbm(xi_one_process(series), h));
                }
            }
            out << "}\n";
            return 0;
        }
        if (*exp) {
            auto config = load_config(exp_config);
            if (exp->count("--threads")) config.threads = exp_threads;
            if (exp_timing) config.record_wall_time = true;
            emit_rows(run_experiment(config), exp_out, exp_format, out);
            return 0;
        }
        if (*tab) {
            std::vector<int> which;
            if (tab_which == "all") which = {1, 2, 3, 4};
            else which = {std::stoi(tab_which)};
            std::vector<ResultRow> rows;
            for (int t : which) {
                for (auto config : table_configs(t, tab_reps, tab_seed)) {
                    config.threads = tab_threads;
                    const auto part = run_experiment(config);
                    rows.insert(rows.end(), part.begin(), part.end());
                }
            }
            emit_rows(rows, tab_out, tab_format, out);
            return 0;
        }
        if (*con) {
            const HurstIndex H(con_H);
            if (!(con_h > 0.0)) throw std::invalid_argument("--h must be positive");
            out << "H = " << detail::fmt17(con_H) << "\nh = " << detail::fmt17(con_h) << '\n';
            for (int n = 0; n <= con_max_lag; ++n) {
                out << "gamma(" << n << ") = " << detail::fmt17(gamma(H, n)) << '\n';
            }
            out << "H0 = " << detail::fmt17(find_h0()) << '\n';
            if (con_H < 0.75) {
                const auto S = sigma_tilde_one(H, con_h);
                out << "sigma_tilde s11 = " << detail::fmt17(S.s11) << '\n'
                    << "sigma_tilde s12 = " << detail::fmt17(S.s12) << '\n'
                    << "sigma_tilde s22 = " << detail::fmt17(S.s22) << '\n';
            } else {
                out << "sigma_tilde: not available for H >= 0.75\n";
            }
            return 0;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace nifbm::cli
