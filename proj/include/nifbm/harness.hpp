#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "asymptotics.hpp"
#include "covariance.hpp"
#include "estimation.hpp"
#include "parallel.hpp"
#include "sampler.hpp"
#include "simulation.hpp"

namespace nifbm {

enum class SimulationMode { direct_per_j, aggregate };
enum class GKind { paper_g, linear, tabulated };
/// Argument of G at observation k: the index k itself, or the time k*h.
enum class GTime { index, grid };

inline constexpr std::size_t kMaxGridN = 8192;

struct DriftDescriptor {
    double mu = 4.0;
    GKind kind = GKind::paper_g;
    GTime time = GTime::index;
    std::vector<double> tabulated;  // G at k = 0, 1, ... (tabulated kind)
};

struct ExperimentConfig {
    std::string name = "experiment";
    NoiseModel model = NoiseModel::one_nifbm;
    double H1 = 0.5;  // the only index for one-nifbm
    double H2 = 0.3;
    double a2 = 1.0;
    double b2 = 1.0;
    std::optional<DriftDescriptor> drift;
    std::vector<double> h_values{2.0};
    std::vector<std::size_t> N_values{128};
    std::size_t replications = 100;
    std::uint64_t seed = 42;
    SimulationMode mode = SimulationMode::aggregate;
    std::vector<std::string> estimators{"noise"};
    unsigned threads = 0;
    bool record_wall_time = false;
    CrossTermConvention convention = CrossTermConvention::halved;

    [[nodiscard]] NoiseSpec noise(double h) const {
        if (model == NoiseModel::one_nifbm) return NifbmParams(HurstIndex(H1), h, a2);
        return MixedParams(HurstIndex(H1), HurstIndex(H2), a2, b2);
    }

    [[nodiscard]] bool wants(const std::string& est) const {
        return std::find(estimators.begin(), estimators.end(), est) != estimators.end();
    }
};

inline const char* to_string(NoiseModel m) {
    return m == NoiseModel::one_nifbm ? "one-nifbm" : "two-nifbm";
}

inline const char* to_string(SimulationMode m) {
    return m == SimulationMode::aggregate ? "aggregate" : "direct-per-j";
}

struct ResultRow {
    std::string model;
    std::string estimator;
    double H1 = 0.0;
    std::optional<double> H2;
    double a2 = 0.0;
    std::optional<double> b2;
    std::optional<double> mu;
    double h = 0.0;
    std::size_t N = 0;
    std::string j_mode;
    std::size_t replications = 0;
    double mean = 0.0;
    double sd_emp = 0.0;
    std::optional<double> sd_theory;
    std::size_t degenerate = 0;
    double seconds = 0.0;

    friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

// ---------------------------------------------------------------- config

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

inline double parse_double(const std::string& s) {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing characters in number '" + s + "'");
    return v;
}

inline std::uint64_t parse_uint(const std::string& s) {
    if (s.empty() || s[0] == '-') throw std::invalid_argument("expected a nonnegative integer, got '" + s + "'");
    std::size_t pos = 0;
    const auto v = std::stoull(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing characters in integer '" + s + "'");
    return v;
}

inline bool parse_bool(const std::string& s) {
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw std::invalid_argument("expected true or false, got '" + s + "'");
}

}  // namespace detail

inline const std::vector<std::string>& known_estimators() {
    static const std::vector<std::string> names{"mle", "two-point", "noise", "two-stage"};
    return names;
}

/// Checks ranges and cross-field requirements; throws ConfigError.
inline void validate(const ExperimentConfig& c) {
    auto fail = [](const std::string& field, const std::string& msg) {
        throw ConfigError("config field '" + field + "': " + msg);
    };
    try {
        (void)c.noise(c.h_values.empty() ? 1.0 : c.h_values.front());
    } catch (const std::exception& e) {
        fail(c.model == NoiseModel::one_nifbm ? "H" : "H1/H2/a2/b2", e.what());
    }
    if (c.replications < 1) fail("replications", "must be >= 1");
    if (c.h_values.empty()) fail("h", "needs at least one value");
    if (c.N_values.empty()) fail("N", "needs at least one value");
    for (double h : c.h_values) {
        if (!(h > 0.0)) fail("h", "values must be positive");
    }
    const bool two = c.model == NoiseModel::two_nifbm;
    for (std::size_t N : c.N_values) {
        if (N < 1 || N > kMaxGridN) fail("N", "values must lie in [1, 8192]");
        if (c.wants("two-stage") && N < (two ? 15u : 3u)) {
            fail("N", two ? "two-stage with two processes needs N >= 15" : "two-stage needs N >= 3");
        }
        if (c.drift && c.drift->kind == GKind::tabulated && c.drift->tabulated.size() < N + 1) {
            fail("g_values", "needs at least N+1 samples for N = " + std::to_string(N));
        }
    }
    if (c.estimators.empty()) fail("estimators", "needs at least one estimator");
    for (const auto& e : c.estimators) {
        const auto& k = known_estimators();
        if (std::find(k.begin(), k.end(), e) == k.end()) fail("estimators", "unknown estimator '" + e + "'");
    }
    const bool drifting = c.wants("mle") || c.wants("two-point") || c.wants("two-stage");
    if (drifting && !c.drift) fail("mu", "drift estimators need a drift (set mu and g)");
    if (c.drift && c.drift->kind == GKind::tabulated && !c.drift->tabulated.empty() &&
        c.drift->tabulated[0] != 0.0) {
        fail("g_values", "first sample must be G(0) = 0");
    }
}

/// Flat `key = value` format; `#` starts a comment. Unknown keys are errors.
inline ExperimentConfig parse_config(std::istream& in, const std::string& source = "<config>") {
    ExperimentConfig c;
    std::optional<double> mu;
    std::optional<GKind> gkind;
    std::optional<GTime> gtime;
    std::vector<double> gvals;
    std::string line;
    int lineno = 0;
    std::map<std::string, int> seen;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        auto where = [&](const std::string& msg) {
            return ConfigError(source + ":" + std::to_string(lineno) + ": " + msg);
        };
        if (eq == std::string::npos) throw where("expected 'key = value'");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string val = detail::trim(line.substr(eq + 1));
        if (seen.count(key)) throw where("duplicate key '" + key + "'");
        seen[key] = lineno;
        try {
            if (key == "name") {
                c.name = val;
            } else if (key == "model") {
                if (val == "one-nifbm") c.model = NoiseModel::one_nifbm;
                else if (val == "two-nifbm") c.model = NoiseModel::two_nifbm;
                else throw std::invalid_argument("model must be one-nifbm or two-nifbm");
            } else if (key == "H" || key == "H1") {
                c.H1 = detail::parse_double(val);
            } else if (key == "H2") {
                c.H2 = detail::parse_double(val);
            } else if (key == "a2") {
                c.a2 = detail::parse_double(val);
            } else if (key == "b2") {
                c.b2 = detail::parse_double(val);
            } else if (key == "mu") {
                mu = detail::parse_double(val);
            } else if (key == "g") {
                if (val == "paper-g") gkind = GKind::paper_g;
                else if (val == "linear") gkind = GKind::linear;
                else if (val == "tabulated") gkind = GKind::tabulated;
                else throw std::invalid_argument("g must be paper-g, linear or tabulated");
            } else if (key == "g_time") {
                if (val == "index") gtime = GTime::index;
                else if (val == "grid") gtime = GTime::grid;
                else throw std::invalid_argument("g_time must be index or grid");
            } else if (key == "g_values") {
                for (const auto& s : detail::split_list(val)) gvals.push_back(detail::parse_double(s));
            } else if (key == "h") {
                c.h_values.clear();
                for (const auto& s : detail::split_list(val)) c.h_values.push_back(detail::parse_double(s));
            } else if (key == "N") {
                c.N_values.clear();
                for (const auto& s : detail::split_list(val)) c.N_values.push_back(detail::parse_uint(s));
            } else if (key == "replications") {
                c.replications = detail::parse_uint(val);
            } else if (key == "seed") {
                c.seed = detail::parse_uint(val);
            } else if (key == "simulation_mode") {
                if (val == "aggregate") c.mode = SimulationMode::aggregate;
                else if (val == "direct-per-j") c.mode = SimulationMode::direct_per_j;
                else throw std::invalid_argument("simulation_mode must be aggregate or direct-per-j");
            } else if (key == "estimators") {
                c.estimators = detail::split_list(val);
            } else if (key == "threads") {
                c.threads = static_cast<unsigned>(detail::parse_uint(val));
            } else if (key == "record_wall_time") {
                c.record_wall_time = detail::parse_bool(val);
            } else if (key == "cross_term") {
                if (val == "halved") c.convention = CrossTermConvention::halved;
                else if (val == "unhalved") c.convention = CrossTermConvention::unhalved;
                else throw std::invalid_argument("cross_term must be halved or unhalved");
            } else {
                throw where("unknown key '" + key + "'");
            }
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            throw where("bad value for '" + key + "': " + e.what());
        }
    }
    if (mu || gkind || gtime || !gvals.empty()) {
        DriftDescriptor d;
        if (mu) d.mu = *mu;
        if (gkind) d.kind = *gkind;
        if (gtime) d.time = *gtime;
        d.tabulated = std::move(gvals);
        if (d.kind == GKind::tabulated && d.tabulated.empty()) {
            throw ConfigError(source + ": g = tabulated requires g_values");
        }
        c.drift = std::move(d);
    }
    validate(c);
    return c;
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return parse_config(in, path);
}

// ---------------------------------------------------------------- running

/// G sampled at k = 0..N for the configured descriptor, with G(0) removed.
inline std::vector<double> drift_samples(const DriftDescriptor& d, double h, std::size_t N) {
    if (d.kind == GKind::tabulated) {
        return std::vector<double>(d.tabulated.begin(), d.tabulated.begin() + static_cast<long>(N) + 1);
    }
    const double step = d.time == GTime::index ? 1.0 : h;
    return sample_g(d.kind == GKind::paper_g ? std::function<double(double)>(paper_g)
                                             : std::function<double(double)>(linear_g),
                    N, step);
}

namespace detail {

struct Accumulator {
    std::vector<double> values;
    std::size_t degenerate = 0;

    void add(double v, bool bad) {
        if (bad || !std::isfinite(v)) {
            ++degenerate;
        } else {
            values.push_back(v);
        }
    }

    [[nodiscard]] double mean() const {
        if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
        double s = 0.0;
        for (double v : values) s += v;
        return s / static_cast<double>(values.size());
    }

    [[nodiscard]] double sd() const {
        if (values.size() < 2) return 0.0;
        const double m = mean();
        double s = 0.0;
        for (double v : values) s += (v - m) * (v - m);
        return std::sqrt(s / static_cast<double>(values.size() - 1));
    }
};

inline std::uint64_t derived_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Per-replication noise estimate (up to four parameters) and flag.
struct NoiseDraw {
    std::array<double, 4> theta{};
    bool degenerate = false;
};

/// Direct-per-j data: each component is drawn once at width h and rescaled
/// by j^{H_i} to width jh, so all four levels share one draw per component.
class DirectLevels {
public:
    DirectLevels(const ExperimentConfig& c, double h, std::size_t N) : c_(c), h_(h), N_(N) {
        L1_ = cholesky_factor(autocov_sequence(NoiseSpec(NifbmParams(HurstIndex(c.H1), h, 1.0)), h, 1, N));
        if (c.model == NoiseModel::two_nifbm) {
            L2_ = cholesky_factor(autocov_sequence(NoiseSpec(NifbmParams(HurstIndex(c.H2), h, 1.0)), h, 1, N));
        }
    }

    [[nodiscard]] XiStatistics xi(RngSeed seed) const {
        auto eng = make_engine(seed);
        std::vector<double> z(N_), x1(N_), x2;
        fill_standard_normal(eng, z);
        L1_.multiply(z, x1);
        const bool two = c_.model == NoiseModel::two_nifbm;
        if (two) {
            x2.resize(N_);
            fill_standard_normal(eng, z);
            L2_.multiply(z, x2);
        }
        XiStatistics out;
        std::vector<double> level(N_);
        const double a = std::sqrt(c_.a2);
        const double b = std::sqrt(c_.b2);
        for (int j : kLevels) {
            if (!two && j > 2) break;
            const double s1 = a * std::pow(static_cast<double>(j), c_.H1);
            const double s2 = two ? b * std::pow(static_cast<double>(j), c_.H2) : 0.0;
            for (std::size_t k = 0; k < N_; ++k) level[k] = s1 * x1[k] + (two ? s2 * x2[k] : 0.0);
            out.set(j, xi_statistic(level), N_);
        }
        return out;
    }

private:
    const ExperimentConfig& c_;
    double h_;
    std::size_t N_;
    ToeplitzCholesky L1_;
    ToeplitzCholesky L2_;
};

}  // namespace detail

/// Runs every (h, N) grid point of the config. Replication r uses stream r.
inline std::vector<ResultRow> run_experiment(const ExperimentConfig& config) {
    validate(config);
    const bool two = config.model == NoiseModel::two_nifbm;
    const std::size_t R = config.replications;
    std::vector<ResultRow> rows;

    for (double h : config.h_values) {
        for (std::size_t N : config.N_values) {
            const auto t0 = std::chrono::steady_clock::now();
            const NoiseSpec noise = config.noise(h);

            ResultRow proto;
            proto.model = to_string(config.model);
            proto.H1 = config.H1;
            if (two) proto.H2 = config.H2;
            proto.a2 = config.a2;
            if (two) proto.b2 = config.b2;
            if (config.drift) proto.mu = config.drift->mu;
            proto.h = h;
            proto.N = N;
            proto.j_mode = to_string(config.mode);
            proto.replications = R;

            std::vector<ResultRow> point_rows;
            auto emit = [&](const std::string& name, const detail::Accumulator& acc,
                            std::optional<double> sd_theory) {
                ResultRow row = proto;
                row.estimator = name;
                row.mean = acc.mean();
                row.sd_emp = acc.sd();
                row.sd_theory = sd_theory;
                row.degenerate = acc.degenerate;
                point_rows.push_back(std::move(row));
            };

            // Drift family: N increments at width h plus mu * dG.
            const bool drift_est = config.wants("mle") || config.wants("two-point") || config.wants("two-stage");
            if (drift_est) {
                const auto g = drift_samples(*config.drift, h, N);
                const double mu = config.drift->mu;
                std::vector<double> dG(N);
                for (std::size_t k = 0; k < N; ++k) dG[k] = g[k + 1] - g[k];
                const SampleGrid grid(h, N, 1);
                const auto L = cholesky_factor(autocov_sequence(noise, h, 1, N));

                std::vector<DriftEstimate> mle(R), tp(R);
                std::vector<TwoStageResult> ts(config.wants("two-stage") ? R : 0);
                parallel_for(R, [&](std::size_t r) {
                    const auto x = sample_increments(L, grid, RngSeed{config.seed, r});
                    std::vector<double> dY(N);
                    for (std::size_t k = 0; k < N; ++k) dY[k] = x.values[k] + mu * dG[k];
                    if (config.wants("mle")) mle[r] = drift_mle(dY, dG, L);
                    std::vector<double> y(N + 1, 0.0);
                    for (std::size_t k = 0; k < N; ++k) y[k + 1] = y[k] + dY[k];
                    tp[r] = drift_two_point(y[0], y[N], g[N]);
                    if (config.wants("two-stage")) {
                        ts[r] = two_stage_estimate(y, g, h, config.model);
                    }
                }, config.threads);

                const double tp_var = two_point_variance(noise, h, N, g[N]);
                if (config.wants("mle")) {
                    std::vector<double> u(dG);
                    L.solve_lower(u);
                    double uu = 0.0;
                    for (double v : u) uu += v * v;
                    detail::Accumulator acc;
                    for (const auto& e : mle) acc.add(e.mu_hat, e.degenerate);
                    emit("mu_mle", acc, std::sqrt(1.0 / uu));
                }
                if (config.wants("two-point")) {
                    detail::Accumulator acc;
                    for (const auto& e : tp) acc.add(e.mu_hat, e.degenerate);
                    emit("mu_two_point", acc, std::sqrt(tp_var));
                }
                if (config.wants("two-stage")) {
                    detail::Accumulator mu_acc;
                    std::array<detail::Accumulator, 4> th;
                    for (const auto& e : ts) {
                        mu_acc.add(e.drift.mu_hat, e.drift.degenerate);
                        if (two) {
                            const auto& n = std::get<TwoNifbmEstimate>(e.noise);
                            const std::array<double, 4> v{n.H1_hat, n.H2_hat, n.a2_hat, n.b2_hat};
                            for (std::size_t i = 0; i < 4; ++i) th[i].add(v[i], n.degenerate);
                        } else {
                            const auto& n = std::get<OneNifbmEstimate>(e.noise);
                            th[0].add(n.H_hat, n.degenerate);
                            th[1].add(n.a2_hat, n.degenerate);
                        }
                    }
                    emit("ts_mu", mu_acc, std::sqrt(tp_var));
                    if (two) {
                        emit("ts_H1", th[0], std::nullopt);
                        emit("ts_H2", th[1], std::nullopt);
                        emit("ts_a2", th[2], std::nullopt);
                        emit("ts_b2", th[3], std::nullopt);
                    } else {
                        emit("ts_H", th[0], std::nullopt);
                        emit("ts_a2", th[1], std::nullopt);
                    }
                }
            }

            // Noise family: independent streams derived from the seed.
            if (config.wants("noise")) {
                const std::uint64_t nseed = drift_est ? detail::derived_seed(config.seed, 1) : config.seed;
                std::vector<detail::NoiseDraw> draws(R);
                auto record = [&](std::size_t r, const XiStatistics& xi) {
                    if (two) {
                        const auto e = estimate_two_nifbm(xi, h);
                        draws[r] = {{e.H1_hat, e.H2_hat, e.a2_hat, e.b2_hat}, e.degenerate};
                    } else {
                        const auto e = estimate_one_nifbm(xi, h);
                        draws[r] = {{e.H_hat, e.a2_hat, 0.0, 0.0}, e.degenerate};
                    }
                };
                if (config.mode == SimulationMode::aggregate) {
                    const std::size_t base_n = two ? base_length_for(N, 8) : base_length_for(N, 2);
                    const IncrementSampler sampler(noise, SampleGrid(h, base_n, 1));
                    parallel_for(R, [&](std::size_t r) {
                        const auto base = sampler.sample(RngSeed{nseed, r});
                        record(r, two ? xi_shared_horizon(base) : xi_one_process(base));
                    }, config.threads);
                } else {
                    const detail::DirectLevels levels(config, h, N);
                    parallel_for(R, [&](std::size_t r) { record(r, levels.xi(RngSeed{nseed, r})); },
                                 config.threads);
                }

                std::array<detail::Accumulator, 4> acc;
                for (const auto& d : draws) {
                    for (std::size_t i = 0; i < (two ? 4u : 2u); ++i) acc[i].add(d.theta[i], d.degenerate);
                }
                if (two) {
                    emit("H1", acc[0], std::nullopt);
                    emit("H2", acc[1], std::nullopt);
                    emit("a2", acc[2], std::nullopt);
                    emit("b2", acc[3], std::nullopt);
                } else {
                    std::optional<double> sd_h, sd_a;
                    if (config.H1 < 0.75) {
                        const NifbmParams p(HurstIndex(config.H1), h, config.a2);
                        sd_h = sigma_theory_h(p, N, config.convention);
                        sd_a = sigma_theory_a2(p, N, config.convention);
                    }
                    emit("H", acc[0], sd_h);
                    emit("a2", acc[1], sd_a);
                }
            }

            const double secs = config.record_wall_time
                                    ? std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()
                                    : 0.0;
            for (auto& row : point_rows) {
                row.seconds = secs;
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

// ---------------------------------------------------------------- output

enum class OutputFormat { csv, json };

inline constexpr const char* kCsvHeader =
    "model,estimator,H1,H2,a2,b2,mu,h,N,j_mode,replications,mean,sd_emp,sd_theory,degenerate,seconds";

namespace detail {

inline std::string fmt17(double v) {
    if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string csv_opt(const std::optional<double>& v) { return v ? fmt17(*v) : ""; }

inline std::string json_num(double v) { return std::isfinite(v) ? fmt17(v) : "null"; }

inline std::string json_opt(const std::optional<double>& v) { return v ? json_num(*v) : "null"; }

inline std::string json_str(const std::string& s) {
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"' || ch == '\\') out += '\\';
        out += ch;
    }
    return out + "\"";
}

}  // namespace detail

inline void write_results(const std::vector<ResultRow>& rows, std::ostream& out, OutputFormat format) {
    using namespace detail;
    if (format == OutputFormat::csv) {
        out << kCsvHeader << '\n';
        for (const auto& r : rows) {
            out << r.model << ',' << r.estimator << ',' << fmt17(r.H1) << ',' << csv_opt(r.H2) << ','
                << fmt17(r.a2) << ',' << csv_opt(r.b2) << ',' << csv_opt(r.mu) << ',' << fmt17(r.h)
                << ',' << r.N << ',' << r.j_mode << ',' << r.replications << ',' << fmt17(r.mean)
                << ',' << fmt17(r.sd_emp) << ',' << csv_opt(r.sd_theory) << ',' << r.degenerate << ','
                << fmt17(r.seconds) << '\n';
        }
        return;
    }
    out << "[";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        out << (i == 0 ? "\n" : ",\n") << "  {"
            << "\"model\": " << json_str(r.model) << ", \"estimator\": " << json_str(r.estimator)
            << ", \"H1\": " << json_num(r.H1) << ", \"H2\": " << json_opt(r.H2)
            << ", \"a2\": " << json_num(r.a2) << ", \"b2\": " << json_opt(r.b2)
            << ", \"mu\": " << json_opt(r.mu) << ", \"h\": " << json_num(r.h) << ", \"N\": " << r.N
            << ", \"j_mode\": " << json_str(r.j_mode) << ", \"replications\": " << r.replications
            << ", \"mean\": " << json_num(r.mean) << ", \"sd_emp\": " << json_num(r.sd_emp)
            << ", \"sd_theory\": " << json_opt(r.sd_theory) << ", \"degenerate\": " << r.degenerate
            << ", \"seconds\": " << json_num(r.seconds) << "}";
    }
    out << (rows.empty() ? "]\n" : "\n]\n");
}

inline void write_results(const std::vector<ResultRow>& rows, const std::string& path,
                          OutputFormat format) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    write_results(rows, out, format);
    out.flush();
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

/// Directory for outputs given by relative name: $NIFBM_OUTPUT_DIR or ".".
inline std::string output_path(const std::string& name) {
    if (!name.empty() && name.front() == '/') return name;
    const char* dir = std::getenv("NIFBM_OUTPUT_DIR");
    if (dir == nullptr || *dir == '\0') return name;
    std::string d = dir;
    if (d.back() != '/') d += '/';
    return d + name;
}

// ---------------------------------------------------------------- tables

/// Built-in configurations matching the four published tables. Table 2 and
/// Table 4 list the Hurst pair with the larger index first.
inline std::vector<ExperimentConfig> table_configs(int which, std::size_t replications,
                                                   std::uint64_t seed) {
    std::vector<ExperimentConfig> out;
    auto base = [&](const std::string& name) {
        ExperimentConfig c;
        c.name = name;
        c.replications = replications;
        c.seed = seed;
        return c;
    };
    const std::vector<std::pair<double, double>> pairs{{0.3, 0.1}, {0.5, 0.1}, {0.5, 0.3}, {0.7, 0.3}, {0.7, 0.5}};
    if (which == 1) {
        for (double H : {0.1, 0.3, 0.5, 0.7, 0.9}) {
            auto c = base("table1");
            c.H1 = H;
            c.drift = DriftDescriptor{};
            c.h_values = {2.0, 4.0};
            c.N_values = {8, 32, 128};
            c.estimators = {"mle", "two-point"};
            out.push_back(c);
        }
    } else if (which == 2) {
        for (auto [H1, H2] : pairs) {
            auto c = base("table2");
            c.model = NoiseModel::two_nifbm;
            c.H1 = H1;
            c.H2 = H2;
            c.drift = DriftDescriptor{};
            c.h_values = {2.0, 4.0};
            c.N_values = {8, 32, 128};
            c.estimators = {"mle", "two-point"};
            out.push_back(c);
        }
    } else if (which == 3) {
        for (double H : {0.1, 0.3, 0.5, 0.7}) {
            auto c = base("table3");
            c.H1 = H;
            c.h_values = {2.0, 4.0, 16.0};
            c.N_values = {64, 256, 1024, 4096};
            c.mode = SimulationMode::aggregate;
            c.estimators = {"noise"};
            out.push_back(c);
        }
    } else if (which == 4) {
        for (auto [H1, H2] : pairs) {
            auto c = base("table4");
            c.model = NoiseModel::two_nifbm;
            c.H1 = H1;
            c.H2 = H2;
            c.a2 = 4.0;
            c.b2 = 4.0;
            c.h_values = {2.0, 4.0, 16.0};
            c.N_values = {64, 256, 1024, 4096};
            c.mode = SimulationMode::direct_per_j;
            c.estimators = {"noise"};
            out.push_back(c);
        }
    } else {
        throw std::invalid_argument("table number must be 1, 2, 3 or 4");
    }
    return out;
}

}  // namespace nifbm
