// Acceptance checks. Usage: acceptance [C01 ... C13]; no argument runs all.
// Each criterion prints its sub-checks and one PASS/FAIL line.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "nifbm/harness.hpp"
#include "oracles/quadrature.hpp"
#include "oracles/stats.hpp"

using namespace nifbm;

namespace {

class Criterion {
public:
    explicit Criterion(std::string id) : id_(std::move(id)), start_(std::chrono::steady_clock::now()) {}

    void check(bool ok, const std::string& what) {
        std::printf("  %s [%s] %s\n", id_.c_str(), ok ? "ok" : "FAILED", what.c_str());
        ok_ = ok_ && ok;
    }

    [[nodiscard]] double elapsed() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

    void runtime_below(double limit) {
        const double s = elapsed();
        check(s < limit, "runtime " + fmt(s, 2) + " s < " + fmt(limit, 0) + " s");
    }

    bool finish(const std::string& title) {
        std::printf("%s %s %s (%.1f s)\n", id_.c_str(), ok_ ? "PASS" : "FAIL", title.c_str(), elapsed());
        std::fflush(stdout);
        return ok_;
    }

    static std::string fmt(double v, int digits = 6) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.*g", digits, v);
        return buf;
    }

private:
    std::string id_;
    std::chrono::steady_clock::time_point start_;
    bool ok_ = true;
};

using Fmt = Criterion;

HurstIndex Hx(double v) { return HurstIndex(v); }

const ResultRow& row_of(const std::vector<ResultRow>& rows, const std::string& est, double h, std::size_t N) {
    for (const auto& r : rows)
        if (r.estimator == est && r.h == h && r.N == N) return r;
    throw std::runtime_error("missing result row " + est);
}

bool c01() {
    Criterion c("C01");
    std::mt19937_64 eng(20240101);
    std::uniform_real_distribution<double> uH(0.05, 0.95), uh(0.5, 8.0), ut(0.0, 20.0);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        const double H = uH(eng), h = uh(eng);
        double t = ut(eng), s = ut(eng);
        if (s < t) std::swap(t, s);
        const double err = std::abs(nifbm_cov(Hx(H), h, t, s) - oracle::window_average_cov(H, h, t, s));
        worst = std::max(worst, err);
    }
    c.check(worst < 1e-7, "max |closed form - quadrature| over 50 cases = " + Fmt::fmt(worst, 3) + " < 1e-7");
    c.runtime_below(10.0);
    return c.finish("quadrature oracle for nifbm_cov");
}

bool c02() {
    Criterion c("C02");
    c.check(std::abs(gamma(Hx(0.5), 0) - 2.0 / 3.0) <= 1e-12, "gamma(1/2, 0) = 2/3");
    c.check(std::abs(gamma(Hx(0.5), 1) - 1.0 / 6.0) <= 1e-12, "gamma(1/2, 1) = 1/6");
    double worst = 0.0;
    for (int n = 2; n <= 100; ++n) worst = std::max(worst, std::abs(gamma(Hx(0.5), n)));
    c.check(worst <= 1e-12, "max |gamma(1/2, n)|, 2 <= n <= 100 = " + Fmt::fmt(worst, 3));
    const double h0 = find_h0();
    c.check(std::abs(h0 - 0.2626229) <= 1e-6, "find_h0 = " + Fmt::fmt(h0, 10));
    c.runtime_below(1.0);
    return c.finish("special values of gamma and H0");
}

bool c03() {
    Criterion c("C03");
    std::mt19937_64 eng(303);
    std::uniform_real_distribution<double> uH(0.01, 0.99), uh(0.1, 10.0), ut(0.0, 50.0), uc(0.05, 20.0);
    double worst = 0.0;
    for (int i = 0; i < 2000; ++i) {
        const double H = uH(eng), h = uh(eng), k = uc(eng);
        double t = ut(eng), s = ut(eng);
        if (s < t) std::swap(t, s);
        const double lhs = nifbm_cov(Hx(H), k * h, k * t, k * s);
        const double rhs = std::pow(k, 2 * H) * nifbm_cov(Hx(H), h, t, s);
        worst = std::max(worst, std::abs(lhs - rhs) / std::abs(rhs));
    }
    c.check(worst < 1e-10, "max relative error over 2000 points = " + Fmt::fmt(worst, 3));
    return c.finish("self-similarity of the covariance");
}

bool c04() {
    Criterion c("C04");
    int ok = 0, total = 0;
    for (int i = 1; i <= 9; ++i) {
        for (double h : {2.0, 4.0, 16.0}) {
            ++total;
            try {
                const ToeplitzCholesky L(autocov_sequence(NifbmParams(Hx(0.1 * i), h, 1.0), 4096).values);
                if (L(4095, 4095) > 0.0) ++ok;
            } catch (const NotPositiveDefinite& e) {
                c.check(false, std::string("H = ") + Fmt::fmt(0.1 * i) + ", h = " + Fmt::fmt(h) + ": " + e.what());
            }
        }
    }
    c.check(ok == total, std::to_string(ok) + "/" + std::to_string(total) + " factorizations at N = 4096");
    c.runtime_below(60.0);
    return c.finish("positive definiteness (Cholesky at N = 4096)");
}

bool c05() {
    Criterion c("C05");
    std::mt19937_64 eng(505);
    std::uniform_real_distribution<double> uH(0.01, 0.99), ua(0.05, 20.0), uh(0.25, 16.0);
    double worst2 = 0.0;
    int tested = 0;
    while (tested < 200) {
        double H1 = uH(eng), H2 = uH(eng);
        if (H1 < H2) std::swap(H1, H2);
        if (H1 - H2 < 0.05) continue;
        const double a2 = ua(eng), b2 = ua(eng), h = uh(eng);
        const auto e = estimate_two_nifbm(forward_moment_map(MixedParams(Hx(H1), Hx(H2), a2, b2), h), h);
        worst2 = std::max({worst2, std::abs(e.H1_hat - H1), std::abs(e.H2_hat - H2),
                           std::abs(e.a2_hat - a2) / a2, std::abs(e.b2_hat - b2) / b2});
        ++tested;
    }
    c.check(worst2 <= 1e-9, "two-process max error over 200 random theta = " + Fmt::fmt(worst2, 3));
    double worst1 = 0.0;
    for (int i = 0; i < 200; ++i) {
        const double H = uH(eng), a2 = ua(eng), h = uh(eng);
        const auto eta = forward_moment_map(NifbmParams(Hx(H), h, a2));
        const auto e = estimate_one_nifbm(eta[0], eta[1], h);
        worst1 = std::max({worst1, std::abs(e.H_hat - H), std::abs(e.a2_hat - a2) / a2});
    }
    c.check(worst1 <= 1e-12, "one-process max error over 200 random theta = " + Fmt::fmt(worst1, 3));
    c.runtime_below(1.0);
    return c.finish("estimator round trip on exact moments");
}

bool c06() {
    Criterion c("C06");
    std::mt19937_64 eng(606);
    std::uniform_real_distribution<double> uH(0.02, 0.98), ua(0.1, 10.0), uh(0.5, 16.0);
    double worst = 0.0;
    bool signs = true;
    int tested = 0;
    // same parameter regime as the round trip: H1 - H2 >= 0.05
    while (tested < 500) {
        double H1 = uH(eng), H2 = uH(eng);
        if (H1 < H2) std::swap(H1, H2);
        if (H1 - H2 < 0.05) continue;
        const double h = uh(eng);
        const MixedParams m(Hx(H1), Hx(H2), ua(eng), ua(eng));
        const auto eta = forward_moment_map(m, h);
        const double x = std::pow(2.0, 2 * H1), y = std::pow(2.0, 2 * H2);
        const double A = m.a2 * detail::scale_factor(H1, h);
        const double B = m.b2 * detail::scale_factor(H2, h);
        const double closed = A * A * B * B * (x - 1) * (x - 1) * (y - 1) * (y - 1) * std::pow(x - y, 6);
        const double D = moment_discriminant(eta.eta1, eta.eta2, eta.eta4, eta.eta8);
        worst = std::max(worst, std::abs(D - closed) / closed);
        const double lead = eta.eta4 * eta.eta1 - eta.eta2 * eta.eta2;
        const double last = eta.eta8 * eta.eta2 - eta.eta4 * eta.eta4;
        const double mid = eta.eta8 * eta.eta1 - eta.eta4 * eta.eta2;
        signs = signs && lead > 0.0 && last > 0.0 && mid > 0.0 && D > 0.0;
        ++tested;
    }
    c.check(worst <= 1e-9, "max relative error of D vs A^2B^2(x-1)^2(y-1)^2(x-y)^6 = " + Fmt::fmt(worst, 3));
    c.check(signs, "xi4 xi1 - xi2^2 > 0, xi8 xi2 - xi4^2 > 0, xi8 xi1 - xi4 xi2 > 0, D > 0");
    return c.finish("discriminant closed form and sign lemmas");
}

bool c07() {
    Criterion c("C07");
    for (auto config : table_configs(1, 100, 42)) {
        config.h_values = {2.0};
        config.N_values = {128};
        config.estimators = {"mle"};
        const auto rows = run_experiment(config);
        const auto& r = row_of(rows, "mu_mle", 2.0, 128);
        const double st = *r.sd_theory;
        const std::string tag = "H = " + Fmt::fmt(config.H1) + ": ";
        c.check(std::abs(r.mean - 4.0) < 4.0 * st / std::sqrt(100.0),
                tag + "|mean - 4| = " + Fmt::fmt(std::abs(r.mean - 4.0), 3) + " < 4 sd_theory/10 = " +
                    Fmt::fmt(0.4 * st, 3));
        const double ratio = r.sd_emp / st;
        c.check(ratio >= 0.5 && ratio <= 2.0, tag + "sd_emp / sd_theory = " + Fmt::fmt(ratio, 4) +
                                                  " (sd_emp " + Fmt::fmt(r.sd_emp, 3) + ", sd_theory " +
                                                  Fmt::fmt(st, 3) + ")");
        if (config.H1 == 0.5) {
            c.check(r.mean >= 3.999 && r.mean <= 4.001 && std::abs(r.sd_emp / 0.00042 - 1.0) <= 0.5,
                    tag + "mean in [3.999, 4.001] and sd_emp within 50% of 0.00042");
        }
    }
    c.runtime_below(120.0);
    return c.finish("Table 1 reproduction at h = 2, N = 128");
}

bool c08() {
    Criterion c("C08");
    // Hurst pair {0.1, 0.3}: the larger index is the first component here.
    const DriftDescriptor drift;
    const auto g = drift_samples(drift, 2.0, 128);
    std::vector<double> dG(128);
    for (std::size_t k = 0; k < 128; ++k) dG[k] = g[k + 1] - g[k];
    const NoiseSpec pair = MixedParams(Hx(0.3), Hx(0.1), 1.0, 1.0);
    const auto mle = drift_mle(dG, dG, autocov_sequence(pair, 2.0, 1, 128));
    const double sd = std::sqrt(mle.variance);
    c.check(std::abs(sd / 0.00015 - 1.0) <= 0.10, "sd_theory(mu_mle) = " + Fmt::fmt(sd, 4) + " vs 0.00015 +-10%");

    int tested = 0, ok = 0;
    for (int t : {1, 2}) {
        for (const auto& config : table_configs(t, 1, 42)) {
            for (double h : config.h_values) {
                for (std::size_t N : config.N_values) {
                    const NoiseSpec noise = config.noise(h);
                    const auto gg = drift_samples(*config.drift, h, N);
                    std::vector<double> d(N);
                    for (std::size_t k = 0; k < N; ++k) d[k] = gg[k + 1] - gg[k];
                    const double vm = drift_mle(d, d, autocov_sequence(noise, h, 1, N)).variance;
                    const double vt = two_point_variance(noise, h, N, gg[N]);
                    ++tested;
                    if (vm <= vt * (1.0 + 1e-12)) ++ok;
                }
            }
        }
    }
    c.check(ok == tested, "Var(mu_mle) <= Var(mu_two_point) in " + std::to_string(ok) + "/" +
                              std::to_string(tested) + " configurations");
    return c.finish("Table 2 drift spot checks");
}

bool c09() {
    Criterion c("C09");
    ExperimentConfig config = table_configs(3, 100, 42)[2];
    config.h_values = {2.0};
    config.N_values = {4096};
    const auto rows = run_experiment(config);
    const auto& r = row_of(rows, "H", 2.0, 4096);
    c.check(config.H1 == 0.5 && r.mean >= 0.49 && r.mean <= 0.51, "mean(H_hat) = " + Fmt::fmt(r.mean, 6));
    const double st = sigma_theory_h(NifbmParams(Hx(0.5), 2.0, 1.0), 4096);
    c.check(std::abs(st / 0.0138 - 1.0) <= 0.05, "sigma0_one gives sd(H_hat) = " + Fmt::fmt(st, 4) + " vs 0.0138 +-5%");
    const double ratio = r.sd_emp / st;
    c.check(ratio >= 0.5 && ratio <= 2.0, "sd_emp = " + Fmt::fmt(r.sd_emp, 4) + ", ratio to theory " + Fmt::fmt(ratio, 4));
    c.runtime_below(300.0);
    return c.finish("Table 3 spot checks at H = 0.5, h = 2, N = 4096");
}

bool c10() {
    Criterion c("C10");
    ExperimentConfig config = table_configs(4, 100, 42)[2];  // pair (0.5, 0.3)
    config.h_values = {2.0};
    config.N_values = {4096};
    const auto rows = run_experiment(config);
    const auto& H1 = row_of(rows, "H1", 2.0, 4096);
    const auto& H2 = row_of(rows, "H2", 2.0, 4096);
    const auto& a2 = row_of(rows, "a2", 2.0, 4096);
    const auto& b2 = row_of(rows, "b2", 2.0, 4096);
    c.check(config.H1 == 0.5 && config.H2 == 0.3 && config.a2 == 4.0 && config.b2 == 4.0, "configuration (0.5, 0.3, 4, 4)");
    c.check(std::abs(H1.mean - 0.5) <= 0.005, "mean(H1_hat) = " + Fmt::fmt(H1.mean, 6));
    c.check(std::abs(H2.mean - 0.3) <= 0.005, "mean(H2_hat) = " + Fmt::fmt(H2.mean, 6));
    c.check(std::abs(a2.mean - 4.0) <= 0.1, "mean(a2_hat) = " + Fmt::fmt(a2.mean, 6));
    c.check(std::abs(b2.mean - 4.0) <= 0.1, "mean(b2_hat) = " + Fmt::fmt(b2.mean, 6));
    c.check(H1.degenerate == 0, "degenerate replications: " + std::to_string(H1.degenerate));
    c.runtime_below(600.0);
    return c.finish("Table 4 spot checks for the pair {0.3, 0.5}");
}

bool c11() {
    Criterion c("C11");
    const std::size_t N = 1024, R = 20000;
    const NoiseSpec noise = NifbmParams(Hx(0.5), 1.0, 1.0);
    const SampleGrid grid(1.0, 2 * N + 1);
    const auto L = cholesky_factor(autocov_sequence(noise, 1.0, 1, grid.N));
    std::vector<double> x1(R), x2(R);
    parallel_for(R, [&](std::size_t r) {
        const auto xi = xi_one_process(sample_increments(L, grid, RngSeed{1111, r}));
        x1[r] = xi.at(1);
        x2[r] = xi.at(2);
    });
    const auto S = sigma_tilde_one(Hx(0.5), 1.0);
    const double n = static_cast<double>(N);
    const auto v11 = oracle::sample_cov(x1, x1), v12 = oracle::sample_cov(x1, x2), v22 = oracle::sample_cov(x2, x2);
    auto cmp = [&](const char* name, const oracle::CovEstimate& e, double target) {
        const double z = std::abs(n * e.cov - target) / (n * e.se);
        c.check(z <= 5.0, std::string(name) + ": N Cov = " + Fmt::fmt(n * e.cov, 5) + " vs " + Fmt::fmt(target, 5) +
                              " (" + Fmt::fmt(z, 3) + " SE)");
    };
    cmp("s11", v11, S.s11);
    cmp("s12", v12, S.s12);
    cmp("s22", v22, S.s22);
    c.check(std::abs(S.s11 - 0.5) <= 1e-15 && std::abs(S.s22 - 4.0) <= 1e-14,
            "s11 = 1/2 and s22 = 8 s11 from the gamma sums");
    return c.finish("asymptotic covariance of (xi1, xi2) by Monte Carlo");
}

bool c12() {
    Criterion c("C12");
    double worst = 0.0;
    bool negative = true;
    // Richardson-extrapolated central differences.
    auto deriv = [](const std::function<double(double)>& f, double x, double e) {
        const double d1 = (f(x + e) - f(x - e)) / (2 * e);
        const double d2 = (f(x + e / 2) - f(x - e / 2)) / e;
        return (4 * d2 - d1) / 3;
    };
    for (int i = 1; i <= 19; ++i) {
        const double H = 0.05 * i;
        for (double h : {0.5, 1.0, 2.0, 4.0, 16.0}) {
            for (double a2 : {0.5, 1.0, 4.0}) {
                const NifbmParams p(Hx(H), h, a2);
                const auto J = jacobian_one(p);
                const double eH = std::min(1e-3, 0.5 * std::min(H, 1 - H));
                for (int row = 0; row < 2; ++row) {
                    auto fH = [&](double v) { return forward_moment_map(NifbmParams(Hx(v), h, a2))[row]; };
                    auto fa = [&](double v) { return forward_moment_map(NifbmParams(Hx(H), h, v))[row]; };
                    const double dH = deriv(fH, H, eH);
                    const double da = deriv(fa, a2, 1e-3 * a2);
                    const double jH = row == 0 ? J.d11 : J.d21;
                    const double ja = row == 0 ? J.d12 : J.d22;
                    // scale by |eta| where the derivative itself passes through zero
                    const double eta = fH(H);
                    worst = std::max(worst, std::abs(jH - dH) / std::max(std::abs(dH), eta));
                    worst = std::max(worst, std::abs(ja - da) / std::abs(da));
                }
                negative = negative && J.det() < 0.0 && jacobian_one_det(p) < 0.0;
            }
        }
    }
    c.check(worst <= 1e-5, "max relative deviation from finite differences = " + Fmt::fmt(worst, 3));
    c.check(negative, "det J < 0 across the grid");
    return c.finish("Jacobian against finite differences");
}

bool c13() {
    Criterion c("C13");
    const std::size_t N = 65536;
    const NifbmParams p(Hx(0.7), 2.0, 1.0);
    const IncrementSampler sampler(NoiseSpec(p), SampleGrid(2.0, N));
    c.check(sampler.uses_circulant(), "long path uses circulant embedding");
    const double eta1 = forward_moment_map(p)[0];
    std::vector<char> hit(100, 0);
    parallel_for(100, [&](std::size_t s) {
        const double xi = xi_statistic(sampler.sample(RngSeed{s, 0}));
        hit[s] = std::abs(xi - eta1) / eta1 < 0.05;
    });
    int count = 0;
    for (char v : hit) count += v;
    c.check(count >= 95, std::to_string(count) + "/100 seeds within 5% of eta1 = " + Fmt::fmt(eta1, 6));
    return c.finish("ergodicity of xi1 on a single long path");
}

}  // namespace

int main(int argc, char** argv) {
    const std::map<std::string, std::function<bool()>> all{
        {"C01", c01}, {"C02", c02}, {"C03", c03}, {"C04", c04}, {"C05", c05}, {"C06", c06}, {"C07", c07},
        {"C08", c08}, {"C09", c09}, {"C10", c10}, {"C11", c11}, {"C12", c12}, {"C13", c13}};
    std::vector<std::string> ids;
    for (int i = 1; i < argc; ++i) ids.emplace_back(argv[i]);
    if (ids.empty())
        for (const auto& [id, f] : all) ids.push_back(id);
    bool ok = true;
    for (const auto& id : ids) {
        const auto it = all.find(id);
        if (it == all.end()) {
            std::fprintf(stderr, "unknown criterion %s\n", id.c_str());
            return 2;
        }
        try {
            ok = it->second() && ok;
        } catch (const std::exception& e) {
            std::printf("%s FAIL exception: %s\n", id.c_str(), e.what());
            ok = false;
        }
    }
    return ok ? 0 : 1;
}
