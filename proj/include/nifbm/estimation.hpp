#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "covariance.hpp"
#include "simulation.hpp"
#include "toeplitz.hpp"

namespace nifbm {

namespace detail {

/// log(x) for x > 1, else 0.
inline double log_plus(double x) { return x > 1.0 ? std::log(x) : 0.0; }

/// sqrt(x) for x > 0, else 0.
inline double sqrt_plus(double x) { return x > 0.0 ? std::sqrt(x) : 0.0; }

/// a / b with the convention a / 0 = 0.
inline double safe_div(double a, double b) { return b == 0.0 ? 0.0 : a / b; }

inline bool in_open_unit(double x) { return x > 0.0 && x < 1.0; }

/// a*b - c*d with one rounding error (Kahan's FMA trick).
inline double diff_of_products(double a, double b, double c, double d) {
    const double cd = c * d;
    const double err = std::fma(-c, d, cd);
    return std::fma(a, b, -cd) + err;
}

/// 2 h^{2H} / ((2H+1)(H+1)).
inline double scale_factor(double H, double h) {
    return 2.0 * std::pow(h, 2.0 * H) / ((2.0 * H + 1.0) * (H + 1.0));
}

inline std::size_t level_index(int j) {
    switch (j) {
        case 1: return 0;
        case 2: return 1;
        case 4: return 2;
        case 8: return 3;
        default: throw std::invalid_argument("aggregation factor must be 1, 2, 4 or 8");
    }
}

}  // namespace detail

inline constexpr std::array<int, 4> kLevels{1, 2, 4, 8};

/// Mean squared increment.
inline double xi_statistic(std::span<const double> values) {
    if (values.empty()) throw LengthError("xi statistic of an empty series");
    double s = 0.0;
    for (double v : values) s += v * v;
    return s / static_cast<double>(values.size());
}

inline double xi_statistic(const IncrementSeries& series) { return xi_statistic(series.values); }

struct XiStatistics {
    std::array<double, 4> xi{};  // indexed by level 1, 2, 4, 8
    std::array<std::size_t, 4> counts{};

    [[nodiscard]] double at(int j) const { return xi[detail::level_index(j)]; }
    void set(int j, double value, std::size_t count) {
        xi[detail::level_index(j)] = value;
        counts[detail::level_index(j)] = count;
    }
};

/// xi^1 on 2N, xi^2 on N increments from a width-h series of length >= 2N+1.
inline XiStatistics xi_one_process(const IncrementSeries& base) {
    if (base.grid.j != 1) throw std::invalid_argument("base series must be at j = 1");
    const std::size_t m = base.size();
    if (m < 3) throw LengthError("need at least 3 increments for two levels");
    const std::size_t N = (m - 1) / 2;
    XiStatistics out;
    out.set(1, xi_statistic(std::span<const double>(base.values).first(2 * N)), 2 * N);
    const auto agg = aggregate_once(base);
    out.set(2, xi_statistic(std::span<const double>(agg.values).first(N)), N);
    return out;
}

/// Shared horizon: xi^1 on 8N, xi^2 on 4N, xi^4 on 2N, xi^8 on N increments,
/// N = floor((m - 7) / 8) for a width-h series of length m.
inline XiStatistics xi_shared_horizon(const IncrementSeries& base) {
    if (base.grid.j != 1) throw std::invalid_argument("base series must be at j = 1");
    const std::size_t m = base.size();
    if (m < 15) throw LengthError("need at least 15 increments for four levels");
    const std::size_t N = (m - 7) / 8;
    XiStatistics out;
    IncrementSeries cur = base;
    for (int j : kLevels) {
        if (j > 1) cur = aggregate_once(cur);
        const std::size_t count = N * static_cast<std::size_t>(8 / j);
        out.set(j, xi_statistic(std::span<const double>(cur.values).first(count)), count);
    }
    return out;
}

struct MomentVector {
    double eta1, eta2, eta4, eta8;
};

/// Limits of xi^j for the two-process model at step h.
inline MomentVector forward_moment_map(const MixedParams& theta, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("h must be positive");
    const double H1 = theta.hurst1.value();
    const double H2 = theta.hurst2.value();
    const double x = std::pow(2.0, 2.0 * H1);
    const double y = std::pow(2.0, 2.0 * H2);
    const double A = theta.a2 * detail::scale_factor(H1, h);
    const double B = theta.b2 * detail::scale_factor(H2, h);
    const double ax = A * (x - 1.0);
    const double by = B * (y - 1.0);
    return {ax + by, ax * x + by * y, ax * x * x + by * y * y, ax * x * x * x + by * y * y * y};
}

/// (eta1, eta2) of the one-process model.
inline std::array<double, 2> forward_moment_map(const NifbmParams& theta) {
    const double H = theta.hurst.value();
    const double x = std::pow(2.0, 2.0 * H);
    const double A = theta.a2 * detail::scale_factor(H, theta.h);
    return {A * (x - 1.0), A * x * (x - 1.0)};
}

struct OneNifbmEstimate {
    double H_hat = 0.0;
    double a2_hat = 0.0;
    bool degenerate = false;
};

inline OneNifbmEstimate estimate_one_nifbm(double xi1, double xi2, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("h must be positive");
    OneNifbmEstimate est;
    const double ratio = detail::safe_div(xi2, xi1);
    est.H_hat = detail::log_plus(ratio) / (2.0 * std::numbers::ln2);
    const double A = detail::scale_factor(est.H_hat, h);
    est.a2_hat = detail::safe_div(xi1, A * (std::pow(2.0, 2.0 * est.H_hat) - 1.0));
    est.degenerate = xi1 == 0.0 || !detail::in_open_unit(est.H_hat) || !(est.a2_hat > 0.0);
    return est;
}

inline OneNifbmEstimate estimate_one_nifbm(const XiStatistics& xi, double h) {
    return estimate_one_nifbm(xi.at(1), xi.at(2), h);
}

struct TwoNifbmEstimate {
    double H1_hat = 0.0;  // larger index
    double H2_hat = 0.0;
    double a2_hat = 0.0;  // scale of the H1 component
    double b2_hat = 0.0;
    double discriminant = 0.0;
    double x = 0.0;
    double y = 0.0;
    bool degenerate = false;
};

/// Discriminant of the quadratic whose roots are 2^{2H1}, 2^{2H2}.
/// The 2x2 minors cancel heavily when H1 is close to H2, hence the FMA.
inline double moment_discriminant(double xi1, double xi2, double xi4, double xi8) {
    using detail::diff_of_products;
    const double b = diff_of_products(xi4, xi2, xi8, xi1);
    const double a = diff_of_products(xi4, xi1, xi2, xi2);
    const double c = diff_of_products(xi8, xi2, xi4, xi4);
    return diff_of_products(b, b, 4.0 * a, c);
}

inline TwoNifbmEstimate estimate_two_nifbm(double xi1, double xi2, double xi4, double xi8,
                                           double h) {
    if (!(h > 0.0)) throw std::invalid_argument("h must be positive");
    using detail::safe_div;
    TwoNifbmEstimate est;
    est.discriminant = moment_discriminant(xi1, xi2, xi4, xi8);
    const double lead = 2.0 * detail::diff_of_products(xi4, xi1, xi2, xi2);
    const double mid = detail::diff_of_products(xi8, xi1, xi4, xi2);
    const double last = detail::diff_of_products(xi8, xi2, xi4, xi4);
    const double root = detail::sqrt_plus(est.discriminant);
    // larger-magnitude root directly, the other from the product of roots
    const double big = mid >= 0.0 ? mid + root : mid - root;
    double x = safe_div(big, lead);
    double y = safe_div(2.0 * last, big);
    if (x < y) std::swap(x, y);
    est.x = x;
    est.y = y;
    est.H1_hat = detail::log_plus(x) / (2.0 * std::numbers::ln2);
    est.H2_hat = detail::log_plus(y) / (2.0 * std::numbers::ln2);

    const double H1 = est.H1_hat;
    const double H2 = est.H2_hat;
    est.a2_hat = safe_div((2.0 * H1 + 1.0) * (H1 + 1.0) * std::fma(-y, xi1, xi2),
                          2.0 * std::pow(h, 2.0 * H1) * (x - y) * (x - 1.0));
    est.b2_hat = safe_div((2.0 * H2 + 1.0) * (H2 + 1.0) * std::fma(-x, xi1, xi2),
                          2.0 * std::pow(h, 2.0 * H2) * (y - x) * (y - 1.0));

    est.degenerate = !(est.discriminant > 0.0) || lead == 0.0 || x == y || x == 1.0 ||
                     y == 1.0 || !detail::in_open_unit(H1) || !detail::in_open_unit(H2);
    return est;
}

inline TwoNifbmEstimate estimate_two_nifbm(const XiStatistics& xi, double h) {
    return estimate_two_nifbm(xi.at(1), xi.at(2), xi.at(4), xi.at(8), h);
}

inline TwoNifbmEstimate estimate_two_nifbm(const MomentVector& eta, double h) {
    return estimate_two_nifbm(eta.eta1, eta.eta2, eta.eta4, eta.eta8, h);
}

enum class DriftMethod { mle, two_point };

inline const char* to_string(DriftMethod m) { return m == DriftMethod::mle ? "mle" : "two-point"; }

struct DriftEstimate {
    double mu_hat = 0.0;
    double variance = 0.0;
    DriftMethod method = DriftMethod::mle;
    bool degenerate = false;
};

/// (dG' T^{-1} dY) / (dG' T^{-1} dG) with T = L L'.
inline DriftEstimate drift_mle(std::span<const double> deltaY, std::span<const double> deltaG,
                               const ToeplitzCholesky& L) {
    const std::size_t n = deltaY.size();
    if (deltaG.size() != n) throw std::invalid_argument("drift_mle: dY and dG lengths differ");
    if (n == 0) throw LengthError("drift_mle: empty series");
    if (L.size() < n) throw std::invalid_argument("drift_mle: covariance smaller than series");
    std::vector<double> u(deltaG.begin(), deltaG.end());
    std::vector<double> v(deltaY.begin(), deltaY.end());
    L.solve_lower(u);
    L.solve_lower(v);
    double uu = 0.0;
    double uv = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        uu += u[k] * u[k];
        uv += u[k] * v[k];
    }
    if (uu == 0.0) throw ZeroDenominator("drift_mle: dG is identically zero");
    return {uv / uu, 1.0 / uu, DriftMethod::mle, false};
}

inline DriftEstimate drift_mle(std::span<const double> deltaY, std::span<const double> deltaG,
                               const AutocovSequence& cov) {
    if (cov.size() < deltaY.size()) throw std::invalid_argument("drift_mle: covariance too short");
    std::vector<double> row(cov.values.begin(), cov.values.begin() + deltaY.size());
    return drift_mle(deltaY, deltaG, ToeplitzCholesky(row));
}

/// Var(X_{Nh} - X_0) for one unit-scale component.
inline double endpoint_variance(HurstIndex H, double h, std::size_t N) {
    const double p = H.two_h() + 2.0;
    const double n = static_cast<double>(N);
    const double bracket = std::pow(n + 1.0, p) + detail::abs_pow(n - 1.0, p) - 2.0 * std::pow(n, p) - 2.0;
    return std::pow(h, H.two_h()) * bracket / ((H.two_h() + 1.0) * p);
}

/// Same quantity assembled from the level covariance: var + var - 2 cov.
inline double endpoint_variance_assembled(HurstIndex H, double h, std::size_t N) {
    const double T = static_cast<double>(N) * h;
    return nifbm_var(H, h, T) + nifbm_var(H, h, 0.0) - 2.0 * nifbm_cov(H, h, 0.0, T);
}

/// Var(mu_tilde) = sum_i a_i^2 Var_i(X_N - X_0) / G_N^2.
inline double two_point_variance(const NoiseSpec& noise, double h, std::size_t N, double gN) {
    check_noise_width(noise, h);
    double v = 0.0;
    if (const auto* one = std::get_if<NifbmParams>(&noise)) {
        v = one->a2 * endpoint_variance(one->hurst, h, N);
    } else {
        const auto& m = std::get<MixedParams>(noise);
        if (m.a2 != 0.0) v += m.a2 * endpoint_variance(m.hurst1, h, N);
        if (m.b2 != 0.0) v += m.b2 * endpoint_variance(m.hurst2, h, N);
    }
    return detail::safe_div(v, gN * gN);
}

/// (yN - y0) / gN; degenerate with mu = 0 when gN = 0.
inline DriftEstimate drift_two_point(double y0, double yN, double gN) {
    DriftEstimate est;
    est.method = DriftMethod::two_point;
    est.mu_hat = detail::safe_div(yN - y0, gN);
    est.degenerate = gN == 0.0;
    return est;
}

inline DriftEstimate drift_two_point(double y0, double yN, double gN, const NoiseSpec& noise,
                                     double h, std::size_t N) {
    DriftEstimate est = drift_two_point(y0, yN, gN);
    est.variance = two_point_variance(noise, h, N, gN);
    return est;
}

enum class NoiseModel { one_nifbm, two_nifbm };

struct TwoStageResult {
    DriftEstimate drift;
    std::variant<OneNifbmEstimate, TwoNifbmEstimate> noise;
    XiStatistics xi;
    /// Set when N^0.99 / |G_N| >= 1, i.e. the drift signal may be too weak.
    bool weak_drift_warning = false;
};

/// Heuristic finite-N check of the drift growth condition.
inline bool weak_drift(std::size_t N, double gN) {
    return std::pow(static_cast<double>(N), 0.99) / std::abs(gN) >= 1.0;
}

/// Stage 1: two-point drift. Stage 2: noise estimation on Y - mu_tilde*G.
/// `y` and `g` are levels at k = 0..N; g[0] must be 0. The drift variance
/// is a plug-in value from the stage-2 estimate (NaN when degenerate).
inline TwoStageResult two_stage_estimate(std::span<const double> y, std::span<const double> g,
                                         double h, NoiseModel model) {
    if (y.size() != g.size()) throw std::invalid_argument("two_stage_estimate: y and g lengths differ");
    if (y.size() < 2) throw LengthError("two_stage_estimate: need at least two observations");
    if (g[0] != 0.0) throw std::invalid_argument("two_stage_estimate: G(0) must be 0");
    const std::size_t N = y.size() - 1;

    TwoStageResult out;
    out.drift = drift_two_point(y[0], y[N], g[N]);
    out.weak_drift_warning = weak_drift(N, g[N]);

    std::vector<double> inc(N);
    for (std::size_t k = 0; k < N; ++k) {
        inc[k] = (y[k + 1] - y[k]) - out.drift.mu_hat * (g[k + 1] - g[k]);
    }
    const IncrementSeries residual(SampleGrid(h, N, 1), std::move(inc));

    out.drift.variance = std::numeric_limits<double>::quiet_NaN();
    if (model == NoiseModel::one_nifbm) {
        out.xi = xi_one_process(residual);
        const auto est = estimate_one_nifbm(out.xi, h);
        out.noise = est;
        if (!est.degenerate && g[N] != 0.0) {
            out.drift.variance =
                two_point_variance(NifbmParams(HurstIndex(est.H_hat), h, est.a2_hat), h, N, g[N]);
        }
    } else {
        out.xi = xi_shared_horizon(residual);
        const auto est = estimate_two_nifbm(out.xi, h);
        out.noise = est;
        if (!est.degenerate && g[N] != 0.0 && est.a2_hat > 0.0 && est.b2_hat > 0.0 &&
            est.H1_hat > est.H2_hat) {
            out.drift.variance = two_point_variance(
                MixedParams(HurstIndex(est.H1_hat), HurstIndex(est.H2_hat), est.a2_hat, est.b2_hat),
                h, N, g[N]);
        }
    }
    return out;
}

}  // namespace nifbm
