#pragma once

// Closed-form covariances of fractional Brownian motion, its window
// average X_t^h = (1/h) * int_t^{t+h} W_u du, and of the equally spaced
// increments of one or two independent averaged processes.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "params.hpp"

namespace nifbm {

namespace detail {

/// |x|^p with 0^p = 0 for p > 0.
inline double abs_pow(double x, double p) {
    const double ax = std::abs(x);
    return ax == 0.0 ? 0.0 : std::pow(ax, p);
}

inline void require_nonnegative(double x, const char* what) {
    if (!(x >= 0.0)) throw std::invalid_argument(std::string(what) + " must be >= 0");
}

// Below this lag the fourth difference is evaluated directly; from it on
// the binomial expansion in 1/n is summed instead, avoiding cancellation.
inline constexpr std::int64_t kGammaSeriesLag = 3;

/// Sum over even k >= 4 of 2*C(p,k)*(2^k - 4) * n^{4-k}.
inline double gamma_series_tail(double p, double n) {
    // generalised binomial C(p, 4)
    double binom = 1.0;
    for (int k = 0; k < 4; ++k) binom *= (p - k) / (k + 1);
    const double inv_n2 = 1.0 / (n * n);
    double pow2k = 16.0;
    double scale = 1.0;  // n^{4-k}
    double sum = 0.0;
    for (int k = 4; k < 400; k += 2) {
        const double term = 2.0 * binom * (pow2k - 4.0) * scale;
        sum += term;
        if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
        if (binom == 0.0) break;
        binom *= (p - k) / (k + 1.0);
        binom *= (p - k - 1.0) / (k + 2.0);
        pow2k *= 4.0;
        scale *= inv_n2;
    }
    return sum;
}

}  // namespace detail

/// Covariance of standard fBm: (s^{2H} + t^{2H} - |s-t|^{2H}) / 2.
inline double fbm_cov(HurstIndex H, double s, double t) {
    detail::require_nonnegative(s, "s");
    detail::require_nonnegative(t, "t");
    const double p = H.two_h();
    return 0.5 * (detail::abs_pow(s, p) + detail::abs_pow(t, p) - detail::abs_pow(s - t, p));
}

/// E[(W_t - W_s)(W_v - W_u)] for 0 <= s <= t and 0 <= u <= v. The
/// intervals may overlap; (0, 1, 0, 1) gives the unit variance.
inline double fbm_increment_cov(HurstIndex H, double s, double t, double u, double v) {
    if (!(0.0 <= s && s <= t && 0.0 <= u && u <= v)) {
        throw std::invalid_argument("fbm_increment_cov requires 0 <= s <= t and 0 <= u <= v");
    }
    const double p = H.two_h();
    using detail::abs_pow;
    return 0.5 * (abs_pow(v - s, p) + abs_pow(u - t, p) - abs_pow(v - t, p) - abs_pow(u - s, p));
}

/// E[X_t^h X_s^h] for s >= t >= 0.
inline double nifbm_cov(HurstIndex H, double h, double t, double s) {
    if (!(h > 0.0)) throw std::invalid_argument("h must be positive");
    detail::require_nonnegative(t, "t");
    if (!(s >= t)) throw std::invalid_argument("nifbm_cov requires s >= t");
    using detail::abs_pow;
    const double q = H.two_h() + 1.0;  // 2H+1
    const double p = q + 1.0;          // 2H+2
    const double rho = s - t;
    const double first =
        (abs_pow(s + h, q) - abs_pow(s, q) + abs_pow(t + h, q) - abs_pow(t, q)) / (2.0 * h * q);
    const double second =
        (2.0 * abs_pow(rho, p) - abs_pow(rho + h, p) - abs_pow(rho - h, p)) / (2.0 * h * h * q * p);
    return first + second;
}

/// E[(X_t^h)^2].
inline double nifbm_var(HurstIndex H, double h, double t) {
    if (!(h > 0.0)) throw std::invalid_argument("h must be positive");
    detail::require_nonnegative(t, "t");
    using detail::abs_pow;
    const double q = H.two_h() + 1.0;
    const double p = q + 1.0;
    return (abs_pow(t + h, q) - abs_pow(t, q)) / (h * q) - std::pow(h, H.two_h()) / (q * p);
}

/// Normalised lag-n autocovariance of unit-width increments,
/// gamma(H,n) = Delta^4 |n|^{2H+2} / (4(2H+1)(H+1)). Symmetric in n.
inline double gamma(HurstIndex H, std::int64_t n) {
    const double Hv = H.value();
    const double p = 2.0 * Hv + 2.0;
    const double norm = 4.0 * (2.0 * Hv + 1.0) * (Hv + 1.0);
    const std::int64_t m = n < 0 ? -n : n;
    if (m < detail::kGammaSeriesLag) {
        using detail::abs_pow;
        const double x = static_cast<double>(m);
        return (abs_pow(x - 2.0, p) - 4.0 * abs_pow(x - 1.0, p) + 6.0 * abs_pow(x, p) -
                4.0 * abs_pow(x + 1.0, p) + abs_pow(x + 2.0, p)) /
               norm;
    }
    const double x = static_cast<double>(m);
    return std::pow(x, p - 4.0) * detail::gamma_series_tail(p, x) / norm;
}

/// Leading large-lag behaviour H(2H-1) n^{2H-2}.
inline double gamma_asymptotic(HurstIndex H, std::int64_t n) {
    if (n < 2) throw std::invalid_argument("gamma_asymptotic requires n >= 2");
    const double Hv = H.value();
    return Hv * (2.0 * Hv - 1.0) * std::pow(static_cast<double>(n), 2.0 * Hv - 2.0);
}

/// h^{2H} gamma(H,n): lag-n covariance of increments of X^{h,H} (unit scale).
inline double increment_autocov(const NifbmParams& params, std::int64_t n) {
    return std::pow(params.h, params.hurst.two_h()) * gamma(params.hurst, n);
}

/// Lag-n covariance of one scaled component at width `width`.
inline double component_increment_autocov(HurstIndex H, double scale2, double width,
                                          std::int64_t n) {
    if (scale2 == 0.0) return 0.0;
    return scale2 * std::pow(width, H.two_h()) * gamma(H, n);
}

inline bool valid_aggregation(int j) { return j == 1 || j == 2 || j == 4 || j == 8; }

/// a^2 (jh)^{2H1} gamma(H1,n) + b^2 (jh)^{2H2} gamma(H2,n).
inline double mixed_increment_autocov(const MixedParams& params, double h, int j,
                                      std::int64_t n) {
    if (!(h > 0.0)) throw std::invalid_argument("h must be positive");
    if (!valid_aggregation(j)) throw std::invalid_argument("aggregation factor must be 1, 2, 4 or 8");
    const double width = j * h;
    return component_increment_autocov(params.hurst1, params.a2, width, n) +
           component_increment_autocov(params.hurst2, params.b2, width, n);
}

/// First row of the (Toeplitz) covariance matrix of an increment series.
struct AutocovSequence {
    std::vector<double> values;

    [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
    double operator[](std::size_t i) const { return values[i]; }
};

/// Lag-n covariance for either noise model at width j*h.
inline double noise_increment_autocov(const NoiseSpec& noise, double h, int j, std::int64_t n) {
    if (const auto* one = std::get_if<NifbmParams>(&noise)) {
        if (!valid_aggregation(j)) throw std::invalid_argument("aggregation factor must be 1, 2, 4 or 8");
        return component_increment_autocov(one->hurst, one->a2, j * h, n);
    }
    return mixed_increment_autocov(std::get<MixedParams>(noise), h, j, n);
}

inline AutocovSequence autocov_sequence(const NoiseSpec& noise, double h, int j, std::size_t N) {
    if (N < 1) throw std::invalid_argument("autocov_sequence requires N >= 1");
    if (!(h > 0.0)) throw std::invalid_argument("h must be positive");
    AutocovSequence seq;
    seq.values.resize(N);
    for (std::size_t n = 0; n < N; ++n) {
        seq.values[n] = noise_increment_autocov(noise, h, j, static_cast<std::int64_t>(n));
    }
    return seq;
}

inline AutocovSequence autocov_sequence(const NifbmParams& params, std::size_t N) {
    return autocov_sequence(NoiseSpec{params}, params.h, 1, N);
}

inline AutocovSequence autocov_sequence(const MixedParams& params, double h, int j, std::size_t N) {
    return autocov_sequence(NoiseSpec{params}, h, j, N);
}

/// Root of gamma(H,1) = 0 in (0,1), where lag-one increment correlation
/// changes sign. Bisection on [0.1, 0.5].
inline double find_h0(double tol = 1e-9) {
    double lo = 0.1;
    double hi = 0.5;
    double f_lo = gamma(HurstIndex(lo), 1);
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = gamma(HurstIndex(mid), 1);
        if (f_mid == 0.0) return mid;
        if ((f_mid < 0.0) == (f_lo < 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace nifbm
