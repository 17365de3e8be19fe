#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "covariance.hpp"
#include "estimation.hpp"
#include "parallel.hpp"
#include "simulation.hpp"

namespace nifbm {

namespace detail {

inline void require_h_below_three_quarters(HurstIndex H) {
    if (!(H.value() < 0.75)) {
        throw HTooLarge("asymptotic covariance requires H < 3/4, got " + std::to_string(H.value()));
    }
}

/// Coefficients c_k of gamma(H, x) = sum_k c_k x^{p-k}, k = 4, 6, ..., for x > 2.
inline std::vector<double> gamma_expansion(HurstIndex H, std::size_t terms) {
    const double Hv = H.value();
    const double p = 2.0 * Hv + 2.0;
    const double norm = 4.0 * (2.0 * Hv + 1.0) * (Hv + 1.0);
    std::vector<double> c(terms);
    double binom = 1.0;
    for (int k = 0; k < 4; ++k) binom *= (p - k) / (k + 1);
    double pow2k = 16.0;
    for (std::size_t m = 0; m < terms; ++m) {
        const double k = 4.0 + 2.0 * static_cast<double>(m);
        c[m] = 2.0 * binom * (pow2k - 4.0) / norm;
        binom *= (p - k) / (k + 1.0);
        binom *= (p - k - 1.0) / (k + 2.0);
        pow2k *= 4.0;
    }
    return c;
}

/// sum_{i >= n0} i^e for e < -1 by Euler-Maclaurin (exact to rounding for n0 >= 100).
inline double power_tail(double e, double n0) {
    static constexpr std::array<double, 6> bernoulli{1.0 / 6.0,  -1.0 / 30.0, 1.0 / 42.0,
                                                     -1.0 / 30.0, 5.0 / 66.0, -691.0 / 2730.0};
    double sum = std::pow(n0, e + 1.0) / (-e - 1.0) + 0.5 * std::pow(n0, e);
    double fact = 1.0;     // (2k)!
    double falling = e;    // e (e-1) ... (e-2k+2)
    for (std::size_t k = 1; k <= bernoulli.size(); ++k) {
        fact *= static_cast<double>((2 * k - 1) * (2 * k));
        const double deriv = falling * std::pow(n0, e - static_cast<double>(2 * k - 1));
        sum -= bernoulli[k - 1] / fact * deriv;
        falling *= (e - static_cast<double>(2 * k - 1)) * (e - static_cast<double>(2 * k));
    }
    return sum;
}

/// sum_{i >= n0} gamma(i) gamma(i+d) from the large-argument expansion.
inline double gamma_product_tail(HurstIndex H, std::int64_t d, double n0) {
    constexpr std::size_t kTerms = 8;   // gamma terms per factor
    constexpr std::size_t kOrder = 24;  // highest power offset kept
    const double p = 2.0 * H.value() + 2.0;
    const auto c = gamma_expansion(H, kTerms);
    std::array<double, kOrder + 1> coef{};
    const double dd = static_cast<double>(d);
    for (std::size_t m1 = 0; m1 < kTerms; ++m1) {
        for (std::size_t m2 = 0; m2 < kTerms; ++m2) {
            const double q = p - 4.0 - 2.0 * static_cast<double>(m2);
            double binom = 1.0;  // C(q, l)
            double dpow = 1.0;   // d^l
            for (std::size_t l = 0;; ++l) {
                const std::size_t o = 2 * m1 + 2 * m2 + l;
                if (o > kOrder) break;
                coef[o] += c[m1] * c[m2] * binom * dpow;
                if (d == 0) break;
                binom *= (q - static_cast<double>(l)) / static_cast<double>(l + 1);
                dpow *= dd;
            }
        }
    }
    const double lead = 2.0 * p - 8.0;
    double sum = 0.0;
    for (std::size_t o = 0; o <= kOrder; ++o) {
        if (coef[o] != 0.0) sum += coef[o] * power_tail(lead - static_cast<double>(o), n0);
    }
    return sum;
}

}  // namespace detail

/// Default split point between the direct sum and the analytic tail.
inline constexpr std::int64_t kSeriesSplit = 1000;

/// sum over all integers i of gamma(H, i+alpha) gamma(H, i+beta).
/// Terms with |i| below the split are summed directly; the two tails are
/// summed in closed form from the large-lag expansion of gamma.
inline double gamma_square_series(HurstIndex H, std::int64_t alpha, std::int64_t beta,
                                  std::int64_t split = kSeriesSplit) {
    detail::require_h_below_three_quarters(H);
    if (split < 100) throw std::invalid_argument("series split must be >= 100");
    const std::int64_t d = beta >= alpha ? beta - alpha : alpha - beta;
    // sum_i gamma(i) gamma(i+d); i <= -split-d mirrors i >= split.
    double direct = 0.0;
    for (std::int64_t i = -split - d + 1; i < split; ++i) direct += gamma(H, i) * gamma(H, i + d);
    return direct + 2.0 * detail::gamma_product_tail(H, d, static_cast<double>(split));
}

/// The cross entry admits two readings; the halved one matches simulation.
enum class CrossTermConvention { halved, unhalved };

struct AsymptoticCov2 {
    double s11;
    double s12;
    double s22;
};

/// Asymptotic covariance of sqrt(N) (xi^1_{2N}, xi^2_N) for unit scale.
inline AsymptoticCov2 sigma_tilde_one(HurstIndex H, double h,
                                      CrossTermConvention conv = CrossTermConvention::halved) {
    detail::require_h_below_three_quarters(H);
    if (!(h > 0.0)) throw std::invalid_argument("h must be positive");
    const double S0 = gamma_square_series(H, 0, 0);
    const double S1 = gamma_square_series(H, 0, 1);
    const double S2 = gamma_square_series(H, 0, 2);
    const double h4 = std::pow(h, 2.0 * H.two_h());
    AsymptoticCov2 out;
    out.s11 = h4 * S0;
    out.s22 = std::pow(2.0, 2.0 * H.two_h() + 1.0) * out.s11;
    out.s12 = h4 * (3.0 * S0 + 4.0 * S1 + S2);
    if (conv == CrossTermConvention::halved) out.s12 *= 0.5;
    return out;
}

/// N Var(xi^1_{2N}) at finite N: h^{4H} sum_{|i|<2N} (1 - |i|/(2N)) gamma(i)^2.
inline double finite_n_var_xi1(HurstIndex H, double h, std::size_t N) {
    const std::int64_t M = static_cast<std::int64_t>(2 * N);
    double s = 0.0;
    for (std::int64_t i = -M + 1; i < M; ++i) {
        const double g = gamma(H, i);
        s += (1.0 - static_cast<double>(i < 0 ? -i : i) / static_cast<double>(M)) * g * g;
    }
    return std::pow(h, 2.0 * H.two_h()) * s;
}

struct Jacobian2 {
    double d11, d12, d21, d22;  // rows f1, f2; columns H, a2

    [[nodiscard]] double det() const { return d11 * d22 - d12 * d21; }
};

/// Jacobian of (H, a2) -> (eta1, eta2).
inline Jacobian2 jacobian_one(const NifbmParams& theta) {
    const double H = theta.hurst.value();
    const double h = theta.h;
    const double a2 = theta.a2;
    const double x = std::pow(2.0, 2.0 * H);
    const double D = (2.0 * H + 1.0) * (H + 1.0);
    const double dD = 4.0 * H + 3.0;
    const double hp = std::pow(h, 2.0 * H);
    const double lh = 2.0 * std::log(h);
    const double l2 = 2.0 * std::numbers::ln2;
    Jacobian2 J;
    J.d11 = 2.0 * a2 * hp * ((lh * (x - 1.0) + l2 * x) * D - (x - 1.0) * dD) / (D * D);
    J.d12 = 2.0 * hp * (x - 1.0) / D;
    J.d21 = 2.0 * a2 * hp * x * (((lh + l2) * (x - 1.0) + l2 * x) * D - (x - 1.0) * dD) / (D * D);
    J.d22 = 2.0 * hp * x * (x - 1.0) / D;
    return J;
}

/// Closed form of det(jacobian_one).
inline double jacobian_one_det(const NifbmParams& theta) {
    const double H = theta.hurst.value();
    const double x = std::pow(2.0, 2.0 * H);
    const double D = (2.0 * H + 1.0) * (H + 1.0);
    return -theta.a2 * std::pow(theta.h, 4.0 * H) * std::pow(2.0, 2.0 * H + 3.0) *
           std::numbers::ln2 * (x - 1.0) * (x - 1.0) / (D * D);
}

struct Matrix2 {
    double m00, m01, m11;  // symmetric
};

/// Delta-method covariance of sqrt(N) (H_hat - H, a2_hat - a2).
inline Matrix2 sigma0_one(const NifbmParams& theta,
                          CrossTermConvention conv = CrossTermConvention::halved) {
    const auto S = sigma_tilde_one(theta.hurst, theta.h, conv);
    const double a4 = theta.a2 * theta.a2;
    const Jacobian2 J = jacobian_one(theta);
    const double det = J.det();
    // J^{-1} = [d22 -d12; -d21 d11] / det
    const double i00 = J.d22 / det, i01 = -J.d12 / det;
    const double i10 = -J.d21 / det, i11 = J.d11 / det;
    const double s11 = a4 * S.s11, s12 = a4 * S.s12, s22 = a4 * S.s22;
    // rows of J^{-1} S
    const double r00 = i00 * s11 + i01 * s12, r01 = i00 * s12 + i01 * s22;
    const double r10 = i10 * s11 + i11 * s12, r11 = i10 * s12 + i11 * s22;
    Matrix2 out;
    out.m00 = r00 * i00 + r01 * i01;
    out.m01 = r00 * i10 + r01 * i11;
    out.m11 = r10 * i10 + r11 * i11;
    return out;
}

/// sqrt(Sigma0[0,0] / N).
inline double sigma_theory_h(const NifbmParams& theta, std::size_t N,
                             CrossTermConvention conv = CrossTermConvention::halved) {
    return std::sqrt(sigma0_one(theta, conv).m00 / static_cast<double>(N));
}

/// sqrt(Sigma0[1,1] / N).
inline double sigma_theory_a2(const NifbmParams& theta, std::size_t N,
                              CrossTermConvention conv = CrossTermConvention::halved) {
    return std::sqrt(sigma0_one(theta, conv).m11 / static_cast<double>(N));
}

struct EmpiricalCov {
    std::size_t dim = 0;
    std::vector<double> cov;  // row-major dim x dim
    std::size_t used = 0;
    std::size_t degenerate = 0;

    [[nodiscard]] double operator()(std::size_t i, std::size_t j) const { return cov[i * dim + j]; }
};

/// Sample covariance of sqrt(N) (theta_hat - theta) over seeded replications.
/// The series is sampled once at width h and aggregated; one process uses
/// 2N+1 base increments, two processes use 8N+7 (N increments at j = 8).
inline EmpiricalCov empirical_estimator_cov(const NoiseSpec& theta, double h, std::size_t N,
                                            std::size_t replications, RngSeed seed,
                                            unsigned threads = 0) {
    if (replications < 100) throw std::invalid_argument("empirical covariance needs >= 100 replications");
    check_noise_width(theta, h);
    const bool one = std::holds_alternative<NifbmParams>(theta);
    const std::size_t dim = one ? 2 : 4;
    const std::size_t base_n = one ? 2 * N + 1 : base_length_for(N, 8);
    const auto L = cholesky_factor(autocov_sequence(theta, h, 1, base_n));
    const SampleGrid grid(h, base_n, 1);

    std::vector<std::array<double, 4>> est(replications);
    std::vector<char> bad(replications, 0);
    parallel_for(replications, [&](std::size_t r) {
        const auto base = sample_increments(L, grid, seed.with_stream(r));
        if (one) {
            const auto e = estimate_one_nifbm(xi_one_process(base), h);
            est[r] = {e.H_hat, e.a2_hat, 0.0, 0.0};
            bad[r] = e.degenerate;
        } else {
            const auto e = estimate_two_nifbm(xi_shared_horizon(base), h);
            est[r] = {e.H1_hat, e.H2_hat, e.a2_hat, e.b2_hat};
            bad[r] = e.degenerate;
        }
    }, threads);

    std::array<double, 4> truth{};
    if (one) {
        const auto& p = std::get<NifbmParams>(theta);
        truth = {p.hurst.value(), p.a2, 0.0, 0.0};
    } else {
        const auto& p = std::get<MixedParams>(theta);
        truth = {p.hurst1.value(), p.hurst2.value(), p.a2, p.b2};
    }

    EmpiricalCov out;
    out.dim = dim;
    out.cov.assign(dim * dim, 0.0);
    std::array<double, 4> mean{};
    for (std::size_t r = 0; r < replications; ++r) {
        if (bad[r]) {
            ++out.degenerate;
            continue;
        }
        ++out.used;
        for (std::size_t i = 0; i < dim; ++i) mean[i] += est[r][i] - truth[i];
    }
    if (out.used < 2) return out;
    for (std::size_t i = 0; i < dim; ++i) mean[i] /= static_cast<double>(out.used);
    const double scale = static_cast<double>(N) / static_cast<double>(out.used - 1);
    for (std::size_t r = 0; r < replications; ++r) {
        if (bad[r]) continue;
        for (std::size_t i = 0; i < dim; ++i) {
            const double di = est[r][i] - truth[i] - mean[i];
            for (std::size_t j = 0; j < dim; ++j) {
                out.cov[i * dim + j] += scale * di * (est[r][j] - truth[j] - mean[j]);
            }
        }
    }
    return out;
}

}  // namespace nifbm
