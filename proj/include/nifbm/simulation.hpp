#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "covariance.hpp"
#include "rng.hpp"
#include "toeplitz.hpp"

namespace nifbm {

/// Equally spaced observation grid: t_k = k*j*h, k = 0..N.
struct SampleGrid {
    double h;
    std::size_t N;
    int j;

    SampleGrid(double h_, std::size_t N_, int j_ = 1) : h(h_), N(N_), j(j_) {
        if (!(h > 0.0)) throw std::invalid_argument("grid step h must be positive");
        if (N < 1) throw std::invalid_argument("grid needs at least one increment");
        if (!valid_aggregation(j)) throw std::invalid_argument("aggregation factor must be 1, 2, 4 or 8");
    }

    [[nodiscard]] double time(std::size_t k) const { return static_cast<double>(k) * j * h; }
    [[nodiscard]] double width() const { return j * h; }

    friend bool operator==(const SampleGrid&, const SampleGrid&) = default;
};

struct IncrementSeries {
    SampleGrid grid;
    std::vector<double> values;

    IncrementSeries(SampleGrid g, std::vector<double> v) : grid(g), values(std::move(v)) {
        if (values.size() != grid.N) {
            throw LengthError("increment series length " + std::to_string(values.size()) +
                              " does not match grid N = " + std::to_string(grid.N));
        }
    }

    [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
};

/// Drift mu*G sampled at the grid times. g_values has N+1 entries with G_0 = 0.
struct DriftSpec {
    double mu;
    std::vector<double> g_values;

    DriftSpec(double mu_, std::vector<double> g) : mu(mu_), g_values(std::move(g)) {
        if (g_values.size() < 2) throw std::invalid_argument("drift needs at least two samples of G");
        if (g_values[0] != 0.0) throw std::invalid_argument("drift function must satisfy G(0) = 0");
        bool any = false;
        for (double v : g_values) any = any || v != 0.0;
        if (!any) throw std::invalid_argument("drift function G vanishes on the whole grid");
    }
};

/// 5 cos t - exp(-4t) + 2 t^2.
inline double paper_g(double t) { return 5.0 * std::cos(t) - std::exp(-4.0 * t) + 2.0 * t * t; }

inline double linear_g(double t) { return t; }

/// G(k*step) - G(0) for k = 0..N.
inline std::vector<double> sample_g(const std::function<double(double)>& G, std::size_t N,
                                    double step) {
    std::vector<double> g(N + 1);
    const double g0 = G(0.0);
    for (std::size_t k = 0; k <= N; ++k) g[k] = G(static_cast<double>(k) * step) - g0;
    g[0] = 0.0;
    return g;
}

inline ToeplitzCholesky cholesky_factor(const AutocovSequence& cov) {
    return ToeplitzCholesky(cov.values);
}

/// Rejects a one-process noise whose width differs from the grid step.
inline void check_noise_width(const NoiseSpec& noise, double h) {
    if (const auto* one = std::get_if<NifbmParams>(&noise)) {
        if (one->h != h) {
            throw std::invalid_argument("noise width h = " + std::to_string(one->h) +
                                        " does not match grid step " + std::to_string(h));
        }
    }
}

/// L z for a given standard-normal vector z (length grid.N).
inline IncrementSeries increments_from_normals(const ToeplitzCholesky& L, const SampleGrid& grid,
                                               std::span<const double> z) {
    if (L.size() < grid.N) throw std::invalid_argument("Cholesky factor smaller than grid");
    if (z.size() != grid.N) throw std::invalid_argument("normal vector length does not match grid");
    std::vector<double> out(grid.N);
    L.multiply(z, out);
    return IncrementSeries(grid, std::move(out));
}

/// Sample with a precomputed factor (shared across replications).
inline IncrementSeries sample_increments(const ToeplitzCholesky& L, const SampleGrid& grid,
                                         RngSeed seed) {
    const auto z = standard_normals(seed, grid.N);
    return increments_from_normals(L, grid, z);
}

inline IncrementSeries sample_increments(const NoiseSpec& noise, const SampleGrid& grid,
                                         RngSeed seed) {
    check_noise_width(noise, grid.h);
    const auto L = cholesky_factor(autocov_sequence(noise, grid.h, grid.j, grid.N));
    return sample_increments(L, grid, seed);
}

/// One halving step: out_k = (x_{2k} + 2 x_{2k+1} + x_{2k+2}) / 2.
inline IncrementSeries aggregate_once(const IncrementSeries& base) {
    if (base.grid.j == 8) throw std::invalid_argument("cannot aggregate beyond j = 8");
    const std::size_t m = base.size();
    const std::size_t out_n = m == 0 ? 0 : (m - 1) / 2;
    if (out_n == 0) {
        throw LengthError("aggregation needs at least 3 increments, got " + std::to_string(m));
    }
    std::vector<double> out(out_n);
    const auto& x = base.values;
    for (std::size_t k = 0; k < out_n; ++k) {
        out[k] = 0.5 * (x[2 * k] + 2.0 * x[2 * k + 1] + x[2 * k + 2]);
    }
    return IncrementSeries(SampleGrid(base.grid.h, out_n, base.grid.j * 2), std::move(out));
}

/// Increments at width target*h from a width-h series. A base of length
/// target*N + target - 1 yields exactly N increments.
inline IncrementSeries aggregate_increments(const IncrementSeries& base, int target) {
    if (!valid_aggregation(target) || target < base.grid.j) {
        throw std::invalid_argument("invalid aggregation target " + std::to_string(target));
    }
    IncrementSeries cur = base;
    while (cur.grid.j < target) cur = aggregate_once(cur);
    return cur;
}

/// Base length needed for N increments at factor j.
inline std::size_t base_length_for(std::size_t N, int j) {
    return static_cast<std::size_t>(j) * N + static_cast<std::size_t>(j) - 1;
}

inline IncrementSeries add_drift(const IncrementSeries& increments, const DriftSpec& drift) {
    if (drift.g_values.size() != increments.size() + 1) {
        throw std::invalid_argument("drift has " + std::to_string(drift.g_values.size()) +
                                    " samples, expected " + std::to_string(increments.size() + 1));
    }
    std::vector<double> v = increments.values;
    for (std::size_t k = 0; k < v.size(); ++k) {
        v[k] += drift.mu * (drift.g_values[k + 1] - drift.g_values[k]);
    }
    return IncrementSeries(increments.grid, std::move(v));
}

/// Levels Y_0 = 0, Y_k = sum of the first k increments.
inline std::vector<double> cumulative_path(const IncrementSeries& increments) {
    std::vector<double> y(increments.size() + 1, 0.0);
    for (std::size_t k = 0; k < increments.size(); ++k) y[k + 1] = y[k] + increments.values[k];
    return y;
}

}  // namespace nifbm
