#pragma once

// Cholesky factor of a symmetric positive-definite Toeplitz matrix given by
// its first row. The factor is built by the Schur algorithm in O(n^2) time
// and stored packed by columns (column k holds rows k..n-1).

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "params.hpp"

namespace nifbm {

class ToeplitzCholesky {
public:
    ToeplitzCholesky() = default;

    explicit ToeplitzCholesky(std::span<const double> first_row) : n_(first_row.size()) {
        if (n_ == 0) throw std::invalid_argument("empty Toeplitz row");
        if (!(first_row[0] > 0.0)) {
            throw NotPositiveDefinite("Toeplitz pivot 0 is not positive");
        }
        packed_.resize(n_ * (n_ + 1) / 2);
        offsets_.resize(n_);
        for (std::size_t k = 0, off = 0; k < n_; ++k) {
            offsets_[k] = off;
            off += n_ - k;
        }

        // Generators of the displacement representation.
        const double s = 1.0 / std::sqrt(first_row[0]);
        std::vector<double> g1(n_), g2(n_);
        for (std::size_t i = 0; i < n_; ++i) g1[i] = g2[i] = first_row[i] * s;
        g2[0] = 0.0;

        for (std::size_t k = 0; k < n_; ++k) {
            double* col = packed_.data() + offsets_[k];
            for (std::size_t i = k; i < n_; ++i) col[i - k] = g1[i];
            if (k + 1 == n_) break;
            for (std::size_t i = n_ - 1; i > k; --i) g1[i] = g1[i - 1];
            const double rho = g2[k + 1] / g1[k + 1];
            if (!(std::abs(rho) < 1.0)) {
                throw NotPositiveDefinite("Toeplitz pivot " + std::to_string(k + 1) +
                                          " is not positive");
            }
            const double root = std::sqrt((1.0 - rho) * (1.0 + rho));
            const double inv_root = 1.0 / root;
            for (std::size_t i = k + 1; i < n_; ++i) {
                const double a = g1[i];
                const double b = g2[i];
                const double a_new = (a - rho * b) * inv_root;
                g1[i] = a_new;
                g2[i] = root * b - rho * a_new;
            }
        }
    }

    [[nodiscard]] std::size_t size() const noexcept { return n_; }

    /// L(i, j), zero above the diagonal.
    [[nodiscard]] double operator()(std::size_t i, std::size_t j) const {
        if (j > i) return 0.0;
        return packed_[offsets_[j] + (i - j)];
    }

    [[nodiscard]] std::span<const double> column(std::size_t k) const {
        return {packed_.data() + offsets_[k], n_ - k};
    }

    /// out[0..m) = (L z)[0..m) for the leading m x m block, m = z.size().
    void multiply(std::span<const double> z, std::span<double> out) const {
        const std::size_t m = z.size();
        if (m > n_ || out.size() < m) throw std::invalid_argument("multiply: size mismatch");
        for (std::size_t i = 0; i < m; ++i) out[i] = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            const double zk = z[k];
            if (zk == 0.0) continue;
            const double* col = packed_.data() + offsets_[k];
            double* dst = out.data() + k;
            const std::size_t len = m - k;
            for (std::size_t i = 0; i < len; ++i) dst[i] += zk * col[i];
        }
    }

    /// Solves L y = b in place over the leading b.size() block.
    void solve_lower(std::span<double> b) const {
        const std::size_t m = b.size();
        if (m > n_) throw std::invalid_argument("solve_lower: size mismatch");
        for (std::size_t k = 0; k < m; ++k) {
            const double* col = packed_.data() + offsets_[k];
            const double yk = b[k] / col[0];
            b[k] = yk;
            double* dst = b.data() + k;
            const std::size_t len = m - k;
            for (std::size_t i = 1; i < len; ++i) dst[i] -= yk * col[i];
        }
    }

    /// Solves L^T x = y in place over the leading y.size() block.
    void solve_upper(std::span<double> y) const {
        const std::size_t m = y.size();
        if (m > n_) throw std::invalid_argument("solve_upper: size mismatch");
        for (std::size_t k = m; k-- > 0;) {
            const double* col = packed_.data() + offsets_[k];
            const double* src = y.data() + k;
            const std::size_t len = m - k;
            double acc = 0.0;
            for (std::size_t i = 1; i < len; ++i) acc += col[i] * src[i];
            y[k] = (y[k] - acc) / col[0];
        }
    }

    /// T^{-1} b via two triangular solves.
    [[nodiscard]] std::vector<double> solve(std::span<const double> b) const {
        std::vector<double> x(b.begin(), b.end());
        solve_lower(x);
        solve_upper(x);
        return x;
    }

    /// Row-major dense copy of L (tests and small problems only).
    [[nodiscard]] std::vector<double> to_dense() const {
        std::vector<double> dense(n_ * n_, 0.0);
        for (std::size_t j = 0; j < n_; ++j) {
            for (std::size_t i = j; i < n_; ++i) dense[i * n_ + j] = (*this)(i, j);
        }
        return dense;
    }

private:
    std::size_t n_ = 0;
    std::vector<double> packed_;
    std::vector<std::size_t> offsets_;
};

}  // namespace nifbm
