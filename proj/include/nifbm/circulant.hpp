#pragma once

// Circulant-embedding sampler for long stationary increment series, used
// where a dense or packed Cholesky factor would not fit in memory. The
// embedding is exact whenever all circulant eigenvalues are nonnegative.

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "covariance.hpp"
#include "rng.hpp"

namespace nifbm {

class CirculantSampler {
public:
    /// `row` holds autocovariances at lags 0..N; samples have length N.
    explicit CirculantSampler(std::span<const double> row) {
        if (row.size() < 2) throw std::invalid_argument("circulant embedding needs lags 0..N, N >= 1");
        n_ = row.size() - 1;
        m_ = 2 * n_;
        std::unique_ptr<fftw_complex[], FftwFree> buf(fftw_alloc_complex(m_));
        fftw_complex* c = buf.get();
        plan_ = fftw_plan_dft_1d(static_cast<int>(m_), c, c, FFTW_FORWARD, FFTW_ESTIMATE);

        // first row of the circulant: r_0 .. r_N, r_{N-1} .. r_1
        for (std::size_t k = 0; k < m_; ++k) {
            c[k][0] = k <= n_ ? row[k] : row[m_ - k];
            c[k][1] = 0.0;
        }
        fftw_execute(plan_);

        sqrt_lambda_.resize(m_);
        const double scale = 1.0 / static_cast<double>(m_);
        for (std::size_t k = 0; k < m_; ++k) {
            double lambda = c[k][0];
            // Round-off around zero is tolerated; genuine negatives are not.
            if (lambda < 0.0) {
                if (lambda < -1e-10 * std::abs(row[0]) * static_cast<double>(m_)) {
                    throw NotPositiveDefinite("circulant embedding has negative eigenvalue " +
                                              std::to_string(lambda) + " at index " +
                                              std::to_string(k));
                }
                lambda = 0.0;
            }
            sqrt_lambda_[k] = std::sqrt(lambda * scale);
        }
    }

    CirculantSampler(const CirculantSampler&) = delete;
    CirculantSampler& operator=(const CirculantSampler&) = delete;

    ~CirculantSampler() {
        if (plan_ != nullptr) fftw_destroy_plan(plan_);
    }

    [[nodiscard]] std::size_t size() const noexcept { return n_; }

    /// One exact Gaussian series of length N. Safe to call concurrently.
    [[nodiscard]] std::vector<double> sample(RngSeed seed) const {
        auto eng = make_engine(seed);
        std::normal_distribution<double> dist(0.0, 1.0);
        std::unique_ptr<fftw_complex[], FftwFree> work(fftw_alloc_complex(m_));
        for (std::size_t k = 0; k < m_; ++k) {
            work.get()[k][0] = sqrt_lambda_[k] * dist(eng);
            work.get()[k][1] = sqrt_lambda_[k] * dist(eng);
        }
        fftw_execute_dft(plan_, work.get(), work.get());
        std::vector<double> out(n_);
        for (std::size_t k = 0; k < n_; ++k) out[k] = work.get()[k][0];
        return out;
    }

private:
    struct FftwFree {
        void operator()(fftw_complex* p) const { fftw_free(p); }
    };

    std::size_t n_ = 0;
    std::size_t m_ = 0;
    fftw_plan plan_ = nullptr;
    std::vector<double> sqrt_lambda_;
};

}  // namespace nifbm
