#pragma once

// Exact sampler for a stationary increment series that picks the packed
// Cholesky factor for moderate lengths and circulant embedding beyond.

#include <cstddef>
#include <memory>
#include <vector>

#include "circulant.hpp"
#include "covariance.hpp"
#include "rng.hpp"
#include "simulation.hpp"
#include "toeplitz.hpp"

namespace nifbm {

class IncrementSampler {
public:
    /// Largest length served by the packed factor (about 400 MB).
    static constexpr std::size_t kPackedLimit = 10000;

    IncrementSampler(const NoiseSpec& noise, const SampleGrid& grid) : grid_(grid) {
        check_noise_width(noise, grid.h);
        if (grid.N <= kPackedLimit) {
            chol_ = std::make_unique<ToeplitzCholesky>(
                autocov_sequence(noise, grid.h, grid.j, grid.N).values);
        } else {
            circ_ = std::make_unique<CirculantSampler>(
                autocov_sequence(noise, grid.h, grid.j, grid.N + 1).values);
        }
    }

    [[nodiscard]] const SampleGrid& grid() const noexcept { return grid_; }
    [[nodiscard]] bool uses_circulant() const noexcept { return circ_ != nullptr; }

    [[nodiscard]] IncrementSeries sample(RngSeed seed) const {
        if (chol_) return sample_increments(*chol_, grid_, seed);
        return IncrementSeries(grid_, circ_->sample(seed));
    }

private:
    SampleGrid grid_;
    std::unique_ptr<ToeplitzCholesky> chol_;
    std::unique_ptr<CirculantSampler> circ_;
};

}  // namespace nifbm
