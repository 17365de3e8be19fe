#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace nifbm {

/// (seed, stream) pair. Replication r of an experiment uses stream r.
struct RngSeed {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;

    [[nodiscard]] RngSeed with_stream(std::uint64_t s) const noexcept { return {seed, s}; }
};

inline std::mt19937_64 make_engine(RngSeed s) {
    std::seed_seq seq{static_cast<std::uint32_t>(s.seed), static_cast<std::uint32_t>(s.seed >> 32),
                      static_cast<std::uint32_t>(s.stream),
                      static_cast<std::uint32_t>(s.stream >> 32), 0x6e6966u};
    return std::mt19937_64(seq);
}

inline void fill_standard_normal(std::mt19937_64& eng, std::span<double> out) {
    std::normal_distribution<double> dist(0.0, 1.0);
    for (double& v : out) v = dist(eng);
}

inline std::vector<double> standard_normals(RngSeed s, std::size_t n) {
    auto eng = make_engine(s);
    std::vector<double> z(n);
    fill_standard_normal(eng, z);
    return z;
}

}  // namespace nifbm
