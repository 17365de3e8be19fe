#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <variant>

namespace nifbm {

/// Raised when a Toeplitz covariance fails a Cholesky pivot.
class NotPositiveDefinite : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when a series is too short for the requested operation.
class LengthError : public std::length_error {
public:
    using std::length_error::length_error;
};

/// Raised by estimators whose normalising quadratic form vanishes.
class ZeroDenominator : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Raised by the asymptotic-covariance routines outside 0 < H < 3/4.
class HTooLarge : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Hurst index, strictly inside (0, 1).
class HurstIndex {
public:
    explicit HurstIndex(double value) : value_(value) {
        if (!(value > 0.0 && value < 1.0)) {
            throw std::invalid_argument("Hurst index must lie in (0, 1), got " +
                                        std::to_string(value));
        }
    }

    [[nodiscard]] double value() const noexcept { return value_; }
    [[nodiscard]] double two_h() const noexcept { return 2.0 * value_; }

    friend bool operator==(HurstIndex a, HurstIndex b) noexcept {
        return a.value_ == b.value_;
    }

private:
    double value_;
};

/// Single-noise model: a * X^{h,H}.
struct NifbmParams {
    HurstIndex hurst;
    double h;   // window width
    double a2;  // squared scale

    NifbmParams(HurstIndex hurst_, double h_, double a2_) : hurst(hurst_), h(h_), a2(a2_) {
        if (!(h > 0.0)) throw std::invalid_argument("window width h must be positive");
        if (!(a2 > 0.0)) throw std::invalid_argument("scale a2 must be positive");
    }
};

/// Two independent components a*X^{H1} + b*X^{H2}, canonical order H1 > H2.
struct MixedParams {
    HurstIndex hurst1;
    HurstIndex hurst2;
    double a2;
    double b2;

    MixedParams(HurstIndex h1, HurstIndex h2, double a2_, double b2_)
        : hurst1(h1), hurst2(h2), a2(a2_), b2(b2_) {
        if (!(h1.value() > h2.value())) {
            throw std::invalid_argument("MixedParams requires H1 > H2");
        }
        if (!(a2 > 0.0) || !(b2 > 0.0)) {
            throw std::invalid_argument("MixedParams requires a2 > 0 and b2 > 0");
        }
    }

    /// Skips ordering and positivity checks. Used for degenerate studies
    /// (H1 == H2, b2 == 0) where the inversion is expected to flag.
    static MixedParams unchecked(HurstIndex h1, HurstIndex h2, double a2, double b2) {
        return MixedParams(h1, h2, a2, b2, Unchecked{});
    }

private:
    struct Unchecked {};
    MixedParams(HurstIndex h1, HurstIndex h2, double a2_, double b2_, Unchecked)
        : hurst1(h1), hurst2(h2), a2(a2_), b2(b2_) {}
};

/// Noise law of an increment series. Sampling routines require the
/// one-process width to agree with the sampling grid's base width.
using NoiseSpec = std::variant<NifbmParams, MixedParams>;

}  // namespace nifbm
