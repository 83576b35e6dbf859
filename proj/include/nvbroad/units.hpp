#pragma once

#include <cmath>
#include <numbers>

// Internal unit system:
//   length              nm
//   time                µs
//   angular frequency   rad/µs  (so ω = 2π · f[MHz])
// Frequencies only leave the library as ordinary frequencies (MHz = ω/2π).
namespace nvbroad {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

constexpr double mhz_to_angular(double f_mhz) { return two_pi * f_mhz; }
constexpr double angular_to_mhz(double omega) { return omega / two_pi; }

/// Neumaier-compensated accumulator. The carried error term makes the total
/// insensitive to summation order for well-conditioned sums.
template <typename Scalar = double>
class CompensatedSum {
public:
    void add(Scalar x) {
        const Scalar t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    void add(const CompensatedSum& other) {
        add(other.sum_);
        add(other.comp_);
    }
    Scalar value() const { return sum_ + comp_; }

private:
    Scalar sum_{0};
    Scalar comp_{0};
};

}  // namespace nvbroad
