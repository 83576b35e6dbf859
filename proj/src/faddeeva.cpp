#include "nvbroad/faddeeva.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

namespace nvbroad {
namespace {

constexpr int terms = 64;

struct WeidemanTable {
    double L;
    std::array<double, terms> coeff;  // coeff[n] multiplies Z^n
};

// Coefficients of the expansion of w in powers of Z = (L + iz) / (L - iz),
// obtained from a discrete Fourier transform of exp(-t^2) (L^2 + t^2) sampled
// at t = L tan(theta / 2).
WeidemanTable make_table() {
    constexpr int M = 2 * terms;
    constexpr int M2 = 2 * M;
    WeidemanTable tab{};
    tab.L = std::sqrt(terms / std::numbers::sqrt2);
    // f[0] corresponds to theta = -pi, where the sample vanishes.
    std::vector<double> f(M2, 0.0);
    for (int k = -M + 1; k <= M - 1; ++k) {
        const double theta = k * std::numbers::pi / M;
        const double t = tab.L * std::tan(0.5 * theta);
        f[k + M] = std::exp(-t * t) * (tab.L * tab.L + t * t);
    }
    // Real part of DFT of the half-rotated sequence; only bins 1..terms are used.
    for (int n = 1; n <= terms; ++n) {
        double acc = 0.0;
        for (int j = 0; j < M2; ++j) {
            const double sample = f[(j + M) % M2];
            acc += sample * std::cos(2.0 * std::numbers::pi * n * j / M2);
        }
        tab.coeff[n - 1] = acc / M2;
    }
    return tab;
}

const WeidemanTable& table() {
    static const WeidemanTable tab = make_table();
    return tab;
}

}  // namespace

std::complex<double> faddeeva(std::complex<double> z) {
    using namespace std::complex_literals;
    if (z.imag() < 0.0) return 2.0 * std::exp(-z * z) - faddeeva(-z);

    const auto& tab = table();
    const std::complex<double> denom = tab.L - 1i * z;
    const std::complex<double> Z = (tab.L + 1i * z) / denom;
    // Horner from the highest power down.
    std::complex<double> p = 0.0;
    for (int n = terms - 1; n >= 0; --n) p = p * Z + tab.coeff[n];
    return 2.0 * p / (denom * denom) + (1.0 / std::sqrt(std::numbers::pi)) / denom;
}

}  // namespace nvbroad
