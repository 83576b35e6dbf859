#pragma once

#include <complex>

namespace nvbroad {

/// Faddeeva function w(z) = exp(-z^2) erfc(-i z).
///
/// Upper half-plane values use Weideman's rational expansion with 64 terms;
/// the lower half-plane follows from w(z) = 2 exp(-z^2) - w(-z). Relative
/// accuracy of Re w is better than 1e-6 for Im z >= 1e-8.
std::complex<double> faddeeva(std::complex<double> z);

}  // namespace nvbroad
