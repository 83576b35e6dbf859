#include "nvbroad/lineshape.hpp"

#include <algorithm>
#include <complex>
#include <numbers>

#include "nvbroad/errors.hpp"
#include "nvbroad/faddeeva.hpp"
#include "nvbroad/quadrature.hpp"

namespace nvbroad {

using std::numbers::pi;

void LineshapeParams::validate() const {
    require(gamma_homog >= 0.0 && gamma_inhomog >= 0.0, "line widths must be non-negative");
    require(gamma_homog > 0.0 || gamma_inhomog > 0.0, "at least one line width must be positive");
}

double lorentzian(double omega, double gamma) {
    require(gamma > 0.0, "lorentzian: width must be positive");
    return gamma / (pi * (omega * omega + gamma * gamma));
}

double gaussian(double omega, double sigma) {
    require(sigma > 0.0, "gaussian: width must be positive");
    const double x = omega / sigma;
    return std::exp(-0.5 * x * x) / (std::sqrt(2.0 * pi) * sigma);
}

double voigt(double omega, const LineshapeParams& params) {
    params.validate();
    const double gamma = params.gamma_homog;
    const double sigma = params.gamma_inhomog;
    if (sigma == 0.0) return lorentzian(omega, gamma);
    if (gamma == 0.0) return gaussian(omega, sigma);
    const double scale = std::numbers::sqrt2 * sigma;
    const std::complex<double> z(omega / scale, gamma / scale);
    return faddeeva(z).real() / (std::sqrt(2.0 * pi) * sigma);
}

double overlap_j(const LineshapeParams& params) {
    params.validate();
    if (params.gamma_inhomog == 0.0) return 1.0 / (2.0 * pi * params.gamma_homog);
    // Even integrand; the mapping scale follows the wider component.
    const double scale = std::max(params.gamma_homog, params.gamma_inhomog);
    const auto res = quad::integrate_upper(
        [&](double w) {
            const double v = voigt(w, params);
            return v * v;
        },
        0.0, scale, {.rel_tol = 1e-11});
    if (!res.converged) throw ConvergenceError("overlap_j: quadrature did not converge");
    return 2.0 * res.value;
}

double nu0(double sigma, double gamma) {
    require(sigma > 0.0 && gamma > 0.0, "nu0: widths must be positive");
    const double two_gamma_sq = 4.0 * gamma * gamma;
    auto integrand = [&](double w) {
        return gaussian(w, sigma) * std::sqrt(two_gamma_sq / (w * w + two_gamma_sq));
    };
    // The Gaussian is negligible beyond 40 sigma; split where the kernel bends.
    const double outer = 40.0 * sigma;
    const double knee = std::min(20.0 * gamma, outer);
    const quad::Options opts{.rel_tol = 1e-12, .abs_tol = 0.0, .max_intervals = 4000};
    const auto inner = quad::integrate(integrand, 0.0, knee, opts);
    const auto tail = quad::integrate(integrand, knee, outer, opts);
    if (!inner.converged || !tail.converged) throw ConvergenceError("nu0: quadrature did not converge");
    return 2.0 * (inner.value + tail.value);
}

}  // namespace nvbroad
