#pragma once

#include <cmath>

namespace nvbroad {

/// Widths of a Voigt profile, both as angular frequencies.
struct LineshapeParams {
    double gamma_homog = 0.0;    ///< Lorentzian half-width at half maximum
    double gamma_inhomog = 0.0;  ///< Gaussian standard deviation

    void validate() const;
};

/// 2 sqrt(2 ln 2): ratio of a Gaussian's FWHM to its standard deviation.
inline const double gaussian_fwhm_factor = 2.0 * std::sqrt(2.0 * std::log(2.0));

inline double fwhm_to_sigma(double fwhm) { return fwhm / gaussian_fwhm_factor; }
inline double sigma_to_fwhm(double sigma) { return sigma * gaussian_fwhm_factor; }

/// Unit-area Lorentzian with half-width `gamma`.
double lorentzian(double omega, double gamma);

/// Unit-area Gaussian with standard deviation `sigma`.
double gaussian(double omega, double sigma);

/// Convolution of the Lorentzian and Gaussian of `params`. Either width may
/// be zero, in which case the other profile is returned.
double voigt(double omega, const LineshapeParams& params);

/// Squared-overlap integral of the Voigt profile, the integral of V(w)^2
/// over the real line.
double overlap_j(const LineshapeParams& params);

/// Transport kernel nu(0): a unit Gaussian of width `sigma` averaged against
/// the weight sqrt(4 gamma^2 / (w^2 + 4 gamma^2)). Dimensionless, in (0, 1].
double nu0(double sigma, double gamma);

}  // namespace nvbroad
