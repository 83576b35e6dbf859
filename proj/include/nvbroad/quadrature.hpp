#pragma once

#include <functional>

namespace nvbroad::quad {

struct Options {
    double rel_tol = 1e-10;
    double abs_tol = 0.0;
    int max_intervals = 4000;
};

struct Result {
    double value = 0.0;
    double error = 0.0;
    int evaluations = 0;
    bool converged = false;
};

using Integrand = std::function<double(double)>;

/// Globally adaptive 7/15-point Gauss-Kronrod quadrature on [a, b]. The
/// interval with the largest error estimate is bisected until the summed
/// error satisfies max(abs_tol, rel_tol * |value|).
Result integrate(const Integrand& f, double a, double b, const Options& opts = {});

/// Integral over [a, inf) via x = a + scale * t / (1 - t). `scale` should be
/// comparable to the width of the integrand's main feature.
Result integrate_upper(const Integrand& f, double a, double scale, const Options& opts = {});

/// Integral over (-inf, inf) via x = scale * t / (1 - t^2).
Result integrate_real_line(const Integrand& f, double scale, const Options& opts = {});

}  // namespace nvbroad::quad
