#pragma once

#include <optional>
#include <string_view>

#include "nvbroad/moments.hpp"

namespace nvbroad {

/// How the relaxation time responds to a change of disorder width.
enum class ScalingMode {
    linear,     ///< T_r proportional to the width (golden-rule density-of-states argument)
    quadratic,  ///< T_r proportional to the width squared (nu^2 dependence of the RTA rate)
};

std::string_view to_string(ScalingMode mode);

struct RelaxationResult {
    double t_r_orig_us = 0.0;
    double t_r_corrected_us = 0.0;
    double ratio = 0.0;  ///< Gamma_Ising / sigma_exp
    ScalingMode mode = ScalingMode::linear;
    double gamma_ising_used = 0.0;
    std::optional<double> nu0_value;
    bool anchored = true;
};

/// Golden-rule flip-flop rate 2|J|^2 (2 gamma) / ((di - dj)^2 + (2 gamma)^2),
/// all arguments angular frequencies; the result is in 1/us.
double fgr_pair_rate(double j_coupling, double delta_i, double delta_j, double gamma_perp);

/// Flip-flop amplitude from the Ising coefficient under the secular dipolar
/// convention J = Q / 2. A convention, not a derived quantity.
constexpr double flip_flop_from_ising(double q) { return 0.5 * q; }

struct BaselineResult {
    double computed_us = 0.0;  ///< from the RTA rate expression
    double anchor_us = 0.0;    ///< published baseline
    double nu0 = 0.0;
    double eta_sys = 0.0;      ///< rate prefactor multiplying nu(0)^2, 1/us

    double ratio_to_anchor() const { return computed_us / anchor_us; }
};

/// RTA relaxation time 1/T = (N/V)^2 (J0^2 / gamma) (16 pi^3 / 9) xi^2 nu(0)^2,
/// with nu(0) evaluated at sigma_exp.
BaselineResult rta_baseline(const PhysicalParams& params);

/// Renormalises `t_r_orig_us` by (Gamma_Ising / sigma_exp) or its square.
RelaxationResult corrected_tr(double t_r_orig_us, double gamma_ising, double sigma_exp, ScalingMode mode);

}  // namespace nvbroad
