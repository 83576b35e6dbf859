#include "nvbroad/relaxation.hpp"

#include <cmath>
#include <numbers>

#include "nvbroad/errors.hpp"
#include "nvbroad/lineshape.hpp"

namespace nvbroad {

std::string_view to_string(ScalingMode mode) {
    return mode == ScalingMode::linear ? "linear" : "quadratic";
}

double fgr_pair_rate(double j_coupling, double delta_i, double delta_j, double gamma_perp) {
    require(gamma_perp > 0.0, "fgr_pair_rate: gamma_perp must be positive");
    const double width = 2.0 * gamma_perp;
    const double detuning = delta_i - delta_j;
    return 2.0 * j_coupling * j_coupling * width / (detuning * detuning + width * width);
}

BaselineResult rta_baseline(const PhysicalParams& params) {
    params.validate();
    constexpr double pi3 = std::numbers::pi * std::numbers::pi * std::numbers::pi;
    const double n = params.density();
    BaselineResult out;
    out.eta_sys = n * n * params.j0 * params.j0 / params.gamma_perp * (16.0 * pi3 / 9.0) * params.xi_sq;
    out.nu0 = nu0(params.sigma_exp, params.gamma_perp);
    out.computed_us = 1.0 / (out.eta_sys * out.nu0 * out.nu0);
    out.anchor_us = params.baseline_anchor_us;
    return out;
}

RelaxationResult corrected_tr(double t_r_orig_us, double gamma_ising, double sigma_exp, ScalingMode mode) {
    require(t_r_orig_us > 0.0 && gamma_ising > 0.0 && sigma_exp > 0.0,
            "corrected_tr: inputs must be positive");
    RelaxationResult out;
    out.t_r_orig_us = t_r_orig_us;
    out.gamma_ising_used = gamma_ising;
    out.ratio = gamma_ising / sigma_exp;
    out.mode = mode;
    out.t_r_corrected_us = mode == ScalingMode::linear ? t_r_orig_us * out.ratio
                                                       : t_r_orig_us * out.ratio * out.ratio;
    return out;
}

}  // namespace nvbroad
