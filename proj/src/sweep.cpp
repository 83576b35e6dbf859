#include "nvbroad/sweep.hpp"

#include <algorithm>
#include <cmath>

#include "nvbroad/errors.hpp"
#include "nvbroad/relaxation.hpp"

namespace nvbroad {

std::string_view to_string(SweepMode mode) {
    switch (mode) {
        case SweepMode::rta_fixed_sigma: return "rta_fixed_sigma";
        case SweepMode::corrected_linear: return "corrected_linear";
        case SweepMode::corrected_quadratic: return "corrected_quadratic";
    }
    return "?";
}

std::string_view to_string(BaselinePolicy policy) {
    return policy == BaselinePolicy::anchored ? "anchored" : "first_principles";
}

SweepMode parse_sweep_mode(std::string_view name) {
    if (name == "rta_fixed_sigma" || name == "rta") return SweepMode::rta_fixed_sigma;
    if (name == "corrected_linear" || name == "lin" || name == "linear") return SweepMode::corrected_linear;
    if (name == "corrected_quadratic" || name == "quad" || name == "quadratic")
        return SweepMode::corrected_quadratic;
    throw ValidationError("unknown sweep mode: " + std::string(name));
}

BaselinePolicy parse_baseline_policy(std::string_view name) {
    if (name == "anchored") return BaselinePolicy::anchored;
    if (name == "first_principles") return BaselinePolicy::first_principles;
    throw ValidationError("unknown baseline policy: " + std::string(name));
}

void SweepSpec::validate(const PhysicalParams& params) const {
    require(r_min_nm > 0.0 && r_min_nm < r_max_nm, "sweep: need 0 < r_min < r_max");
    require(points >= 3, "sweep: at least 3 points are required");
    require(!modes.empty(), "sweep: no modes requested");
    PhysicalParams densest = params;
    densest.mean_separation_nm = r_min_nm;
    occupancy(densest);
}

bool SweepSpec::has(SweepMode mode) const {
    return std::find(modes.begin(), modes.end(), mode) != modes.end();
}

std::vector<double> SweepSpec::separations() const {
    std::vector<double> r(static_cast<std::size_t>(points));
    const double span = r_max_nm / r_min_nm;
    for (int i = 0; i < points; ++i)
        r[static_cast<std::size_t>(i)] = r_min_nm * std::pow(span, static_cast<double>(i) / (points - 1));
    r.front() = r_min_nm;
    r.back() = r_max_nm;
    return r;
}

std::optional<double> SweepRow::column(SweepMode mode) const {
    switch (mode) {
        case SweepMode::rta_fixed_sigma: return tr_rta_us;
        case SweepMode::corrected_linear: return tr_lin_us;
        case SweepMode::corrected_quadratic: return tr_quad_us;
    }
    return std::nullopt;
}

SweepTable sweep_tr(const SweepSpec& spec, const PhysicalParams& params, double sigma_eff) {
    params.validate();
    spec.validate(params);
    require(sigma_eff > 0.0, "sweep: sigma_eff must be positive");

    SweepTable table;
    table.params = params;
    table.spec = spec;
    table.sigma_eff = sigma_eff;

    // nu(0) depends only on sigma_exp and gamma_perp, so the first-principles
    // baseline is evaluated once and carried by the r^6 density factor.
    double baseline_at_anchor = params.baseline_anchor_us;
    if (spec.baseline == BaselinePolicy::first_principles) {
        PhysicalParams at_anchor = params;
        at_anchor.mean_separation_nm = params.anchor_separation_nm;
        baseline_at_anchor = rta_baseline(at_anchor).computed_us;
    }

    for (const double r : spec.separations()) {
        PhysicalParams p = params;
        p.mean_separation_nm = r;
        const double gamma = gamma_ising(p, sigma_eff);
        const double rta = baseline_at_anchor * std::pow(r / params.anchor_separation_nm, 6);

        SweepRow row;
        row.r_nm = r;
        row.gamma_ising_mhz = angular_to_mhz(gamma);
        if (spec.has(SweepMode::rta_fixed_sigma)) row.tr_rta_us = rta;
        if (spec.has(SweepMode::corrected_linear))
            row.tr_lin_us = corrected_tr(rta, gamma, params.sigma_exp, ScalingMode::linear).t_r_corrected_us;
        if (spec.has(SweepMode::corrected_quadratic))
            row.tr_quad_us = corrected_tr(rta, gamma, params.sigma_exp, ScalingMode::quadratic).t_r_corrected_us;
        table.rows.push_back(row);
    }
    return table;
}

ExponentFit fit_power_law(std::span<const double> x, std::span<const double> y) {
    require(x.size() == y.size(), "fit: x and y differ in length");
    require(x.size() >= 3, "fit: at least 3 points are required");
    const auto n = static_cast<Eigen::Index>(x.size());
    Eigen::MatrixX2d design(n, 2);
    Eigen::VectorXd rhs(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        require(x[k] > 0.0 && y[k] > 0.0, "fit: values must be positive");
        design(i, 0) = std::log(x[k]);
        design(i, 1) = 1.0;
        rhs(i) = std::log(y[k]);
    }
    require((rhs.array() != rhs(0)).any(), "fit: degenerate (constant) column");
    require((design.col(0).array() != design(0, 0)).any(), "fit: degenerate abscissae");

    const Eigen::Vector2d coef = design.colPivHouseholderQr().solve(rhs);
    ExponentFit fit;
    fit.slope = coef(0);
    fit.intercept = coef(1);
    fit.max_residual = (design * coef - rhs).cwiseAbs().maxCoeff();
    fit.points = x.size();
    return fit;
}

ExponentFit fit_exponent(const SweepTable& table, SweepMode mode) {
    std::vector<double> x, y;
    for (const auto& row : table.rows) {
        const auto v = row.column(mode);
        require(v.has_value(), "fit: column " + std::string(to_string(mode)) + " is not in the table");
        x.push_back(row.r_nm);
        y.push_back(*v);
    }
    return fit_power_law(x, y);
}

}  // namespace nvbroad
