#pragma once

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nvbroad/moments.hpp"

namespace nvbroad {

enum class SweepMode { rta_fixed_sigma, corrected_linear, corrected_quadratic };
enum class BaselinePolicy { anchored, first_principles };

std::string_view to_string(SweepMode mode);
std::string_view to_string(BaselinePolicy policy);
SweepMode parse_sweep_mode(std::string_view name);
BaselinePolicy parse_baseline_policy(std::string_view name);

struct SweepSpec {
    double r_min_nm = 4.0;
    double r_max_nm = 16.0;
    int points = 16;
    std::vector<SweepMode> modes{SweepMode::rta_fixed_sigma, SweepMode::corrected_linear,
                                 SweepMode::corrected_quadratic};
    BaselinePolicy baseline = BaselinePolicy::anchored;

    void validate(const PhysicalParams& params) const;
    bool has(SweepMode mode) const;
    /// Logarithmically spaced separations; endpoints are exact.
    std::vector<double> separations() const;
};

struct SweepRow {
    double r_nm = 0.0;
    double gamma_ising_mhz = 0.0;
    std::optional<double> tr_rta_us;
    std::optional<double> tr_lin_us;
    std::optional<double> tr_quad_us;

    std::optional<double> column(SweepMode mode) const;
};

struct SweepTable {
    std::vector<SweepRow> rows;
    PhysicalParams params;
    SweepSpec spec;
    double sigma_eff = 0.0;
    std::optional<std::string> timestamp;
};

/// Relaxation time against mean separation. Gamma_Ising is recomputed at
/// every r from `sigma_eff`; sigma_exp is held fixed. Under the anchored
/// policy the RTA curve passes through (anchor_separation, baseline_anchor)
/// and scales as r^6.
SweepTable sweep_tr(const SweepSpec& spec, const PhysicalParams& params, double sigma_eff);

struct ExponentFit {
    double slope = 0.0;
    double intercept = 0.0;     ///< natural-log intercept
    double max_residual = 0.0;  ///< max |log y - fit| over the points
    std::size_t points = 0;
};

/// Least-squares line through (log x, log y).
ExponentFit fit_power_law(std::span<const double> x, std::span<const double> y);

/// Fits the requested column of `table`; throws if the column is absent.
ExponentFit fit_exponent(const SweepTable& table, SweepMode mode);

}  // namespace nvbroad
