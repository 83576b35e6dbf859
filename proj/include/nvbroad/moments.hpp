#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>

#include "nvbroad/lattice.hpp"
#include "nvbroad/lineshape.hpp"
#include "nvbroad/units.hpp"

namespace nvbroad {

/// Physical constants and experimental inputs. Frequencies are angular
/// (rad/us), lengths in nm, times in us.
struct PhysicalParams {
    double j0 = mhz_to_angular(51.9);  ///< dipolar coupling constant, rad/us * nm^3
    double gamma_perp = mhz_to_angular(0.179);
    double lattice_constant_nm = 0.357;
    double xi_sq = 0.397;
    double mean_separation_nm = 8.0;
    double sigma_exp = mhz_to_angular(fwhm_to_sigma(8.65));
    /// Published baseline relaxation time and the separation it refers to.
    double baseline_anchor_us = 1.14;
    double anchor_separation_nm = 8.0;

    void validate() const;
    /// Number density n = r^-3, nm^-3.
    double density() const { return 1.0 / (mean_separation_nm * mean_separation_nm * mean_separation_nm); }
};

struct GeometricSumResult {
    double sigma_eff = 0.0;
    double cutoff_used = 0.0;
    /// Upper bound on the truncated remainder of the sum.
    double tail_estimate = 0.0;
    /// Sum of u^-6 over the same sites; its isotropic angular average is 4/5 of this.
    double radial_sum = 0.0;
    Eigen::Index site_count = 0;

    double relative_tail() const { return tail_estimate / sigma_eff; }
};

/// Sum of (1 - 3 cos^2 theta_u)^2 / u^6 over the diamond lattice within the
/// cutoff. The site set is partitioned into cell slabs and each slab summed
/// with compensation, so the result does not depend on `workers`.
GeometricSumResult sigma_eff(const LatticeSpec& spec, unsigned workers = 0);

/// Same sum over an explicit set of displacements (units of a).
double lattice_sum(const Eigen::Ref<const Eigen::Matrix3Xd>& sites, const Eigen::Vector3d& axis);

/// Bound on the remainder of the lattice sum beyond `cutoff`.
double lattice_sum_tail_bound(double cutoff);

/// Site occupancy c = a^3 / (8 r^3). Throws if the density exceeds the
/// lattice-site density.
double occupancy(const PhysicalParams& params);

/// Van Vleck second moment M2 = c J0^2 Sigma_eff / (4 a^6), angular frequency squared.
double second_moment(const PhysicalParams& params, double sigma_eff);

/// Gamma_Ising = sqrt(Sigma_eff / 32) J0 / (a r)^(3/2), an angular frequency.
double gamma_ising(const PhysicalParams& params, double sigma_eff);

struct MCConfig {
    std::uint64_t realizations = 2'000'000;
    double cutoff_radius = 20.0;
    std::optional<double> occupancy_c;  ///< defaults to occupancy(params)
    std::uint64_t rng_seed = 0x5eed'2026'0001ULL;
    unsigned workers = 0;

    void validate() const;
};

struct MCResult {
    double mean = 0.0;            ///< estimated M2, (rad/us)^2
    double standard_error = 0.0;
    double occupancy_c = 0.0;
    std::uint64_t realizations = 0;
    Eigen::Index site_count = 0;
    double mean_occupied = 0.0;   ///< average number of occupied environment sites
    /// Excess kurtosis of the sampled Ising local field (spins +-1/2 at random).
    /// Zero for a Gaussian distribution; reported only.
    double local_field_excess_kurtosis = 0.0;
};

/// Monte Carlo estimate of M2 for an occupied origin: every environment site
/// is occupied independently with probability c and the realization value is
/// (1/4) sum Q^2 over occupied sites. Each realization draws from its own
/// stream seeded from (rng_seed, index).
MCResult mc_second_moment(const LatticeSpec& spec, const PhysicalParams& params, const MCConfig& cfg);

}  // namespace nvbroad
