#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nvbroad/moments.hpp"
#include "nvbroad/report.hpp"
#include "nvbroad/sweep.hpp"

namespace nvbroad::cli {

enum ExitCode : int { success = 0, validation_error = 1, nonconvergence = 2 };

/// Every user-settable option. Frequencies are ordinary frequencies in MHz;
/// conversion to angular frequency happens in physical().
struct RunConfig {
    double j0_mhz_nm3 = 51.9;
    double gamma_perp_mhz = 0.179;
    double lattice_constant_nm = 0.357;
    double xi_sq = 0.397;
    double r_nm = 8.0;
    double fwhm_mhz = 8.65;
    std::optional<double> sigma_exp_mhz;  ///< overrides the FWHM-derived value
    double baseline_us = 1.14;
    double anchor_r_nm = 8.0;

    double cutoff = 50.0;
    std::string axis = "1,1,1";
    double tail_tol = 1e-3;

    std::uint64_t seed = MCConfig{}.rng_seed;
    std::uint64_t realizations = MCConfig{}.realizations;
    double mc_cutoff = 20.0;
    std::optional<double> occupancy;
    bool mc = false;

    std::string mode = "both";
    double r_min_nm = 4.0;
    double r_max_nm = 16.0;
    int points = 16;
    std::string modes = "rta,lin,quad";
    std::string baseline = "anchored";
    bool svg = false;

    std::string out;
    std::string format;
    unsigned threads = 0;
    std::string timestamp;

    PhysicalParams physical() const;
    LatticeSpec lattice() const;
    MCConfig mc_config() const;
    SweepSpec sweep() const;
    /// Resolved configuration with units, echoed into every JSON report.
    json echo() const;
};

/// Parses "x,y,z" and normalises it.
Eigen::Vector3d parse_axis(const std::string& text);

struct CommandOutput {
    int exit_code = success;
    json report;
    std::string text;
};

CommandOutput cmd_sigma_eff(const RunConfig& cfg);
CommandOutput cmd_gamma(const RunConfig& cfg);
CommandOutput cmd_relax(const RunConfig& cfg);
CommandOutput cmd_mc_validate(const RunConfig& cfg);

struct SweepOutput {
    CommandOutput command;  ///< report holds the sweep JSON document
    SweepTable table;
    std::string csv;
    std::string svg;
};

SweepOutput cmd_sweep(const RunConfig& cfg);

/// Entry point shared by the executable and the tests.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nvbroad::cli
