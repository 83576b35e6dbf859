#pragma once

#include <json.hpp>

#include <map>
#include <string>

#include "nvbroad/lattice.hpp"
#include "nvbroad/moments.hpp"
#include "nvbroad/sweep.hpp"

namespace nvbroad {

using json = nlohmann::ordered_json;

/// Experimental relaxation time marked on the chart, at the anchor separation.
inline constexpr double experimental_tr_us = 11.6;

/// Physical parameters as user-facing values (frequencies in MHz = w/2pi).
json to_json(const PhysicalParams& params);
json to_json(const LatticeSpec& spec);
json to_json(const GeometricSumResult& result);
json to_json(const MCResult& result);
json to_json(const ExponentFit& fit);

/// CSV with header `r_nm,gamma_ising_mhz,tr_rta_us,tr_lin_us,tr_quad_us`.
/// Modes absent from the table leave empty cells.
std::string sweep_csv(const SweepTable& table);

json sweep_json(const SweepTable& table, const std::map<SweepMode, ExponentFit>& fits,
                const json& config, const json& warnings);

/// Static log-log chart of the sweep with the experimental point marked.
std::string sweep_svg(const SweepTable& table);

}  // namespace nvbroad
