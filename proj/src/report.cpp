#include "nvbroad/report.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "nvbroad/units.hpp"

namespace nvbroad {

json to_json(const PhysicalParams& p) {
    return {
        {"J0_MHz_nm3", angular_to_mhz(p.j0)},
        {"gamma_perp_MHz", angular_to_mhz(p.gamma_perp)},
        {"lattice_constant_nm", p.lattice_constant_nm},
        {"xi_sq", p.xi_sq},
        {"mean_separation_nm", p.mean_separation_nm},
        {"sigma_exp_MHz", angular_to_mhz(p.sigma_exp)},
        {"baseline_anchor_us", p.baseline_anchor_us},
        {"anchor_separation_nm", p.anchor_separation_nm},
    };
}

json to_json(const LatticeSpec& s) {
    return {
        {"lattice_constant_nm", s.lattice_constant_nm},
        {"cutoff_radius_a", s.cutoff_radius},
        {"quantization_axis", {s.quantization_axis.x(), s.quantization_axis.y(), s.quantization_axis.z()}},
    };
}

json to_json(const GeometricSumResult& r) {
    return {
        {"sigma_eff", r.sigma_eff},
        {"cutoff_a", r.cutoff_used},
        {"tail_bound", r.tail_estimate},
        {"relative_tail_bound", r.relative_tail()},
        {"site_count", r.site_count},
        {"radial_sum_u6", r.radial_sum},
        {"isotropic_average", 0.8 * r.radial_sum},
    };
}

json to_json(const MCResult& r) {
    return {
        {"M2_mean_MHz2", r.mean / (two_pi * two_pi)},
        {"M2_stderr_MHz2", r.standard_error / (two_pi * two_pi)},
        {"occupancy_c", r.occupancy_c},
        {"realizations", r.realizations},
        {"site_count", r.site_count},
        {"mean_occupied_sites", r.mean_occupied},
        {"local_field_excess_kurtosis", r.local_field_excess_kurtosis},
    };
}

json to_json(const ExponentFit& f) {
    return {{"slope", f.slope}, {"intercept_ln", f.intercept}, {"max_residual", f.max_residual},
            {"points", f.points}};
}

namespace {

std::string cell(const std::optional<double>& v) {
    return v ? fmt::format("{:.12g}", *v) : std::string();
}

json nullable(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

std::string sweep_csv(const SweepTable& table) {
    std::string out = "r_nm,gamma_ising_mhz,tr_rta_us,tr_lin_us,tr_quad_us\n";
    for (const auto& row : table.rows) {
        out += fmt::format("{:.12g},{:.12g},{},{},{}\n", row.r_nm, row.gamma_ising_mhz, cell(row.tr_rta_us),
                           cell(row.tr_lin_us), cell(row.tr_quad_us));
    }
    return out;
}

json sweep_json(const SweepTable& table, const std::map<SweepMode, ExponentFit>& fits,
                const json& config, const json& warnings) {
    json fit_json = json::object();
    for (const auto& [mode, fit] : fits) fit_json[std::string(to_string(mode))] = to_json(fit);
    json modes = json::array();
    for (auto m : table.spec.modes) modes.push_back(std::string(to_string(m)));

    json rows = json::array();
    for (const auto& row : table.rows) {
        rows.push_back({{"r_nm", row.r_nm},
                        {"gamma_ising_mhz", row.gamma_ising_mhz},
                        {"tr_rta_us", nullable(row.tr_rta_us)},
                        {"tr_lin_us", nullable(row.tr_lin_us)},
                        {"tr_quad_us", nullable(row.tr_quad_us)}});
    }
    return {
        {"metadata",
         {{"config", config},
          {"params", to_json(table.params)},
          {"sigma_eff", table.sigma_eff},
          {"baseline_policy", std::string(to_string(table.spec.baseline))},
          {"modes", modes},
          {"timestamp", table.timestamp ? json(*table.timestamp) : json(nullptr)},
          {"fits", fit_json},
          {"warnings", warnings}}},
        {"rows", rows},
    };
}

namespace {

struct Axis {
    double lo, hi;        // log10 range
    double px0, px1;      // pixel range
    double map(double v) const { return px0 + (std::log10(v) - lo) / (hi - lo) * (px1 - px0); }
};

std::vector<double> ticks_125(double lo, double hi) {
    std::vector<double> t;
    for (int e = static_cast<int>(std::floor(lo)); e <= static_cast<int>(std::ceil(hi)); ++e) {
        for (double m : {1.0, 2.0, 5.0}) {
            const double v = m * std::pow(10.0, e);
            const double lv = std::log10(v);
            if (lv >= lo - 1e-12 && lv <= hi + 1e-12) t.push_back(v);
        }
    }
    return t;
}

}  // namespace

std::string sweep_svg(const SweepTable& table) {
    constexpr double width = 720, height = 480;
    constexpr double left = 80, right = 30, top = 40, bottom = 60;

    double ymin = experimental_tr_us, ymax = experimental_tr_us;
    for (const auto& row : table.rows) {
        for (auto v : {row.tr_rta_us, row.tr_lin_us, row.tr_quad_us}) {
            if (!v) continue;
            ymin = std::min(ymin, *v);
            ymax = std::max(ymax, *v);
        }
    }
    const Axis xa{std::log10(table.rows.front().r_nm), std::log10(table.rows.back().r_nm), left, width - right};
    const Axis ya{std::floor(std::log10(ymin)), std::ceil(std::log10(ymax)), height - bottom, top};

    std::string svg = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n"
        "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
        width, height);
    svg += fmt::format(
        "<g stroke=\"black\" fill=\"none\"><rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\"/></g>\n",
        left, top, width - left - right, height - top - bottom);

    svg += "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"black\">\n";
    for (double t : ticks_125(xa.lo, xa.hi)) {
        const double x = xa.map(t);
        svg += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"black\"/>"
                           "<text x=\"{0:.2f}\" y=\"{3:.2f}\" text-anchor=\"middle\">{4:g}</text>\n",
                           x, height - bottom, height - bottom + 6, height - bottom + 20, t);
    }
    for (int e = static_cast<int>(ya.lo); e <= static_cast<int>(ya.hi); ++e) {
        const double y = ya.map(std::pow(10.0, e));
        svg += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\" stroke=\"black\"/>"
                           "<text x=\"{3:.2f}\" y=\"{4:.2f}\" text-anchor=\"end\">1e{5}</text>\n",
                           left - 6, y, left, left - 10, y + 4, e);
    }
    svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">mean separation r (nm)</text>\n",
                       0.5 * (left + width - right), height - 15);
    svg += fmt::format("<text x=\"20\" y=\"{0:.2f}\" text-anchor=\"middle\" transform=\"rotate(-90 20 {0:.2f})\">"
                       "relaxation time T_r (us)</text>\n",
                       0.5 * (top + height - bottom));
    svg += "</g>\n";

    struct Curve {
        SweepMode mode;
        const char* style;
        const char* label;
    };
    const Curve curves[] = {
        {SweepMode::rta_fixed_sigma, "stroke=\"#1f77b4\" stroke-dasharray=\"8 5\"", "RTA, fixed sigma_exp (r^6)"},
        {SweepMode::corrected_quadratic, "stroke=\"#d62728\"", "Ising-corrected, quadratic (r^3)"},
        {SweepMode::corrected_linear, "stroke=\"#2ca02c\" stroke-dasharray=\"2 3\"", "Ising-corrected, linear (r^4.5)"},
    };
    int legend_row = 0;
    for (const auto& c : curves) {
        if (!table.spec.has(c.mode)) continue;
        std::string points;
        for (const auto& row : table.rows) {
            const auto v = row.column(c.mode);
            points += fmt::format("{:.2f},{:.2f} ", xa.map(row.r_nm), ya.map(*v));
        }
        if (!points.empty()) points.pop_back();
        svg += fmt::format("<polyline fill=\"none\" stroke-width=\"2\" {} points=\"{}\"/>\n", c.style, points);
        const double ly = top + 18 + 18 * legend_row++;
        svg += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\" stroke-width=\"2\" {3}/>"
                           "<text x=\"{4:.2f}\" y=\"{5:.2f}\" font-family=\"sans-serif\" font-size=\"12\">{6}</text>\n",
                           left + 12, ly, left + 42, c.style, left + 48, ly + 4, c.label);
    }
    const double mx = xa.map(table.params.anchor_separation_nm);
    const double my = ya.map(experimental_tr_us);
    svg += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"6\" fill=\"none\" stroke=\"black\" stroke-width=\"2\"/>\n",
                       mx, my);
    svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-family=\"sans-serif\" font-size=\"12\">experiment "
                       "({:g} nm, {:g} us)</text>\n",
                       mx + 10, my - 8, table.params.anchor_separation_nm, experimental_tr_us);
    svg += "</svg>\n";
    return svg;
}

}  // namespace nvbroad
