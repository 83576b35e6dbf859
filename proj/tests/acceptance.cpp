// Acceptance suite: one line per criterion, non-zero exit if any fails.

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "nvbroad/cli.hpp"
#include "nvbroad/lineshape.hpp"
#include "nvbroad/moments.hpp"
#include "nvbroad/quadrature.hpp"
#include "nvbroad/relaxation.hpp"
#include "nvbroad/units.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace nvbroad;
using nvbroad::json;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome invoke(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

json invoke_json(std::vector<std::string> args, int* code = nullptr) {
    args.push_back("--format");
    args.push_back("json");
    const auto r = invoke(args);
    if (code) *code = r.code;
    return json::parse(r.out);
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), {}};
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

int failures = 0;

void report(int id, bool pass, const std::string& title, const std::string& detail) {
    if (!pass) ++failures;
    fmt::print("[{}] AC{:<2} {}: {}\n", pass ? "PASS" : "FAIL", id, title, detail);
    std::fflush(stdout);
}

void ac1_sigma_eff() {
    const auto t0 = std::chrono::steady_clock::now();
    int code = 0;
    const auto j = invoke_json({"sigma-eff", "--cutoff", "50"}, &code);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const double s = j["result"]["sigma_eff"].get<double>();
    const double tail = j["result"]["relative_tail_bound"].get<double>();
    const bool value_ok = rel(s, 517.4) <= 0.01;
    const bool tail_ok = tail < 1e-3;
    report(1, value_ok && tail_ok && secs < 10.0 && code == 0, "lattice sum, default axis, cutoff 50 a",
           fmt::format("sigma_eff = {:.4f} (target 517.4 +-1%: {}), relative tail {:.2e} (<1e-3: {}), {:.2f} s, "
                       "isotropic average {:.4f}",
                       s, value_ok ? "ok" : "off by " + fmt::format("{:+.1f}%", 100 * (s / 517.4 - 1)), tail,
                       tail_ok ? "ok" : "no", secs, j["result"]["isotropic_average"].get<double>()));
}

void ac2_gamma() {
    const auto j = invoke_json({"gamma"});
    const double g = j["gamma_ising_MHz"].get<double>();
    report(2, rel(g, 43.2) <= 0.02, "Gamma_Ising at defaults, in-run lattice sum",
           fmt::format("Gamma_Ising = {:.4f} MHz (target 43.2 +-2%) from sigma_eff = {:.4f}", g,
                       j["sigma_eff"]["sigma_eff"].get<double>()));
}

void ac3_monte_carlo() {
    int code = 0;
    const auto j = invoke_json({"mc-validate", "--realizations", "2000000", "--mc-cutoff", "20"}, &code);
    const auto& mc = j["random_occupancy"];
    const auto& full = j["full_occupancy"];
    const bool stat = mc["within_3_sigma"].get<bool>();
    const bool degenerate = full["relative_difference"].get<double>() <= 1e-9;
    report(3, stat && degenerate && code == 0, "Monte Carlo second moment",
           fmt::format("analytic {:.3f} MHz^2 vs MC {:.3f} +- {:.3f} (z = {:.2f}); c = 1 relative difference {:.2e}",
                       mc["M2_analytic_MHz2"].get<double>(), mc["M2_mean_MHz2"].get<double>(),
                       mc["M2_stderr_MHz2"].get<double>(), mc["z_score"].get<double>(),
                       full["relative_difference"].get<double>()));
}

json relax_report() {
    static const json j = invoke_json({"relax"});
    return j;
}

double find_result(const json& j, const std::string& baseline, const std::string& mode) {
    for (const auto& r : j["results"])
        if (r["baseline"] == baseline && r["mode"] == mode) return r["t_r_corrected_us"].get<double>();
    return NAN;
}

void ac4_baseline() {
    const auto j = relax_report();
    const double anchored = j["baseline"]["anchored_us"].get<double>();
    const double fp = j["baseline"]["first_principles_us"].get<double>();
    const bool ok = anchored == 1.14 && std::isfinite(fp) && fp > 0.0;
    report(4, ok, "baseline relaxation time",
           fmt::format("anchored {:.4f} us; RTA rate recomputation {:.4f} us (ratio to 1.14 us: {:.4f}, reported only)",
                       anchored, fp, j["baseline"]["ratio_to_anchor"].get<double>()));
}

void ac5_headline() {
    const auto j = relax_report();
    const double ratio = j["ratio"].get<double>();
    const double lin = find_result(j, "anchored", "linear");
    const bool self = rel(lin, 1.14 * ratio) <= 5e-3;
    const bool headline = rel(lin, 13.41) <= 5e-3;
    const double rounded = corrected_tr(1.14, mhz_to_angular(43.2), mhz_to_angular(3.67), ScalingMode::linear)
                               .t_r_corrected_us;
    const bool rounded_ok = rel(rounded, 13.41) <= 5e-3;
    report(5, self && headline && rounded_ok, "anchored linear relaxation time",
           fmt::format("{:.4f} us = 1.14 x {:.4f} ({}); vs 13.41 us +-0.5%: {}; rounded inputs (43.2, 3.67) give {:.4f} us ({})",
                       lin, ratio, self ? "consistent" : "inconsistent",
                       headline ? "ok" : fmt::format("off by {:+.1f}%", 100 * (lin / 13.41 - 1)), rounded,
                       rounded_ok ? "ok" : "no"));
}

void ac6_quadratic() {
    const auto j = relax_report();
    const double ratio = j["ratio"].get<double>();
    const double quad = find_result(j, "anchored", "quadratic");
    const bool self = rel(quad, 1.14 * ratio * ratio) <= 1e-2;
    const bool order = rel(quad, 150.0) <= 0.1;
    report(6, self && order, "anchored quadratic relaxation time",
           fmt::format("{:.3f} us = 1.14 x {:.4f}^2 ({}); vs ~150 us +-10%: {}", quad, ratio,
                       self ? "consistent" : "inconsistent",
                       order ? "ok" : fmt::format("off by {:+.1f}%", 100 * (quad / 150.0 - 1))));
}

void ac7_overlap() {
    const double g = mhz_to_angular(0.179);
    const double G = mhz_to_angular(43.2);
    const double strong = overlap_j({g, G});
    const double limit = 1.0 / (2.0 * std::sqrt(std::numbers::pi) * G);
    const double lor = overlap_j({g, 0.0});
    const double lor_exact = 1.0 / (2.0 * std::numbers::pi * g);
    const bool ok = rel(strong, limit) <= 1e-2 && rel(lor, lor_exact) <= 1e-6;
    report(7, ok, "squared spectral overlap",
           fmt::format("strong disorder {:.6e} vs 1/(2 sqrt(pi) Gamma) {:.6e} (rel {:.2e}); Lorentzian rel {:.1e}",
                       strong, limit, rel(strong, limit), rel(lor, lor_exact)));
}

void ac8_normalisation() {
    const double g = mhz_to_angular(0.179);
    const double s = mhz_to_angular(3.67);
    const quad::Options opts{.rel_tol = 1e-12};
    const double nl = oracle::integrate_real_line([&](double w) { return lorentzian(w, g); });
    const double ng = oracle::integrate_real_line([&](double w) { return gaussian(w, s); });
    const double nv = quad::integrate_real_line([&](double w) { return voigt(w, {g, s}); }, s, opts).value;
    double worst_limit = 0.0;
    for (double w : {0.0, s, 3.0 * s}) {
        worst_limit = std::max(worst_limit, rel(voigt(w, {1e-7 * s, s}), gaussian(w, s)));
        worst_limit = std::max(worst_limit, rel(voigt(w, {s, 1e-7 * s}), lorentzian(w, s)));
    }
    const double worst_norm = std::max({std::abs(nl - 1), std::abs(ng - 1), std::abs(nv - 1)});
    report(8, worst_norm <= 1e-6 && worst_limit <= 1e-4, "line-shape normalisation and limits",
           fmt::format("|integral - 1| <= {:.1e}; worst Voigt limit deviation {:.1e}", worst_norm, worst_limit));
}

void ac9_exponents() {
    const auto r = invoke({"sweep", "--r-min", "4", "--r-max", "16", "--points", "16", "--format", "json"});
    const auto j = json::parse(r.out);
    const auto& fits = j["metadata"]["fits"];
    const double rta = fits["rta_fixed_sigma"]["slope"].get<double>();
    const double quad = fits["corrected_quadratic"]["slope"].get<double>();
    const double lin = fits["corrected_linear"]["slope"].get<double>();
    const bool warned = j["metadata"]["warnings"].size() == 1 && r.err.find("warning") != std::string::npos;
    const bool ok = std::abs(rta - 6) <= 0.01 && std::abs(quad - 3) <= 0.01 && std::abs(lin - 4.5) <= 0.01 && warned;
    report(9, ok, "sweep exponents",
           fmt::format("rta {:.4f}, corrected_quadratic {:.4f}, corrected_linear {:.4f}; linear-vs-r^3 warning {}",
                       rta, quad, lin, warned ? "emitted" : "missing"));
}

void ac10_units() {
    const double sigma = fwhm_to_sigma(8.65);
    PhysicalParams p;
    const double c = occupancy(p);
    const bool ok = std::abs(sigma - 3.673) <= 1e-3 && std::abs(c - 1.111e-5) <= 1e-8;
    report(10, ok, "unit conversions", fmt::format("sigma(8.65 MHz FWHM) = {:.5f} MHz; c(8 nm) = {:.6e}", sigma, c));
}

void ac11_determinism() {
    const fs::path dir = fs::temp_directory_path() / "nvbroad_acceptance";
    fs::create_directories(dir);
    const auto a = (dir / "run_a").string();
    const auto b = (dir / "run_b").string();
    const std::vector<std::string> common{"sweep", "--svg", "--seed", "42"};
    auto with = [&](std::vector<std::string> extra) {
        auto args = common;
        args.insert(args.end(), extra.begin(), extra.end());
        return args;
    };
    invoke(with({"--threads", "1", "--out", a}));
    invoke(with({"--threads", "4", "--out", b}));
    bool same = true;
    for (const char* ext : {".csv", ".json", ".svg"}) same = same && slurp(a + ext) == slurp(b + ext);
    const std::vector<std::string> mc{"mc-validate", "--seed", "42", "--realizations", "500000", "--format", "json"};
    auto m1 = mc, m2 = mc;
    m1.insert(m1.end(), {"--threads", "1"});
    m2.insert(m2.end(), {"--threads", "4"});
    const bool mc_same = invoke(m1).out == invoke(m2).out;
    const bool json_same = invoke({"relax", "--format", "json", "--threads", "1"}).out ==
                           invoke({"relax", "--format", "json", "--threads", "3"}).out;
    report(11, same && mc_same && json_same, "determinism",
           fmt::format("sweep CSV/JSON/SVG {}; mc-validate JSON {}; relax JSON {} (1 vs 3-4 workers)",
                       same ? "identical" : "differ", mc_same ? "identical" : "differ",
                       json_same ? "identical" : "differ"));
}

}  // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();
    ac1_sigma_eff();
    ac2_gamma();
    ac3_monte_carlo();
    ac4_baseline();
    ac5_headline();
    ac6_quadratic();
    ac7_overlap();
    ac8_normalisation();
    ac9_exponents();
    ac10_units();
    ac11_determinism();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    fmt::print("{} of 11 criteria passed ({:.1f} s)\n", 11 - failures, secs);
    return failures == 0 ? 0 : 1;
}
