#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "nvbroad/cli.hpp"

namespace fs = std::filesystem;
using nvbroad::json;
using namespace nvbroad::cli;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run invoke(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "nvbroad_cli_tests";
    fs::create_directories(dir);
    return dir / name;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), {}};
}

}  // namespace

TEST_CASE("axis parsing") {
    CHECK(parse_axis("0,0,2").isApprox(Eigen::Vector3d::UnitZ()));
    CHECK(parse_axis("1, 1, 1").norm() == doctest::Approx(1.0));
    CHECK_THROWS(parse_axis("1,1"));
    CHECK_THROWS(parse_axis("0,0,0"));
    CHECK_THROWS(parse_axis("a,b,c"));
}

TEST_CASE("sigma-eff report and exit codes") {
    auto r = invoke({"sigma-eff", "--cutoff", "20", "--format", "json"});
    CHECK(r.code == success);
    const auto j = json::parse(r.out);
    CHECK(j["command"] == "sigma-eff");
    CHECK(j["converged"] == true);
    CHECK(j["result"]["sigma_eff"].get<double>() > 900.0);

    r = invoke({"sigma-eff", "--cutoff", "0.5", "--format", "json"});
    CHECK(r.code == nonconvergence);
    const auto nn = json::parse(r.out);
    const double u6 = std::pow(3.0 / 16.0, 3);
    CHECK(nn["result"]["sigma_eff"].get<double>() == doctest::Approx((4.0 + 4.0 / 3.0) / u6));
    CHECK(nn["result"]["tail_bound"].get<double>() > 0.0);

    r = invoke({"sigma-eff", "--cutoff", "20", "--axis", "0,0,1"});
    CHECK(r.code == success);
    CHECK(r.out.find("(0.000000, 0.000000, 1.000000)") != std::string::npos);

    CHECK(invoke({"sigma-eff", "--cutoff", "0.3"}).code == validation_error);
    CHECK(invoke({"sigma-eff", "--axis", "0,0,0"}).code == validation_error);
}

TEST_CASE("gamma scales with separation") {
    const auto a = json::parse(invoke({"gamma", "--cutoff", "20", "--format", "json"}).out);
    const auto b = json::parse(invoke({"gamma", "--cutoff", "20", "--r", "16", "--format", "json"}).out);
    CHECK(a["gamma_ising_MHz"].get<double>() ==
          doctest::Approx(2.0 * std::sqrt(2.0) * b["gamma_ising_MHz"].get<double>()).epsilon(1e-12));
    CHECK(a["config"]["physical"]["mean_separation_nm"] == 8.0);
    CHECK(invoke({"gamma", "--r", "0.1"}).code == validation_error);
}

TEST_CASE("gamma with Monte Carlo") {
    const auto r = invoke({"gamma", "--mc", "--realizations", "400000", "--mc-cutoff", "10", "--format", "json"});
    CHECK(r.code == success);
    const auto j = json::parse(r.out);
    CHECK(j["monte_carlo"]["within_3_sigma"] == true);
}

TEST_CASE("relax reports both policies and modes") {
    auto r = invoke({"relax", "--format", "json"});
    CHECK(r.code == success);
    const auto j = json::parse(r.out);
    CHECK(j["results"].size() == 4);
    CHECK(j["baseline"]["anchored_us"] == 1.14);
    CHECK(j["baseline"]["first_principles_us"].get<double>() > 0.0);
    r = invoke({"relax", "--mode", "linear", "--format", "json"});
    CHECK(json::parse(r.out)["results"].size() == 2);
    CHECK(invoke({"relax", "--mode", "cubic"}).code == validation_error);
}

TEST_CASE("config file, flag overrides and unknown keys") {
    const auto cfg = scratch("run.toml");
    {
        std::ofstream f(cfg);
        f << "# test configuration\nr = 16\ncutoff = 20\nfwhm-mhz = 8.65\n";
    }
    auto j = json::parse(invoke({"gamma", "--config", cfg.string(), "--format", "json"}).out);
    CHECK(j["config"]["physical"]["mean_separation_nm"] == 16.0);
    CHECK(j["config"]["lattice"]["cutoff_a"] == 20.0);

    j = json::parse(invoke({"gamma", "--config", cfg.string(), "--r", "8", "--format", "json"}).out);
    CHECK(j["config"]["physical"]["mean_separation_nm"] == 8.0);

    const auto bad = scratch("bad.toml");
    {
        std::ofstream f(bad);
        f << "r = 8\nseperation = 3\n";
    }
    const auto r = invoke({"gamma", "--config", bad.string()});
    CHECK(r.code == validation_error);
    CHECK(invoke({"gamma", "--no-such-flag"}).code == validation_error);
    CHECK(invoke({}).code == validation_error);
    CHECK(invoke({"--help"}).code == success);
}

TEST_CASE("sweep CSV schema and empty cells") {
    const auto stem = scratch("partial").string();
    const auto r = invoke({"sweep", "--cutoff", "20", "--modes", "lin", "--points", "4", "--out", stem});
    CHECK(r.code == success);
    const std::string csv = slurp(stem + ".csv");
    std::istringstream lines(csv);
    std::string header, row;
    std::getline(lines, header);
    CHECK(header == "r_nm,gamma_ising_mhz,tr_rta_us,tr_lin_us,tr_quad_us");
    int rows = 0;
    while (std::getline(lines, row)) {
        ++rows;
        CHECK(row.find(",,") != std::string::npos);  // empty rta cell
        CHECK(row.back() == ',');                     // empty quad cell
    }
    CHECK(rows == 4);
    const auto j = json::parse(slurp(stem + ".json"));
    CHECK(j["rows"][0]["tr_rta_us"].is_null());
    CHECK(j["metadata"]["fits"].contains("corrected_linear"));
    CHECK(j["metadata"]["warnings"].size() == 1);
    CHECK(r.err.find("warning") != std::string::npos);
}

TEST_CASE("sweep single-format output and svg") {
    auto r = invoke({"sweep", "--cutoff", "20", "--format", "csv"});
    CHECK(r.code == success);
    CHECK(r.out.rfind("r_nm,", 0) == 0);
    r = invoke({"sweep", "--cutoff", "20", "--format", "svg"});
    CHECK(r.out.rfind("<svg", 0) == 0);
    CHECK(r.out.find("<circle") != std::string::npos);
    CHECK(r.out.find("experiment (8 nm, 11.6 us)") != std::string::npos);
    CHECK(invoke({"relax", "--format", "csv"}).code == validation_error);
}

TEST_CASE("outputs are byte-identical across runs and worker counts") {
    const auto a = scratch("det_a").string();
    const auto b = scratch("det_b").string();
    CHECK(invoke({"sweep", "--svg", "--threads", "1", "--out", a}).code == success);
    CHECK(invoke({"sweep", "--svg", "--threads", "4", "--out", b}).code == success);
    for (const char* ext : {".csv", ".json", ".svg"}) CHECK(slurp(a + ext) == slurp(b + ext));

    const auto m1 = invoke({"mc-validate", "--realizations", "300000", "--threads", "1", "--format", "json"});
    const auto m2 = invoke({"mc-validate", "--realizations", "300000", "--threads", "3", "--format", "json"});
    CHECK(m1.out == m2.out);
    CHECK(m1.code == success);
}
