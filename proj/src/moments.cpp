#include "nvbroad/moments.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "nvbroad/errors.hpp"
#include "nvbroad/parallel.hpp"

namespace nvbroad {

void PhysicalParams::validate() const {
    require(j0 > 0.0, "J0 must be positive");
    require(gamma_perp > 0.0, "gamma_perp must be positive");
    require(lattice_constant_nm > 0.0, "lattice constant must be positive");
    require(xi_sq > 0.0, "xi^2 must be positive");
    require(mean_separation_nm > 0.0, "mean separation must be positive");
    require(sigma_exp > 0.0, "sigma_exp must be positive");
    require(baseline_anchor_us > 0.0 && anchor_separation_nm > 0.0, "baseline anchor must be positive");
    occupancy(*this);
}

namespace {

struct SlabSum {
    CompensatedSum<> weighted;
    CompensatedSum<> radial;
    Eigen::Index count = 0;
};

double term(const Eigen::Vector3d& u, const Eigen::Vector3d& axis) {
    const double n2 = u.squaredNorm();
    const double g = angular_factor(u, axis);
    return g * g / (n2 * n2 * n2);
}

}  // namespace

double lattice_sum_tail_bound(double cutoff) {
    // (1 - 3cos^2)^2 <= 4 times 8 sites per unit cell, integrated from one
    // nearest-neighbour distance inside the cutoff.
    const double inner = cutoff - nearest_neighbour_distance;
    if (inner <= 0.0) return std::numeric_limits<double>::infinity();
    return 128.0 * std::numbers::pi / (3.0 * inner * inner * inner);
}

GeometricSumResult sigma_eff(const LatticeSpec& spec, unsigned workers) {
    spec.validate();
    const int h = cell_half_width(spec.cutoff_radius);
    const Eigen::Vector3d axis = spec.quantization_axis;
    const auto slabs = parallel_chunks<SlabSum>(
        static_cast<std::size_t>(2 * h + 1), workers, [&](std::size_t idx) {
            SlabSum s;
            for_each_site_in_slab(spec.cutoff_radius, static_cast<int>(idx) - h,
                                  [&](const Eigen::Vector3d& u) {
                                      s.weighted.add(term(u, axis));
                                      const double n2 = u.squaredNorm();
                                      s.radial.add(1.0 / (n2 * n2 * n2));
                                      ++s.count;
                                  });
            return s;
        });
    SlabSum total;
    for (const auto& s : slabs) {
        total.weighted.add(s.weighted);
        total.radial.add(s.radial);
        total.count += s.count;
    }
    if (total.count == 0) throw ValidationError("sigma_eff: empty site set");
    GeometricSumResult out;
    out.sigma_eff = total.weighted.value();
    out.radial_sum = total.radial.value();
    out.cutoff_used = spec.cutoff_radius;
    out.tail_estimate = lattice_sum_tail_bound(spec.cutoff_radius);
    out.site_count = total.count;
    return out;
}

double lattice_sum(const Eigen::Ref<const Eigen::Matrix3Xd>& sites, const Eigen::Vector3d& axis) {
    require(sites.cols() > 0, "lattice_sum: empty site set");
    CompensatedSum<> acc;
    for (Eigen::Index i = 0; i < sites.cols(); ++i) acc.add(term(sites.col(i), axis));
    return acc.value();
}

double occupancy(const PhysicalParams& params) {
    require(params.mean_separation_nm > 0.0 && params.lattice_constant_nm > 0.0,
            "occupancy: lengths must be positive");
    const double ratio = params.lattice_constant_nm / params.mean_separation_nm;
    const double c = ratio * ratio * ratio / 8.0;
    require(c <= 1.0, "occupancy exceeds 1: density is above the lattice-site density");
    return c;
}

double second_moment(const PhysicalParams& params, double sigma_eff) {
    require(sigma_eff > 0.0, "sigma_eff must be positive");
    const double a3 = std::pow(params.lattice_constant_nm, 3);
    return occupancy(params) * params.j0 * params.j0 * sigma_eff / (4.0 * a3 * a3);
}

double gamma_ising(const PhysicalParams& params, double sigma_eff) {
    require(sigma_eff > 0.0, "sigma_eff must be positive");
    const double ar = params.lattice_constant_nm * params.mean_separation_nm;
    return std::sqrt(sigma_eff / 32.0) * params.j0 / std::pow(ar, 1.5);
}

void MCConfig::validate() const {
    require(realizations >= 1, "MC: at least one realization is required");
    require(cutoff_radius >= nearest_neighbour_distance, "MC: cutoff below nearest-neighbour distance");
    if (occupancy_c) require(*occupancy_c > 0.0 && *occupancy_c <= 1.0, "MC: occupancy must lie in (0, 1]");
}

namespace {

// SplitMix64 finaliser; maps (seed, index) to a stream key.
std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// SplitMix64 sequence; one stream per realization index.
class Stream {
public:
    explicit Stream(std::uint64_t key) : state_(key) {}
    std::uint64_t operator()() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t x = state_;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

private:
    std::uint64_t state_;
};

// Uniform on (0, 1].
double open_unit(Stream& eng) {
    return (static_cast<double>(eng() >> 11) + 1.0) * 0x1.0p-53;
}

struct ChunkStats {
    CompensatedSum<> m;
    // Welford running moments, merged across chunks with Chan's update so the
    // spread survives the large common offset of the per-realization values.
    double count = 0.0;
    double running_mean = 0.0;
    double squared_dev = 0.0;
    CompensatedSum<> h2;
    CompensatedSum<> h4;
    double occupied = 0.0;
};

constexpr std::uint64_t realizations_per_chunk = 4096;

}  // namespace

MCResult mc_second_moment(const LatticeSpec& spec, const PhysicalParams& params, const MCConfig& cfg) {
    cfg.validate();
    LatticeSpec env = spec;
    env.cutoff_radius = cfg.cutoff_radius;
    const SiteSet sites = generate_sites(env);
    const auto n_sites = static_cast<std::size_t>(sites.count());

    std::vector<double> q(n_sites);
    for (std::size_t i = 0; i < n_sites; ++i) {
        const Eigen::Vector3d r_nm = sites.displacements.col(static_cast<Eigen::Index>(i)) *
                                     params.lattice_constant_nm;
        q[i] = coupling_q(r_nm, env.quantization_axis, params.j0);
    }

    const double c = cfg.occupancy_c.value_or(occupancy(params));
    const bool full = c >= 1.0;
    const double log_keep = full ? 0.0 : std::log1p(-c);

    const std::uint64_t chunks = (cfg.realizations + realizations_per_chunk - 1) / realizations_per_chunk;
    const auto stats = parallel_chunks<ChunkStats>(chunks, cfg.workers, [&](std::size_t chunk) {
        ChunkStats s;
        const std::uint64_t begin = chunk * realizations_per_chunk;
        const std::uint64_t end = std::min(cfg.realizations, begin + realizations_per_chunk);
        for (std::uint64_t idx = begin; idx < end; ++idx) {
            Stream eng(mix64(cfg.rng_seed ^ mix64(idx)));
            CompensatedSum<> m2;
            CompensatedSum<> field;
            std::size_t occupied = 0;
            auto occupy = [&](std::size_t site) {
                m2.add(0.25 * q[site] * q[site]);
                field.add((eng() & 1ULL) ? 0.5 * q[site] : -0.5 * q[site]);
                ++occupied;
            };
            if (full) {
                for (std::size_t i = 0; i < n_sites; ++i) occupy(i);
            } else {
                // Geometric gaps between occupied sites reproduce independent
                // Bernoulli(c) occupation at O(c N) cost.
                double pos = -1.0;
                for (;;) {
                    pos += 1.0 + std::floor(std::log(open_unit(eng)) / log_keep);
                    if (!(pos < static_cast<double>(n_sites))) break;
                    occupy(static_cast<std::size_t>(pos));
                }
            }
            const double m = m2.value();
            const double h = field.value();
            s.m.add(m);
            s.count += 1.0;
            const double delta = m - s.running_mean;
            s.running_mean += delta / s.count;
            s.squared_dev += delta * (m - s.running_mean);
            s.h2.add(h * h);
            s.h4.add(h * h * h * h);
            s.occupied += static_cast<double>(occupied);
        }
        return s;
    });

    ChunkStats total;
    for (const auto& s : stats) {
        total.m.add(s.m);
        if (s.count > 0.0) {
            const double merged = total.count + s.count;
            const double delta = s.running_mean - total.running_mean;
            total.squared_dev += s.squared_dev + delta * delta * total.count * s.count / merged;
            total.running_mean += delta * s.count / merged;
            total.count = merged;
        }
        total.h2.add(s.h2);
        total.h4.add(s.h4);
        total.occupied += s.occupied;
    }

    const auto n = static_cast<double>(cfg.realizations);
    MCResult out;
    out.realizations = cfg.realizations;
    out.site_count = sites.count();
    out.occupancy_c = c;
    out.mean = total.m.value() / n;
    out.mean_occupied = total.occupied / n;
    if (cfg.realizations > 1) {
        const double var = total.squared_dev / (n - 1.0);
        out.standard_error = std::sqrt(var / n);
    }
    const double eh2 = total.h2.value() / n;
    const double eh4 = total.h4.value() / n;
    out.local_field_excess_kurtosis = eh2 > 0.0 ? eh4 / (eh2 * eh2) - 3.0 : 0.0;
    return out;
}

}  // namespace nvbroad
