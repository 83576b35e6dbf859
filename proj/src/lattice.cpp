#include "nvbroad/lattice.hpp"

#include <vector>

namespace nvbroad {

void LatticeSpec::validate() const {
    require(lattice_constant_nm > 0.0, "lattice constant must be positive");
    require(cutoff_radius >= nearest_neighbour_distance,
            "cutoff radius is below the nearest-neighbour distance; the site set would be empty");
    require(std::abs(quantization_axis.norm() - 1.0) <= 1e-12,
            "quantization axis must have unit norm");
}

const std::array<Eigen::Vector3d, 8>& diamond_basis() {
    static const std::array<Eigen::Vector3d, 8> basis = [] {
        const std::array<Eigen::Vector3d, 4> fcc = {
            Eigen::Vector3d(0.0, 0.0, 0.0), Eigen::Vector3d(0.0, 0.5, 0.5),
            Eigen::Vector3d(0.5, 0.0, 0.5), Eigen::Vector3d(0.5, 0.5, 0.0)};
        std::array<Eigen::Vector3d, 8> out;
        for (std::size_t i = 0; i < 4; ++i) {
            out[i] = fcc[i];
            out[i + 4] = fcc[i] + Eigen::Vector3d::Constant(0.25);
        }
        return out;
    }();
    return basis;
}

int cell_half_width(double cutoff_radius) {
    return static_cast<int>(std::ceil(cutoff_radius)) + 1;
}

SiteSet generate_sites(const LatticeSpec& spec) {
    spec.validate();
    std::vector<double> flat;
    const int h = cell_half_width(spec.cutoff_radius);
    for (int i = -h; i <= h; ++i) {
        for_each_site_in_slab(spec.cutoff_radius, i, [&](const Eigen::Vector3d& u) {
            flat.insert(flat.end(), {u.x(), u.y(), u.z()});
        });
    }
    SiteSet sites;
    sites.displacements = Eigen::Map<const Eigen::Matrix3Xd>(
        flat.data(), 3, static_cast<Eigen::Index>(flat.size() / 3));
    return sites;
}

}  // namespace nvbroad
