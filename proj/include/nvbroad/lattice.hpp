#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <cstddef>

#include "nvbroad/errors.hpp"

namespace nvbroad {

/// Nearest-neighbour distance of the diamond lattice in units of a.
inline const double nearest_neighbour_distance = std::sqrt(3.0) / 4.0;

/// Geometry of the host lattice. Displacements are measured in units of the
/// cubic lattice constant; `cutoff_radius` is in the same units.
struct LatticeSpec {
    double lattice_constant_nm = 0.357;
    double cutoff_radius = 50.0;
    Eigen::Vector3d quantization_axis = Eigen::Vector3d::Ones().normalized();

    void validate() const;
};

/// Lattice displacements from an origin site, one per column, in units of a.
/// The origin itself is never included.
struct SiteSet {
    Eigen::Matrix3Xd displacements;

    Eigen::Index count() const { return displacements.cols(); }
};

/// The eight sites of the conventional cubic cell: fcc plus the (1/4,1/4,1/4)
/// basis offset.
const std::array<Eigen::Vector3d, 8>& diamond_basis();

/// Half-width, in conventional cells, of the cube scanned for a cutoff.
int cell_half_width(double cutoff_radius);

/// Visits every site with first cell index `slab` whose distance from the
/// origin lies in (0, cutoff_radius]. Iteration order is fixed: cell index
/// j, then k, then basis site.
template <typename Visitor>
void for_each_site_in_slab(double cutoff_radius, int slab, Visitor&& visit) {
    const int h = cell_half_width(cutoff_radius);
    const double cutoff_sq = cutoff_radius * cutoff_radius;
    const auto& basis = diamond_basis();
    for (int j = -h; j <= h; ++j) {
        for (int k = -h; k <= h; ++k) {
            const Eigen::Vector3d cell(slab, j, k);
            for (const auto& b : basis) {
                const Eigen::Vector3d u = cell + b;
                const double n2 = u.squaredNorm();
                if (n2 == 0.0 || n2 > cutoff_sq) continue;
                visit(u);
            }
        }
    }
}

/// All diamond-lattice sites within the cutoff, in a deterministic order.
SiteSet generate_sites(const LatticeSpec& spec);

/// 1 - 3 cos^2(theta), theta being the angle between `displacement` and the
/// unit vector `axis`. Lies in [-2, 1].
template <typename Derived, typename AxisDerived>
typename Derived::Scalar angular_factor(const Eigen::MatrixBase<Derived>& displacement,
                                        const Eigen::MatrixBase<AxisDerived>& axis) {
    EIGEN_STATIC_ASSERT_VECTOR_SPECIFIC_SIZE(Derived, 3);
    using Scalar = typename Derived::Scalar;
    const Scalar n2 = displacement.squaredNorm();
    if (!(n2 > Scalar(0))) throw ValidationError("angular_factor: zero displacement");
    const Scalar proj = displacement.dot(axis);
    return Scalar(1) - Scalar(3) * proj * proj / n2;
}

/// Ising coupling Q = -(J0 / |r|^3) (1 - 3 cos^2 theta). The displacement is
/// in nm and J0 in angular frequency times nm^3; the result is an angular
/// frequency.
template <typename Derived, typename AxisDerived>
typename Derived::Scalar coupling_q(const Eigen::MatrixBase<Derived>& displacement_nm,
                                    const Eigen::MatrixBase<AxisDerived>& axis,
                                    typename Derived::Scalar j0) {
    using std::sqrt;
    const auto geom = angular_factor(displacement_nm, axis);
    const auto n2 = displacement_nm.squaredNorm();
    return -j0 * geom / (n2 * sqrt(n2));
}

}  // namespace nvbroad
