#pragma once

#include "simpnet/complex.hpp"
#include "simpnet/geometry.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace simpnet {

/// Builds complexes whose validity holds by construction (subdivisions).
struct ComplexAccess {
  static SimplicialComplex trusted(int ambient_dim, int dim, std::vector<Point> vertices,
                                   std::vector<IndexList> maximal) {
    return SimplicialComplex(ambient_dim, dim, std::move(vertices), std::move(maximal));
  }
};

namespace detail {

/// max c^T z subject to A z = b, z >= 0, for bounded problems.
/// Two-phase dense simplex with Bland's rule; nullopt when infeasible.
std::optional<double> lp_maximize(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                                  const Eigen::VectorXd& c);

/// True when the two simplices meet in something larger than the hull of the
/// vertices they share. `a`, `b` are sorted index lists into `vertices`.
bool overlaps_off_shared_face(const std::vector<Point>& vertices, const IndexList& a,
                              const BarycentricChart& chart_a, const IndexList& b,
                              const BarycentricChart& chart_b, double tol);

std::string fnv1a_hex(const std::vector<Point>& vertices, const std::vector<IndexList>& simplices);

}  // namespace detail
}  // namespace simpnet
