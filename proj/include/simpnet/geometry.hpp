#pragma once

#include "simpnet/complex.hpp"

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <vector>

namespace simpnet {

inline constexpr double kDefaultTol = 1e-9;
inline constexpr double kMaxCondition = 1e12;

/// Rank test on the difference vectors from the first point, relative to the
/// largest singular value.
bool is_affinely_independent(std::span<const Point> points, double tol = kDefaultTol);

/// Affine map x -> linear * x + offset returning barycentric coordinates with
/// respect to one simplex. For a full-dimensional simplex [linear | offset] is
/// the inverse of the homogeneous vertex matrix; for a lower-dimensional one it
/// is the least-squares solve on the affine hull.
struct BarycentricChart {
  Eigen::MatrixXd vertices;  // ambient x (d+1)
  Eigen::MatrixXd linear;    // (d+1) x ambient
  Eigen::VectorXd offset;    // d+1

  static BarycentricChart make(const Eigen::MatrixXd& simplex_vertices);

  bool full_dimensional() const { return vertices.cols() == vertices.rows() + 1; }
  Eigen::VectorXd coordinates(const Point& x) const { return linear * x + offset; }
  /// Distance from x to the affine hull (zero for full-dimensional simplices).
  double hull_residual(const Point& x, const Eigen::VectorXd& coords) const;
};

/// Unique affine coordinates of x; entries may be negative outside the simplex.
Eigen::VectorXd barycentric_coordinates(const Eigen::MatrixXd& simplex_vertices, const Point& x,
                                        double tol = kDefaultTol);
Eigen::VectorXd barycentric_coordinates(std::span<const Point> simplex_vertices, const Point& x,
                                        double tol = kDefaultTol);

struct LocationHit {
  int simplex = 0;
  Eigen::VectorXd coords;
};

struct BarycentricLocation {
  Point point;
  std::vector<LocationHit> hits;

  bool inside() const { return !hits.empty(); }
};

/// One chart per maximal simplex, built once and read-only afterwards.
class SolveCache {
 public:
  explicit SolveCache(const SimplicialComplex& K);

  std::size_t size() const { return charts_.size(); }
  const BarycentricChart& chart(int s) const { return charts_[static_cast<std::size_t>(s)]; }

 private:
  std::vector<BarycentricChart> charts_;
};

/// Point location over the maximal simplices of a complex. A uniform bucket
/// grid over inflated bounding boxes narrows the candidates; results are the
/// same as a linear scan, in increasing simplex order.
class PointLocator {
 public:
  explicit PointLocator(const SimplicialComplex& K, double tol = kDefaultTol);

  const SimplicialComplex& complex() const { return *complex_; }
  const SolveCache& cache() const { return cache_; }
  double tol() const { return tol_; }

  /// Coordinates of x in maximal simplex s when x lies in it up to tol.
  std::optional<Eigen::VectorXd> coordinates_if_inside(int s, const Point& x) const;
  bool contains(int s, const Point& x) const { return coordinates_if_inside(s, x).has_value(); }

  BarycentricLocation locate(const Point& x) const;
  /// Index of the first containing maximal simplex, or -1.
  int find_first(const Point& x) const;

  /// Maximal simplices that may contain x, ascending.
  std::span<const int> candidates(const Point& x) const;

 private:
  void build_buckets();

  const SimplicialComplex* complex_;
  SolveCache cache_;
  double tol_;
  Eigen::VectorXd lo_, cell_;
  std::vector<int> cells_per_axis_;
  std::vector<std::size_t> bucket_offsets_;
  std::vector<int> bucket_data_;
};

BarycentricLocation locate(const SimplicialComplex& K, const Point& x, double tol = kDefaultTol);

/// Weights of the barycentric grid of resolution r on a d-simplex: every
/// coordinate vector with entries in {0, 1/r, ..., 1}.
std::vector<Eigen::VectorXd> barycentric_grid(int d, int resolution);

}  // namespace simpnet
