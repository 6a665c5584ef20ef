#pragma once

#include "simpnet/analysis.hpp"
#include "simpnet/approx.hpp"
#include "simpnet/complex.hpp"
#include "simpnet/netgen.hpp"

#include <optional>
#include <vector>

namespace simpnet {

/// Radial homeomorphism between the unit ball and a simplex that is
/// star-shaped around `center`: the ray from the center through P meets the
/// boundary at A, and P is sent to (P - c) / |A - c|.
class RadialChart {
 public:
  RadialChart(Eigen::MatrixXd simplex_vertices, Point center, double tol = kDefaultTol);

  /// Simplex -> ball. Throws OutsideSimplex.
  Point to_ball(const Point& P) const;
  /// Ball -> simplex. Points with |Q| > 1 + tol throw OutsideDomain.
  Point to_simplex(const Point& Q) const;
  /// Distance from the center to the boundary along unit direction d.
  double boundary_distance(const Point& d) const;

  const Point& center() const { return center_; }

 private:
  BarycentricChart chart_;
  Point center_;
  Eigen::VectorXd center_coords_;
  double tol_;
};

Eigen::MatrixXd ball_source_vertices();  // tetrahedron, 3 x 4
Eigen::MatrixXd ball_target_vertices();  // triangle, 2 x 3
SimplicialComplex ball_source_complex();
SimplicialComplex ball_target_complex();

/// tau^{-1} on the reference tetrahedron (dim 3, center (1/4,1/4,1/4)) or
/// the reference triangle (dim 2, center (1/4,1/4)).
Point tau_inverse_ball(const Point& P, int dim);
Point tau_ball(const Point& Q, int dim);

/// tau_L o (x, y, z -> x, y) o tau_K^{-1}.
FunctionSampler ball_projection_sampler();
/// The projection followed by the point reflection y -> (1,1) - y, which
/// sends |L| onto the reflected triangle (1,1),(0,1),(1,0).
FunctionSampler ball_reflected_sampler();
FunctionSampler ball_tau_inverse_sampler(int dim);

/// Hand-derived reference network for the example.
struct BallGolden {
  std::vector<int> assignment;  // (0,0,0)->0, (1,0,0)->1, (0,1,0)->2, (0,0,1)->2
  Eigen::MatrixXd w1, w2, w3;
  Eigen::VectorXd b1;
};
BallGolden ball_golden();

struct BallExampleConfig {
  std::optional<int> t1;  // empty: choose automatically
  int t2 = 0;
  std::size_t samples = 2000;
  std::uint64_t seed = 0;
  double tol = kDefaultTol;
  int resolution = 5;
  int threads = 1;
  std::uint64_t auto_width_budget = 65536;  // first-hidden-layer neurons
  std::vector<double> deltas{0.1};
};

struct GoldenComparison {
  bool assignment_matches = false;
  bool w1 = false, b1 = false, w2 = false, w3 = false;
  bool reference_star_pass = false;
  bool reference_w2 = false;  // network synthesized from the reference map
};

struct BallExampleResult {
  BallExampleConfig config;
  int t1 = 0;
  int t2 = 0;
  bool auto_t1 = false;
  SimplicialComplex source;  // Sd^t1 K
  SimplicialComplex target;  // Sd^t2 L
  VertexMap map;
  SynthesizedNetwork network;
  ApproximationReport report;
  SupEstimate equivalence;   // simplicial map vs network
  double source_extended_mesh = 0.0;
  std::optional<GoldenComparison> golden;
};

/// Automatic t1: the finest source subdivision whose first hidden layer fits
/// in auto_width_budget neurons (at least 0).
int choose_auto_t1(const BallExampleConfig& cfg);

BallExampleResult run_ball_example(const BallExampleConfig& cfg);
Json ball_report_to_json(const BallExampleResult& r);

}  // namespace simpnet
