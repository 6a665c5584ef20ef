#pragma once

#include "simpnet/approx.hpp"
#include "simpnet/complex.hpp"
#include "simpnet/geometry.hpp"
#include "simpnet/json_io.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <filesystem>
#include <vector>

namespace simpnet {

/// Two-hidden-layer network realizing a simplicial map |K| -> |L|.
///
/// Matrices use the "rows = destination layer, columns = source layer"
/// convention. Hidden neuron i*(n+1)+t of the first layer is the barycentric
/// coordinate of vertex t of source simplex i; neuron j*(m+1)+r of the second
/// layer is the coordinate of vertex r of target simplex j. Both hidden biases
/// after the first layer are zero.
struct SynthesizedNetwork {
  int n = 0;  // input dimension = dim K
  int m = 0;  // output dimension = dim L
  int k = 0;  // maximal simplices of K
  int l = 0;  // maximal simplices of L
  double tol = kDefaultTol;
  Eigen::MatrixXd w1;               // k(n+1) x n
  Eigen::VectorXd b1;               // k(n+1)
  Eigen::SparseMatrix<double> w2;   // l(m+1) x k(n+1), entries 0/1
  Eigen::MatrixXd w3;               // m x l(m+1)

  int first_width() const { return k * (n + 1); }
  int second_width() const { return l * (m + 1); }
};

struct ForwardTrace {
  Point input;
  Eigen::VectorXd layer1;         // all source barycentric blocks
  std::vector<bool> source_mask;  // blocks with every coordinate >= -tol
  Eigen::VectorXd layer1_gated;   // active blocks, scaled by 1/#active
  Eigen::VectorXd layer2;         // target barycentric blocks
  std::vector<bool> target_mask;  // psi per target block
  std::vector<Point> block_outputs;  // z^j for active target blocks, else empty
  Point output;
};

/// Builds w1/b1 by inverting each homogeneous vertex matrix of K, w2 from the
/// vertex map and w3 from the vertex coordinates of L. Both complexes must be
/// full-dimensional in their ambient spaces.
SynthesizedNetwork synthesize_network(const SimplicialComplex& K, const SimplicialComplex& L, const VertexMap& phi,
                                      double tol = kDefaultTol);

/// Three-stage evaluation: affine layer with a per-block membership gate,
/// 0/1 linear layer, then the psi-gated normalized readout. Throws
/// OutsideDomain when no source block (or no target block) is active.
Point forward(const SynthesizedNetwork& net, const Point& x, ForwardTrace* trace = nullptr);

/// Throws InvariantViolation naming the first broken invariant.
void check_network_invariants(const SynthesizedNetwork& net);

Json network_to_json(const SynthesizedNetwork& net);
SynthesizedNetwork network_from_json(const Json& j);
void save_network(const SynthesizedNetwork& net, const std::filesystem::path& path);
SynthesizedNetwork load_network(const std::filesystem::path& path);

}  // namespace simpnet
