#pragma once

#include "simpnet/complex.hpp"
#include "simpnet/geometry.hpp"
#include "simpnet/json_io.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace simpnet {

/// A continuous map g sampled pointwise. Calls are checked: the output must be
/// finite and of the declared dimension, otherwise SamplerFailure.
class FunctionSampler {
 public:
  using Fn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

  FunctionSampler(std::string name, int input_dim, int output_dim, Fn fn);

  Eigen::VectorXd operator()(const Point& x) const;

  const std::string& name() const { return name_; }
  int input_dim() const { return input_dim_; }
  int output_dim() const { return output_dim_; }

 private:
  std::string name_;
  int input_dim_;
  int output_dim_;
  Fn fn_;
};

/// phi: K^(0) -> L^(0); position is the source vertex index.
struct VertexMap {
  std::string source_id;
  std::string target_id;
  std::vector<int> assignment;
};

/// Throws InvalidVertexMap (wrong size, bad index) or NotASimplexImage.
void validate_vertex_map(const SimplicialComplex& K, const SimplicialComplex& L, const VertexMap& phi);

inline VertexMap identity_map(const SimplicialComplex& K) {
  VertexMap phi{K.id(), K.id(), std::vector<int>(K.num_vertices())};
  for (std::size_t v = 0; v < K.num_vertices(); ++v) phi.assignment[v] = static_cast<int>(v);
  return phi;
}

/// The simplicial map phi_c: |K| -> |L| induced by a validated vertex map.
/// Holds references to K and L, which must outlive it.
class SimplicialMap {
 public:
  SimplicialMap(const SimplicialComplex& K, const SimplicialComplex& L, VertexMap phi, double tol = kDefaultTol);

  const VertexMap& vertex_map() const { return phi_; }
  const PointLocator& source_locator() const { return locator_; }

  /// Sum of lambda_j * phi(v_j) through maximal simplex s.
  Point evaluate_in(int s, const Eigen::VectorXd& coords) const;
  /// Throws OutsideDomain when x is not in |K|; checks every containing
  /// simplex gives the same image.
  Point operator()(const Point& x) const;

 private:
  const SimplicialComplex* source_;
  const SimplicialComplex* target_;
  VertexMap phi_;
  PointLocator locator_;
};

Point evaluate_simplicial_map(const SimplicialComplex& K, const SimplicialComplex& L, const VertexMap& phi,
                              const Point& x, double tol = kDefaultTol);

struct VertexStarResult {
  int vertex = 0;
  int target = -1;  // -1: no admissible target
  std::size_t samples_tested = 0;
  bool violated = false;
  std::optional<Point> witness;  // first sample whose image left |st(target)|
};

/// Sampled star-condition check: a necessary test of g(|st(v)|) in |st(phi(v))|
/// on a barycentric grid, not a proof.
struct StarConditionReport {
  int resolution = 0;
  std::vector<VertexStarResult> vertices;

  bool pass() const;
  std::size_t violations() const;
};

StarConditionReport check_star_condition(const SimplicialComplex& K, const SimplicialComplex& L,
                                         const VertexMap& phi, const FunctionSampler& g, int resolution,
                                         double tol = kDefaultTol);

enum class TieBreak {
  NearestImage,   // closest target vertex to g(v), then smallest index
  SmallestIndex,  // smallest admissible index
};

struct VertexMapOptions {
  int min_t = 0;
  int max_t = 0;
  int resolution = 5;
  TieBreak tie_break = TieBreak::NearestImage;
  double tol = kDefaultTol;
};

struct VertexMapResult {
  int t = 0;
  SimplicialComplex source;  // Sd^t K
  VertexMap map;
  StarConditionReport report;
};

/// Subdivides K until every vertex admits a target vertex w of L with
/// g(|st(v)|) inside |st(w)| on the sampled grid, then returns that map.
/// Throws StarConditionUnsatisfied when max_t is exhausted and
/// NotASimplexImage when the sampled map fails the simplex condition.
VertexMapResult build_vertex_map(const SimplicialComplex& K, const SimplicialComplex& L, const FunctionSampler& g,
                                 const VertexMapOptions& opts);
VertexMapResult build_vertex_map(const SimplicialComplex& K, const SimplicialComplex& L, const FunctionSampler& g,
                                 int max_t, int resolution);

Json vertex_map_to_json(const VertexMap& phi, const std::string& source_file, const std::string& target_file);
/// Reads the assignment; file references are returned through the out-params when given.
VertexMap vertex_map_from_json(const Json& j, std::string* source_file = nullptr, std::string* target_file = nullptr);
Json star_report_to_json(const StarConditionReport& r);

}  // namespace simpnet
