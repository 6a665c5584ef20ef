#pragma once

#include "simpnet/approx.hpp"
#include "simpnet/complex.hpp"
#include "simpnet/json_io.hpp"
#include "simpnet/netgen.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace simpnet {

/// Widths of the two hidden layers after t1 subdivisions of a k-simplex,
/// n-dimensional source and t2 of an l-simplex, m-dimensional target:
///   first  = k ((n+1)!)^t1 (n+1),  second = l ((m+1)!)^t2 (m+1),
///   value  = max(first, second).
struct ComplexityFigure {
  std::uint64_t k = 0, n = 0, t1 = 0, l = 0, m = 0, t2 = 0;
  std::uint64_t first = 0;
  std::uint64_t second = 0;
  std::uint64_t value = 0;
};

/// Exact integer evaluation; throws Overflow past 2^64 - 1.
ComplexityFigure complexity(std::uint64_t k, std::uint64_t n, std::uint64_t t1, std::uint64_t l, std::uint64_t m,
                            std::uint64_t t2);

/// Deterministic point stream on |K|. Index i < grid_size() walks the
/// barycentric grid of every maximal simplex; later indices are flat
/// Dirichlet(1, ..., 1) draws in simplex (i mod k), each seeded from (seed, i)
/// alone, so a prefix of the stream never depends on its length or on how it
/// is split across threads.
class DomainSampler {
 public:
  DomainSampler(const SimplicialComplex& K, std::uint64_t seed, int grid_resolution = 4);

  std::size_t grid_size() const { return grid_.size() * K_->num_maximal(); }
  /// Grid points plus `random_samples` draws.
  std::size_t total(std::size_t random_samples) const { return grid_size() + random_samples; }

  Point point(std::size_t i) const;
  /// Maximal simplex the i-th point was drawn from.
  int simplex_of(std::size_t i) const;

  const SimplicialComplex& complex() const { return *K_; }
  std::uint64_t seed() const { return seed_; }

 private:
  const SimplicialComplex* K_;
  std::uint64_t seed_;
  std::vector<Eigen::VectorXd> grid_;
};

/// Reproducible per-index random stream.
class IndexedRng {
 public:
  IndexedRng(std::uint64_t seed, std::uint64_t index, std::uint64_t stream = 0);
  std::uint64_t next();
  /// Uniform in [0, 1).
  double uniform();
  double exponential();
  double normal();

 private:
  std::uint64_t state_;
};

struct SupEstimate {
  double value = 0.0;
  Point argmax;
  std::size_t argmax_index = 0;
  std::size_t evaluated = 0;
};

/// Max reduction; ties go to the smaller sample index so order does not matter.
SupEstimate merge(const SupEstimate& a, const SupEstimate& b);

struct SamplingOptions {
  std::size_t samples = 1000;  // random draws on top of the grid
  std::uint64_t seed = 0;
  int threads = 1;
  int grid_resolution = 4;
};

/// max |f(x) - h(x)| over the sample stream: a lower bound on the sup norm.
SupEstimate estimate_sup_distance(const FunctionSampler& f, const FunctionSampler& h, const SimplicialComplex& domain,
                                  const SamplingOptions& opts);
SupEstimate estimate_sup_distance(const FunctionSampler& f, const FunctionSampler& h, const SimplicialComplex& domain,
                                  std::size_t samples, std::uint64_t seed);
/// The same estimate restricted to stream indices [begin, end); merging the
/// shards of a partition reproduces the full run exactly.
SupEstimate estimate_sup_distance_range(const FunctionSampler& f, const FunctionSampler& h,
                                        const DomainSampler& stream, std::size_t begin, std::size_t end);

/// Sampled modulus of continuity: max |f(x) - f(y)| over pairs with
/// |x - y| <= delta, y = x + perturbation pulled back into |domain|.
/// A lower bound on the true modulus.
double estimate_modulus(const FunctionSampler& f, const SimplicialComplex& domain, double delta,
                        const SamplingOptions& opts);
double estimate_modulus(const FunctionSampler& f, const SimplicialComplex& domain, double delta, std::size_t samples,
                        std::uint64_t seed);

using Metric = std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&)>;
double euclidean_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

/// max over maximal simplices of d(tau_inverse(a), tau_inverse(b)) for a, b
/// on the vertex set, the grid and `samples` random pairs per simplex.
double estimate_extended_mesh(const SimplicialComplex& K, const FunctionSampler& tau_inverse, const Metric& metric,
                              std::size_t samples, std::uint64_t seed, int grid_resolution = 2);

FunctionSampler network_sampler(const SynthesizedNetwork& net, std::string name = "network");
/// The induced simplicial map as a sampler; K and L must outlive it.
FunctionSampler simplicial_map_sampler(const SimplicialComplex& K, const SimplicialComplex& L, const VertexMap& phi,
                                       std::string name = "simplicial-map");

struct ModulusEstimate {
  double delta = 0.0;
  double target = 0.0;   // rho(delta, g)
  double network = 0.0;  // rho(delta, N)
};

struct ApproximationReport {
  std::size_t samples = 0;  // evaluated points
  std::uint64_t seed = 0;
  SupEstimate sup_error;    // g vs network
  double target_mesh = 0.0;
  StarConditionReport star;
  ComplexityFigure complexity;
  std::vector<ModulusEstimate> modulus;
};

Json complexity_to_json(const ComplexityFigure& c);
Json sup_estimate_to_json(const SupEstimate& s);
Json approximation_report_to_json(const ApproximationReport& r);

}  // namespace simpnet
