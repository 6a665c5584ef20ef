#include "simpnet/approx.hpp"

#include "simpnet/error.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

namespace simpnet {

FunctionSampler::FunctionSampler(std::string name, int input_dim, int output_dim, Fn fn)
    : name_(std::move(name)), input_dim_(input_dim), output_dim_(output_dim), fn_(std::move(fn)) {
  if (!fn_) throw Error(ErrorCode::InvalidArgument, "empty sampler callback");
}

Eigen::VectorXd FunctionSampler::operator()(const Point& x) const {
  if (x.size() != input_dim_) throw Error(ErrorCode::SamplerFailure, name_ + ": input has the wrong dimension");
  Eigen::VectorXd y;
  try {
    y = fn_(x);
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(ErrorCode::SamplerFailure, name_ + ": " + e.what());
  }
  if (y.size() != output_dim_) throw Error(ErrorCode::SamplerFailure, name_ + ": output has the wrong dimension");
  if (!y.allFinite()) throw Error(ErrorCode::SamplerFailure, name_ + ": non-finite output");
  return y;
}

namespace {

void check_assignment(const SimplicialComplex& K, const SimplicialComplex& L, const VertexMap& phi) {
  if (phi.assignment.size() != K.num_vertices())
    throw Error(ErrorCode::InvalidVertexMap, "assignment has " + std::to_string(phi.assignment.size()) +
                                                 " entries, source has " + std::to_string(K.num_vertices()) +
                                                 " vertices");
  for (int w : phi.assignment)
    if (w < 0 || static_cast<std::size_t>(w) >= L.num_vertices())
      throw Error(ErrorCode::InvalidVertexMap, "target index " + std::to_string(w) + " out of range");
}

std::string format_simplex(const IndexList& s) {
  std::string out = "(";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
  return out + ")";
}

}  // namespace

void validate_vertex_map(const SimplicialComplex& K, const SimplicialComplex& L, const VertexMap& phi) {
  check_assignment(K, L, phi);
  for (std::size_t s = 0; s < K.num_maximal(); ++s) {
    IndexList image;
    for (int v : K.maximal(static_cast<int>(s))) image.push_back(phi.assignment[static_cast<std::size_t>(v)]);
    std::sort(image.begin(), image.end());
    image.erase(std::unique(image.begin(), image.end()), image.end());
    if (!L.has_face(image))
      throw Error(ErrorCode::NotASimplexImage, "image of source simplex " + format_simplex(K.maximal(static_cast<int>(s))) +
                                                   " is " + format_simplex(image) + ", which spans no target simplex");
  }
}

SimplicialMap::SimplicialMap(const SimplicialComplex& K, const SimplicialComplex& L, VertexMap phi, double tol)
    : source_(&K), target_(&L), phi_(std::move(phi)), locator_(K, tol) {
  validate_vertex_map(K, L, phi_);
}

Point SimplicialMap::evaluate_in(int s, const Eigen::VectorXd& coords) const {
  Point y = Point::Zero(target_->ambient_dim());
  const auto& idx = source_->maximal(s);
  for (std::size_t j = 0; j < idx.size(); ++j)
    y += coords(static_cast<Eigen::Index>(j)) * target_->vertex(phi_.assignment[static_cast<std::size_t>(idx[j])]);
  return y;
}

Point SimplicialMap::operator()(const Point& x) const {
  const auto loc = locator_.locate(x);
  if (!loc.inside()) throw Error(ErrorCode::OutsideDomain, "point is outside the source complex");
  Point y = evaluate_in(loc.hits.front().simplex, loc.hits.front().coords);
  for (std::size_t h = 1; h < loc.hits.size(); ++h) {
    const Point other = evaluate_in(loc.hits[h].simplex, loc.hits[h].coords);
    if ((other - y).cwiseAbs().maxCoeff() > 1e-7 * std::max(1.0, y.cwiseAbs().maxCoeff()))
      throw Error(ErrorCode::InvariantViolation, "containing simplices disagree on the image");
  }
  return y;
}

Point evaluate_simplicial_map(const SimplicialComplex& K, const SimplicialComplex& L, const VertexMap& phi,
                              const Point& x, double tol) {
  return SimplicialMap(K, L, phi, tol)(x);
}

bool StarConditionReport::pass() const {
  return std::all_of(vertices.begin(), vertices.end(), [](const auto& r) { return r.target >= 0 && !r.violated; });
}

std::size_t StarConditionReport::violations() const {
  return static_cast<std::size_t>(std::count_if(vertices.begin(), vertices.end(),
                                                [](const auto& r) { return r.target < 0 || r.violated; }));
}

namespace {

/// Images of the barycentric grid of every maximal simplex of K, each stored
/// as the list of maximal simplices of L containing it (CSR layout).
class SampledImages {
 public:
  SampledImages(const SimplicialComplex& K, const PointLocator& target, const FunctionSampler& g, int resolution)
      : K_(K), L_(target.complex()), weights_(barycentric_grid(K.dim(), resolution)) {
    if (g.input_dim() != K.ambient_dim() || g.output_dim() != L_.ambient_dim())
      throw Error(ErrorCode::SamplerFailure, g.name() + ": dimensions do not match the complexes");
    offsets_.reserve(K.num_maximal() * weights_.size() + 1);
    offsets_.push_back(0);
    for (std::size_t s = 0; s < K.num_maximal(); ++s) {
      const Eigen::MatrixXd V = K.simplex_vertices(static_cast<int>(s));
      for (const auto& w : weights_) {
        const Point y = g(V * w);
        for (int h : target.candidates(y))
          if (target.contains(h, y)) data_.push_back(h);
        offsets_.push_back(data_.size());
      }
    }
  }

  std::size_t grid_size() const { return weights_.size(); }

  /// Every grid image of every maximal simplex around v lies in |st(w)|;
  /// on failure the first offending sample is written to `witness`.
  bool star_inside(int v, int w, std::optional<Point>* witness = nullptr) const {
    for (int s : K_.incident(v)) {
      for (std::size_t gi = 0; gi < weights_.size(); ++gi) {
        const std::size_t idx = static_cast<std::size_t>(s) * weights_.size() + gi;
        bool ok = false;
        for (std::size_t p = offsets_[idx]; p < offsets_[idx + 1] && !ok; ++p) {
          const auto& mu = L_.maximal(data_[p]);
          ok = std::binary_search(mu.begin(), mu.end(), w);
        }
        if (!ok) {
          if (witness) *witness = K_.simplex_vertices(s) * weights_[gi];
          return false;
        }
      }
    }
    return true;
  }

  std::size_t samples_around(int v) const { return K_.incident(v).size() * weights_.size(); }

 private:
  const SimplicialComplex& K_;
  const SimplicialComplex& L_;
  std::vector<Eigen::VectorXd> weights_;
  std::vector<std::size_t> offsets_;
  std::vector<int> data_;
};

}  // namespace

StarConditionReport check_star_condition(const SimplicialComplex& K, const SimplicialComplex& L,
                                         const VertexMap& phi, const FunctionSampler& g, int resolution,
                                         double tol) {
  if (resolution < 1) throw Error(ErrorCode::InvalidArgument, "resolution must be positive");
  check_assignment(K, L, phi);
  const PointLocator target(L, tol);
  const SampledImages images(K, target, g, resolution);
  StarConditionReport report{resolution, {}};
  report.vertices.reserve(K.num_vertices());
  for (std::size_t v = 0; v < K.num_vertices(); ++v) {
    VertexStarResult r;
    r.vertex = static_cast<int>(v);
    r.target = phi.assignment[v];
    r.samples_tested = images.samples_around(r.vertex);
    r.violated = !images.star_inside(r.vertex, r.target, &r.witness);
    report.vertices.push_back(std::move(r));
  }
  return report;
}

namespace {

std::optional<VertexMapResult> try_level(const SimplicialComplex& Kt, const SimplicialComplex& L,
                                         const PointLocator& target, const FunctionSampler& g,
                                         const VertexMapOptions& opts, int t) {
  const SampledImages images(Kt, target, g, opts.resolution);
  VertexMap phi{Kt.id(), L.id(), std::vector<int>(Kt.num_vertices(), -1)};
  StarConditionReport report{opts.resolution, {}};
  for (std::size_t v = 0; v < Kt.num_vertices(); ++v) {
    const Point image = g(Kt.vertex(static_cast<int>(v)));
    // w must have g(v) in |st(w)|: only vertices of simplices containing g(v) qualify.
    std::set<int> candidates;
    for (const auto& hit : target.locate(image).hits)
      for (int w : L.maximal(hit.simplex)) candidates.insert(w);
    int best = -1;
    double best_dist = 0.0;
    for (int w : candidates) {
      if (!images.star_inside(static_cast<int>(v), w)) continue;
      const double d = (L.vertex(w) - image).norm();
      if (best < 0) {
        best = w;
        best_dist = d;
        if (opts.tie_break == TieBreak::SmallestIndex) break;
      } else if (d < best_dist - 1e-12) {
        best = w;
        best_dist = d;
      }
    }
    if (best < 0) return std::nullopt;
    phi.assignment[v] = best;
    report.vertices.push_back({static_cast<int>(v), best, images.samples_around(static_cast<int>(v)), false, {}});
  }
  validate_vertex_map(Kt, L, phi);
  return VertexMapResult{t, Kt, std::move(phi), std::move(report)};
}

}  // namespace

VertexMapResult build_vertex_map(const SimplicialComplex& K, const SimplicialComplex& L, const FunctionSampler& g,
                                 const VertexMapOptions& opts) {
  if (opts.resolution < 1) throw Error(ErrorCode::InvalidArgument, "resolution must be positive");
  if (opts.min_t < 0 || opts.max_t < opts.min_t) throw Error(ErrorCode::InvalidArgument, "need 0 <= min_t <= max_t");
  const PointLocator target(L, opts.tol);
  SimplicialComplex current = K;
  for (int t = 0; t <= opts.max_t; ++t) {
    if (t > 0) current = barycentric_subdivide(current, 1).complex;
    if (t < opts.min_t) continue;
    if (auto result = try_level(current, L, target, g, opts, t)) return std::move(*result);
  }
  throw Error(ErrorCode::StarConditionUnsatisfied,
              "no vertex map satisfies the sampled star condition up to t = " + std::to_string(opts.max_t));
}

VertexMapResult build_vertex_map(const SimplicialComplex& K, const SimplicialComplex& L, const FunctionSampler& g,
                                 int max_t, int resolution) {
  VertexMapOptions opts;
  opts.max_t = max_t;
  opts.resolution = resolution;
  return build_vertex_map(K, L, g, opts);
}

Json vertex_map_to_json(const VertexMap& phi, const std::string& source_file, const std::string& target_file) {
  Json j;
  j["source"] = source_file;
  j["target"] = target_file;
  j["assignment"] = phi.assignment;
  return j;
}

VertexMap vertex_map_from_json(const Json& j, std::string* source_file, std::string* target_file) {
  try {
    VertexMap phi;
    phi.assignment = j.at("assignment").get<std::vector<int>>();
    if (source_file) *source_file = j.at("source").get<std::string>();
    if (target_file) *target_file = j.at("target").get<std::string>();
    return phi;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::FormatError, std::string("vertex map file: ") + e.what());
  }
}

Json star_report_to_json(const StarConditionReport& r) {
  Json j;
  j["resolution"] = r.resolution;
  j["pass"] = r.pass();
  j["violations"] = r.violations();
  std::size_t samples = 0;
  for (const auto& v : r.vertices) samples += v.samples_tested;
  j["samples_tested"] = samples;
  j["targets"] = Json::array();
  for (const auto& v : r.vertices) j["targets"].push_back(v.target);
  return j;
}

}  // namespace simpnet
