#include "simpnet/ball_example.hpp"

#include "simpnet/error.hpp"

#include <cmath>
#include <limits>

namespace simpnet {

RadialChart::RadialChart(Eigen::MatrixXd simplex_vertices, Point center, double tol)
    : chart_(BarycentricChart::make(simplex_vertices)), center_(std::move(center)), tol_(tol) {
  if (!chart_.full_dimensional()) throw Error(ErrorCode::InvalidArgument, "radial chart needs a full-dimensional simplex");
  center_coords_ = chart_.coordinates(center_);
  if (center_coords_.minCoeff() <= tol_) throw Error(ErrorCode::InvalidArgument, "center must be interior");
}

double RadialChart::boundary_distance(const Point& d) const {
  const Eigen::VectorXd rate = chart_.linear * d;
  double s = std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < rate.size(); ++j)
    if (rate(j) < 0.0) s = std::min(s, -center_coords_(j) / rate(j));
  return s;
}

Point RadialChart::to_ball(const Point& P) const {
  if (P.size() != center_.size()) throw Error(ErrorCode::InvalidArgument, "point has the wrong dimension");
  if (chart_.coordinates(P).minCoeff() < -tol_) throw Error(ErrorCode::OutsideSimplex, "point is outside the simplex");
  const Point diff = P - center_;
  const double r = diff.norm();
  if (r == 0.0) return Point::Zero(P.size());
  return diff / boundary_distance(diff / r);
}

Point RadialChart::to_simplex(const Point& Q) const {
  if (Q.size() != center_.size()) throw Error(ErrorCode::InvalidArgument, "point has the wrong dimension");
  const double r = Q.norm();
  if (r > 1.0 + tol_) throw Error(ErrorCode::OutsideDomain, "point is outside the unit ball");
  if (r == 0.0) return center_;
  const Point d = Q / r;
  return center_ + r * boundary_distance(d) * d;
}

Eigen::MatrixXd ball_source_vertices() {
  Eigen::MatrixXd V(3, 4);
  V << 0, 1, 0, 0,
       0, 0, 1, 0,
       0, 0, 0, 1;
  return V;
}

Eigen::MatrixXd ball_target_vertices() {
  Eigen::MatrixXd V(2, 3);
  V << 0, 1, 0,
       0, 0, 1;
  return V;
}

namespace {

SimplicialComplex single_simplex(const Eigen::MatrixXd& V) {
  std::vector<Point> pts;
  IndexList all;
  for (Eigen::Index c = 0; c < V.cols(); ++c) {
    pts.push_back(V.col(c));
    all.push_back(static_cast<int>(c));
  }
  return SimplicialComplex::build(static_cast<int>(V.rows()), std::move(pts), {all});
}

const RadialChart& chart_for(int dim) {
  static const RadialChart tet(ball_source_vertices(), Point::Constant(3, 0.25));
  static const RadialChart tri(ball_target_vertices(), Point::Constant(2, 0.25));
  if (dim == 3) return tet;
  if (dim == 2) return tri;
  throw Error(ErrorCode::InvalidArgument, "ball charts exist for dim 2 and 3 only");
}

}  // namespace

SimplicialComplex ball_source_complex() { return single_simplex(ball_source_vertices()); }
SimplicialComplex ball_target_complex() { return single_simplex(ball_target_vertices()); }

Point tau_inverse_ball(const Point& P, int dim) { return chart_for(dim).to_ball(P); }
Point tau_ball(const Point& Q, int dim) { return chart_for(dim).to_simplex(Q); }

FunctionSampler ball_projection_sampler() {
  return FunctionSampler("ball-projection", 3, 2, [](const Eigen::VectorXd& P) {
    const Point ball = tau_inverse_ball(P, 3);
    // Rounding can leave |(x, y)| a hair above 1.
    Point q = ball.head(2);
    if (const double r = q.norm(); r > 1.0) q /= r;
    return tau_ball(q, 2);
  });
}

FunctionSampler ball_reflected_sampler() {
  return FunctionSampler("ball-reflected", 3, 2, [g = ball_projection_sampler()](const Eigen::VectorXd& P) {
    return Eigen::VectorXd(Eigen::Vector2d(1.0, 1.0) - g(P));
  });
}

FunctionSampler ball_tau_inverse_sampler(int dim) {
  return FunctionSampler("tau-inverse", dim, dim, [dim](const Eigen::VectorXd& P) { return tau_inverse_ball(P, dim); });
}

BallGolden ball_golden() {
  BallGolden g;
  g.assignment = {0, 1, 2, 2};
  g.w1.resize(4, 3);
  g.w1 << -1, -1, -1,
           1,  0,  0,
           0,  1,  0,
           0,  0,  1;
  g.b1.resize(4);
  g.b1 << 1, 0, 0, 0;
  g.w2.resize(3, 4);
  g.w2 << 1, 0, 0, 0,
          0, 1, 0, 0,
          0, 0, 1, 1;
  g.w3.resize(2, 3);
  g.w3 << 0, 1, 0,
          0, 0, 1;
  return g;
}

namespace {

bool exactly_equal(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && (a.array() == b.array()).all();
}

VertexMapResult map_at(const SimplicialComplex& K, const SimplicialComplex& L, const FunctionSampler& g, int t,
                       const BallExampleConfig& cfg) {
  VertexMapOptions opts;
  opts.min_t = t;
  opts.max_t = t;
  opts.resolution = cfg.resolution;
  opts.tol = cfg.tol;
  return build_vertex_map(K, L, g, opts);
}

}  // namespace

int choose_auto_t1(const BallExampleConfig& cfg) {
  int t = 0;
  while (true) {
    try {
      if (complexity(1, 3, static_cast<std::uint64_t>(t + 1), 1, 2, 0).first > cfg.auto_width_budget) return t;
    } catch (const Error&) {
      return t;
    }
    ++t;
  }
}

BallExampleResult run_ball_example(const BallExampleConfig& cfg) {
  if (cfg.t2 < 0 || (cfg.t1 && *cfg.t1 < 0)) throw Error(ErrorCode::InvalidArgument, "t1 and t2 must be non-negative");
  if (cfg.samples == 0) throw Error(ErrorCode::InvalidArgument, "samples must be positive");
  const SimplicialComplex K = ball_source_complex();
  const SimplicialComplex L0 = ball_target_complex();
  const FunctionSampler g = ball_projection_sampler();

  BallExampleResult r{cfg, 0, cfg.t2, !cfg.t1.has_value(), K, L0, {}, {}, {}, {}, 0.0, std::nullopt};
  if (cfg.t2 > 0) r.target = barycentric_subdivide(L0, cfg.t2).complex;
  r.t1 = cfg.t1 ? *cfg.t1 : choose_auto_t1(cfg);

  VertexMapResult built = map_at(K, r.target, g, r.t1, cfg);
  r.source = std::move(built.source);
  r.map = std::move(built.map);
  r.network = synthesize_network(r.source, r.target, r.map, cfg.tol);

  const FunctionSampler net = network_sampler(r.network);
  const FunctionSampler simp = simplicial_map_sampler(r.source, r.target, r.map);
  const SamplingOptions sampling{cfg.samples, cfg.seed, cfg.threads, 4};
  // |Sd^t K| = |K|: sampling on K keeps the point set independent of t1.
  r.equivalence = estimate_sup_distance(simp, net, K, sampling);

  ApproximationReport& rep = r.report;
  rep.seed = cfg.seed;
  rep.sup_error = estimate_sup_distance(g, net, K, sampling);
  rep.samples = rep.sup_error.evaluated;
  rep.target_mesh = mesh(r.target);
  rep.star = check_star_condition(r.source, r.target, r.map, g, cfg.resolution, cfg.tol);
  rep.complexity = complexity(1, 3, static_cast<std::uint64_t>(r.t1), 1, 2, static_cast<std::uint64_t>(r.t2));
  for (double delta : cfg.deltas)
    rep.modulus.push_back({delta, estimate_modulus(g, K, delta, sampling),
                           estimate_modulus(net, K, delta, sampling)});
  r.source_extended_mesh =
      estimate_extended_mesh(r.source, ball_tau_inverse_sampler(3), euclidean_distance, 4, cfg.seed);

  if (r.t1 == 0 && r.t2 == 0) {
    const BallGolden gold = ball_golden();
    GoldenComparison c;
    c.assignment_matches = r.map.assignment == gold.assignment;
    c.w1 = exactly_equal(r.network.w1, gold.w1);
    c.b1 = exactly_equal(r.network.b1, gold.b1);
    c.w2 = exactly_equal(Eigen::MatrixXd(r.network.w2), gold.w2);
    c.w3 = exactly_equal(r.network.w3, gold.w3);
    const VertexMap reference{K.id(), L0.id(), gold.assignment};
    c.reference_star_pass = check_star_condition(K, L0, reference, g, cfg.resolution, cfg.tol).pass();
    c.reference_w2 = exactly_equal(Eigen::MatrixXd(synthesize_network(K, L0, reference, cfg.tol).w2), gold.w2);
    r.golden = c;
  }
  return r;
}

Json ball_report_to_json(const BallExampleResult& r) {
  Json j;
  Json cfg;
  cfg["t1"] = r.config.t1 ? Json(*r.config.t1) : Json("auto");
  cfg["t2"] = r.config.t2;
  cfg["samples"] = r.config.samples;
  cfg["seed"] = r.config.seed;
  cfg["tol"] = r.config.tol;
  cfg["resolution"] = r.config.resolution;
  cfg["auto_width_budget"] = r.config.auto_width_budget;
  j["config"] = std::move(cfg);
  j["t1"] = r.t1;
  j["t2"] = r.t2;
  j["t1_policy"] = r.auto_t1 ? "auto" : "fixed";
  j["source_maximal_simplices"] = r.source.num_maximal();
  j["target_maximal_simplices"] = r.target.num_maximal();
  j["approximation"] = approximation_report_to_json(r.report);
  j["equivalence"] = sup_estimate_to_json(r.equivalence);
  j["source_extended_mesh"] = r.source_extended_mesh;
  if (r.source.num_vertices() <= 64) j["assignment"] = r.map.assignment;
  if (r.network.first_width() <= 256) {
    Json net = network_to_json(r.network);
    j["network"] = {{"w1", net["w1"]}, {"b1", net["b1"]}, {"w2", net["w2"]}, {"w3", net["w3"]}};
  }
  if (r.golden) {
    const GoldenComparison& c = *r.golden;
    Json gj;
    gj["reference_assignment"] = ball_golden().assignment;
    gj["assignment_matches_reference"] = c.assignment_matches;
    gj["w1"] = c.w1;
    gj["b1"] = c.b1;
    gj["w2"] = c.w2;
    gj["w3"] = c.w3;
    gj["reference_passes_star_condition"] = c.reference_star_pass;
    gj["reference_w2"] = c.reference_w2;
    j["golden"] = std::move(gj);
  }
  return j;
}

}  // namespace simpnet
