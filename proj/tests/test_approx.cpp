#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "simpnet/approx.hpp"
#include "simpnet/ball_example.hpp"
#include "simpnet/error.hpp"
#include "support.hpp"

using namespace simpnet;
namespace ts = testing_support;

namespace {

Point pt(std::initializer_list<double> xs) {
  Point p(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) p(i++) = x;
  return p;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::InvalidArgument;
}

FunctionSampler identity_sampler(int n) {
  return FunctionSampler("identity", n, n, [](const Eigen::VectorXd& x) { return x; });
}

VertexMap reference_map() {
  return VertexMap{ball_source_complex().id(), ball_target_complex().id(), {0, 1, 2, 2}};
}

}  // namespace

TEST_CASE("sampler checks its outputs") {
  const FunctionSampler bad("bad", 2, 2, [](const Eigen::VectorXd&) { return Eigen::VectorXd::Constant(2, std::nan("")); });
  CHECK(code_of([&] { bad(pt({0, 0})); }) == ErrorCode::SamplerFailure);
  const FunctionSampler wrong("wrong", 2, 2, [](const Eigen::VectorXd&) { return Eigen::VectorXd::Zero(3); });
  CHECK(code_of([&] { wrong(pt({0, 0})); }) == ErrorCode::SamplerFailure);
  CHECK(code_of([&] { identity_sampler(2)(pt({0, 0, 0})); }) == ErrorCode::SamplerFailure);
}

TEST_CASE("vertex map validation") {
  const auto K = ball_source_complex(), L = ball_target_complex();
  CHECK_NOTHROW(validate_vertex_map(K, L, reference_map()));
  CHECK_NOTHROW(validate_vertex_map(K, K, identity_map(K)));

  const auto two_edges = SimplicialComplex::build(2, {pt({0, 0}), pt({1, 0}), pt({0, 2}), pt({1, 2})}, {{0, 1}, {2, 3}});
  const auto edge = SimplicialComplex::build(1, {pt({0}), pt({1})}, {{0, 1}});
  CHECK(code_of([&] { validate_vertex_map(edge, two_edges, VertexMap{"", "", {0, 2}}); }) ==
        ErrorCode::NotASimplexImage);
  CHECK(code_of([&] { validate_vertex_map(edge, two_edges, VertexMap{"", "", {0}}); }) == ErrorCode::InvalidVertexMap);
  CHECK(code_of([&] { validate_vertex_map(edge, two_edges, VertexMap{"", "", {0, 7}}); }) ==
        ErrorCode::InvalidVertexMap);
}

TEST_CASE("simplicial map evaluation") {
  const auto K = ball_source_complex(), L = ball_target_complex();
  const SimplicialMap f(K, L, reference_map());
  CHECK((f(pt({0.25, 0.25, 0.25})) - pt({0.25, 0.5})).norm() < 1e-15);
  for (int v = 0; v < 4; ++v) CHECK((f(K.vertex(v)) - L.vertex(reference_map().assignment[static_cast<std::size_t>(v)])).norm() < 1e-15);
  CHECK(code_of([&] { f(pt({1, 1, 1})); }) == ErrorCode::OutsideDomain);

  ts::Rng rng(4);
  for (int trial = 0; trial < 15; ++trial) {
    const auto R = ts::random_complex(ts::uniform_int(rng, 1, 3), 20, rng);
    const SimplicialMap id(R, R, identity_map(R));
    for (const auto& x : ts::sample_points(R, 100, rng)) CHECK((id(x) - x).cwiseAbs().maxCoeff() <= 1e-9);
  }
}

TEST_CASE("simplicial maps: choice independence and piecewise linearity") {
  ts::Rng rng(6);
  for (int trial = 0; trial < 60; ++trial) {
    auto inst = ts::random_map_instance(trial, rng);
    const SimplicialMap f(inst.K, inst.L, inst.phi);
    for (const auto& x : ts::sample_points(inst.K, 60, rng)) {
      const auto loc = f.source_locator().locate(x);
      REQUIRE(loc.inside());
      const Point y0 = f.evaluate_in(loc.hits[0].simplex, loc.hits[0].coords);
      for (const auto& h : loc.hits) CHECK((f.evaluate_in(h.simplex, h.coords) - y0).cwiseAbs().maxCoeff() <= 1e-9);
      CHECK((y0 - ts::oracle_simplicial_map(inst.K, inst.L, inst.phi, x)).cwiseAbs().maxCoeff() <= 1e-9);
    }
    for (int s = 0; s < static_cast<int>(inst.K.num_maximal()); ++s) {
      const auto V = inst.K.simplex_vertices(s);
      const Point x = V * ts::random_weights(rng, inst.K.dim()), y = V * ts::random_weights(rng, inst.K.dim());
      const double lam = ts::uniform(rng);
      CHECK((f(lam * x + (1 - lam) * y) - (lam * f(x) + (1 - lam) * f(y))).cwiseAbs().maxCoeff() <= 1e-9);
    }
  }
}

TEST_CASE("star condition on identity and on the ball example") {
  const auto tri = ts::standard_simplex(2);
  for (int r : {1, 3, 6}) CHECK(check_star_condition(tri, tri, identity_map(tri), identity_sampler(2), r).pass());
  const auto S = barycentric_subdivide(tri, 1).complex;
  CHECK(check_star_condition(S, S, identity_map(S), identity_sampler(2), 4).pass());

  const auto K = ball_source_complex(), L = ball_target_complex();
  const auto good = check_star_condition(K, L, reference_map(), ball_projection_sampler(), 5);
  CHECK(good.pass());
  CHECK(good.violations() == 0);
  CHECK(good.vertices.size() == 4);
  CHECK(good.vertices[0].samples_tested == 56);

  const auto bad = check_star_condition(K, L, reference_map(), ball_reflected_sampler(), 5);
  CHECK_FALSE(bad.pass());
  CHECK(bad.violations() > 0);
  for (const auto& v : bad.vertices)
    if (v.violated) CHECK(v.witness.has_value());
}

TEST_CASE("star condition detects a wrong target on a subdivided target") {
  const auto tri = ts::standard_simplex(2);
  const auto S = barycentric_subdivide(tri, 1).complex;
  // Send everything to vertex 0 of S while g is the identity.
  VertexMap phi{S.id(), S.id(), std::vector<int>(S.num_vertices(), 0)};
  CHECK_FALSE(check_star_condition(S, S, phi, identity_sampler(2), 3).pass());
}

TEST_CASE("build_vertex_map basics") {
  const auto tri = ts::standard_simplex(2);
  const auto r = build_vertex_map(tri, tri, identity_sampler(2), 0, 5);
  CHECK(r.t == 0);
  CHECK(r.map.assignment == std::vector<int>{0, 1, 2});

  const Point u = tri.vertex(1);
  const FunctionSampler constant("constant", 2, 2, [u](const Eigen::VectorXd&) { return u; });
  const auto c = build_vertex_map(tri, tri, constant, 0, 5);
  CHECK(c.t == 0);
  CHECK(c.map.assignment == std::vector<int>{1, 1, 1});

  // g leaves |L| entirely: no target star can contain its image.
  const FunctionSampler away("away", 2, 2, [](const Eigen::VectorXd& x) { return Eigen::VectorXd(x.array() + 5.0); });
  CHECK(code_of([&] { build_vertex_map(tri, tri, away, 2, 3); }) == ErrorCode::StarConditionUnsatisfied);
  CHECK(code_of([&] { build_vertex_map(tri, tri, identity_sampler(2), -1, 3); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("build_vertex_map on the ball example") {
  const auto K = ball_source_complex(), L = ball_target_complex();
  const auto g = ball_projection_sampler();

  const auto nearest = build_vertex_map(K, L, g, 0, 5);
  CHECK(nearest.t == 0);
  // Nearest target vertex to g(0,0,1) ~ (0.143, 0.143) is (0,0).
  CHECK(nearest.map.assignment == std::vector<int>{0, 1, 2, 0});
  CHECK(check_star_condition(nearest.source, L, nearest.map, g, 5).pass());

  VertexMapOptions opts;
  opts.tie_break = TieBreak::SmallestIndex;
  const auto smallest = build_vertex_map(K, L, g, opts);
  CHECK(smallest.map.assignment == std::vector<int>{0, 0, 0, 0});

  const auto SdL = barycentric_subdivide(L, 1).complex;
  VertexMapOptions escalate;
  escalate.max_t = 2;
  const auto r = build_vertex_map(K, SdL, g, escalate);
  CHECK(check_star_condition(r.source, SdL, r.map, g, escalate.resolution).pass());
  CHECK_NOTHROW(validate_vertex_map(r.source, SdL, r.map));
}

TEST_CASE("maps returned by build_vertex_map pass the check at their resolution") {
  ts::Rng rng(13);
  for (int trial = 0; trial < 12; ++trial) {
    const int n = ts::uniform_int(rng, 1, 2);
    // Convex |L|, so a contraction keeps every image inside it.
    const auto base = ts::standard_simplex(n);
    const auto L = trial % 2 ? barycentric_subdivide(base, 1).complex : base;
    const auto K = barycentric_subdivide(L, 1).complex;
    const int res = ts::uniform_int(rng, 2, 5);
    // Contraction toward a vertex of L.
    const Point c = L.vertex(ts::uniform_int(rng, 0, static_cast<int>(L.num_vertices()) - 1));
    const double a = ts::uniform(rng, 0.3, 1.0);
    const FunctionSampler g("shrink", n, n, [c, a](const Eigen::VectorXd& x) -> Eigen::VectorXd { return c + a * (x - c); });
    const auto r = build_vertex_map(K, L, g, 2, res);
    CHECK(check_star_condition(r.source, L, r.map, g, res).pass());
  }
}

TEST_CASE("vertex map JSON") {
  const Json j = vertex_map_to_json(reference_map(), "k.json", "l.json");
  CHECK(j["source"] == "k.json");
  CHECK(j["target"] == "l.json");
  std::string src, tgt;
  const auto back = vertex_map_from_json(j, &src, &tgt);
  CHECK(back.assignment == reference_map().assignment);
  CHECK(src == "k.json");
  CHECK(code_of([] { vertex_map_from_json(Json::object()); }) == ErrorCode::FormatError);
}
