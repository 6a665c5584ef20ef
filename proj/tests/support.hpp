// Random instance families and independent oracles shared by the test suites.
// Nothing here calls the library's solvers: coordinates come from Cramer's
// rule, subdivision counts from subset chains, stars from exhaustive pairs.
#pragma once

#include "simpnet/approx.hpp"
#include "simpnet/complex.hpp"
#include "simpnet/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <vector>

namespace testing_support {

using simpnet::IndexList;
using simpnet::Point;
using simpnet::SimplicialComplex;
using simpnet::VertexMap;
using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double a = 0.0, double b = 1.0) {
  return std::uniform_real_distribution<double>(a, b)(rng);
}

inline int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

/// Flat Dirichlet weights of length d+1; with `face` true, a random subset of
/// coordinates is zeroed so the point lands on a proper face.
inline Eigen::VectorXd random_weights(Rng& rng, int d, bool face = false) {
  Eigen::VectorXd w(d + 1);
  for (int i = 0; i <= d; ++i) w(i) = -std::log(1.0 - uniform(rng));
  if (face && d > 0) {
    const int zeros = uniform_int(rng, 1, d);
    std::vector<int> idx(static_cast<std::size_t>(d + 1));
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), rng);
    for (int z = 0; z < zeros; ++z) w(idx[static_cast<std::size_t>(z)]) = 0.0;
  }
  return w / w.sum();
}

/// Kuhn (Freudenthal) triangulation of a grid of `cells`^n unit cubes, each
/// cube split into n! simplices along coordinate permutations, with interior
/// vertices jittered by at most `jitter`. Returns vertices and simplices.
struct RawComplex {
  int ambient = 0;
  std::vector<Point> vertices;
  std::vector<IndexList> simplices;
};

inline RawComplex kuhn_grid(int n, int cells, double scale, double jitter, Rng& rng) {
  RawComplex raw;
  raw.ambient = n;
  std::map<std::vector<int>, int> index_of;
  auto vertex_id = [&](const std::vector<int>& lattice) {
    auto [it, fresh] = index_of.try_emplace(lattice, static_cast<int>(raw.vertices.size()));
    if (fresh) {
      Point p(n);
      bool interior = true;
      for (int c = 0; c < n; ++c) {
        p(c) = scale * lattice[static_cast<std::size_t>(c)];
        interior = interior && lattice[static_cast<std::size_t>(c)] > 0 && lattice[static_cast<std::size_t>(c)] < cells;
      }
      if (interior)
        for (int c = 0; c < n; ++c) p(c) += scale * uniform(rng, -jitter, jitter);
      raw.vertices.push_back(p);
    }
    return it->second;
  };
  std::vector<int> base(static_cast<std::size_t>(n), 0);
  std::function<void(int)> walk = [&](int axis) {
    if (axis == n) {
      std::vector<int> perm(static_cast<std::size_t>(n));
      std::iota(perm.begin(), perm.end(), 0);
      do {
        std::vector<int> cur = base;
        IndexList s{vertex_id(cur)};
        for (int c : perm) {
          ++cur[static_cast<std::size_t>(c)];
          s.push_back(vertex_id(cur));
        }
        std::sort(s.begin(), s.end());
        raw.simplices.push_back(s);
      } while (std::next_permutation(perm.begin(), perm.end()));
      return;
    }
    for (int i = 0; i < cells; ++i) {
      base[static_cast<std::size_t>(axis)] = i;
      walk(axis + 1);
    }
  };
  walk(0);
  return raw;
}

/// Keeps `count` random simplices of `raw` and reindexes the used vertices.
inline SimplicialComplex random_subcomplex(const RawComplex& raw, std::size_t count, Rng& rng) {
  std::vector<std::size_t> order(raw.simplices.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  order.resize(std::min(count, order.size()));
  std::map<int, int> remap;
  std::vector<Point> verts;
  std::vector<IndexList> simplices;
  for (std::size_t o : order) {
    IndexList s;
    for (int v : raw.simplices[o]) {
      auto [it, fresh] = remap.try_emplace(v, static_cast<int>(verts.size()));
      if (fresh) verts.push_back(raw.vertices[static_cast<std::size_t>(v)]);
      s.push_back(it->second);
    }
    std::sort(s.begin(), s.end());
    simplices.push_back(s);
  }
  return SimplicialComplex::build(raw.ambient, std::move(verts), std::move(simplices));
}

/// Random pure complex of dimension n with at most `max_k` maximal simplices.
inline SimplicialComplex random_complex(int n, std::size_t max_k, Rng& rng) {
  const int cells = n == 1 ? 12 : (n == 2 ? 4 : 2);
  const double scale = uniform(rng, 0.3, 2.0);
  const RawComplex raw = kuhn_grid(n, cells, scale, 0.08, rng);
  const std::size_t k = static_cast<std::size_t>(uniform_int(rng, 1, static_cast<int>(std::min(max_k, raw.simplices.size()))));
  return random_subcomplex(raw, k, rng);
}

inline SimplicialComplex standard_simplex(int n) {
  std::vector<Point> verts;
  IndexList all;
  for (int i = 0; i <= n; ++i) {
    Point p = Point::Zero(n);
    if (i > 0) p(i - 1) = 1.0;
    verts.push_back(p);
    all.push_back(i);
  }
  return SimplicialComplex::build(n, std::move(verts), {all});
}

/// Barycentric coordinates by Cramer's rule on the homogeneous system.
inline Eigen::VectorXd cramer_coordinates(const Eigen::MatrixXd& V, const Point& x) {
  const Eigen::Index d = V.cols();
  Eigen::MatrixXd H(d, d);
  H.topRows(d - 1) = V;
  H.row(d - 1).setOnes();
  Eigen::VectorXd rhs(d);
  rhs.head(d - 1) = x;
  rhs(d - 1) = 1.0;
  const double det = H.determinant();
  Eigen::VectorXd lambda(d);
  for (Eigen::Index j = 0; j < d; ++j) {
    Eigen::MatrixXd Hj = H;
    Hj.col(j) = rhs;
    lambda(j) = Hj.determinant() / det;
  }
  return lambda;
}

/// Simplicial map by exhaustive search with Cramer coordinates.
inline Point oracle_simplicial_map(const SimplicialComplex& K, const SimplicialComplex& L, const VertexMap& phi,
                                   const Point& x, double tol = 1e-9) {
  for (std::size_t s = 0; s < K.num_maximal(); ++s) {
    const Eigen::VectorXd lambda = cramer_coordinates(K.simplex_vertices(static_cast<int>(s)), x);
    if (lambda.minCoeff() < -tol) continue;
    Point y = Point::Zero(L.ambient_dim());
    const auto& idx = K.maximal(static_cast<int>(s));
    for (std::size_t j = 0; j < idx.size(); ++j)
      y += lambda(static_cast<Eigen::Index>(j)) * L.vertex(phi.assignment[static_cast<std::size_t>(idx[j])]);
    return y;
  }
  throw simpnet::Error(simpnet::ErrorCode::OutsideDomain, "oracle: point outside");
}

/// Maximal chains of nonempty subsets of {0..n} ordered by strict inclusion.
inline std::size_t count_flags(int n) {
  const unsigned full = (1u << (n + 1)) - 1;
  std::function<std::size_t(unsigned)> extend = [&](unsigned cur) -> std::size_t {
    if (cur == full) return 1;
    std::size_t total = 0;
    for (int v = 0; v <= n; ++v)
      if (!(cur & (1u << v))) total += extend(cur | (1u << v));
    return total;
  };
  std::size_t total = 0;
  for (int v = 0; v <= n; ++v) total += extend(1u << v);
  return total;
}

/// Barycenter chains of a single simplex as sorted coordinate tuples of the
/// chain's vertices, brute force over subsets.
inline std::set<std::vector<std::vector<double>>> flag_simplices(const Eigen::MatrixXd& V) {
  const int n = static_cast<int>(V.cols()) - 1;
  const unsigned full = (1u << (n + 1)) - 1;
  auto barycenter = [&](unsigned mask) {
    Point b = Point::Zero(V.rows());
    int c = 0;
    for (int v = 0; v <= n; ++v)
      if (mask & (1u << v)) {
        b += V.col(v);
        ++c;
      }
    b /= c;
    return std::vector<double>(b.data(), b.data() + b.size());
  };
  std::set<std::vector<std::vector<double>>> out;
  std::vector<unsigned> chain;
  std::function<void(unsigned)> extend = [&](unsigned cur) {
    chain.push_back(cur);
    if (cur == full) {
      std::vector<std::vector<double>> pts;
      for (unsigned m : chain) pts.push_back(barycenter(m));
      std::sort(pts.begin(), pts.end());
      out.insert(pts);
    } else {
      for (int v = 0; v <= n; ++v)
        if (!(cur & (1u << v))) extend(cur | (1u << v));
    }
    chain.pop_back();
  };
  for (int v = 0; v <= n; ++v) extend(1u << v);
  return out;
}

/// Every nonempty face of every maximal simplex, by subset enumeration.
inline std::set<IndexList> all_faces(const SimplicialComplex& K) {
  std::set<IndexList> out;
  for (const auto& s : K.maximal_simplices()) {
    const unsigned n = static_cast<unsigned>(s.size());
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
      IndexList f;
      for (unsigned b = 0; b < n; ++b)
        if (mask & (1u << b)) f.push_back(s[b]);
      out.insert(f);
    }
  }
  return out;
}

inline bool subset_of(const IndexList& a, const IndexList& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); }

/// st(sigma) as all mu for which some simplex xi of K has sigma and mu as faces.
inline std::set<IndexList> oracle_star(const SimplicialComplex& K, const IndexList& sigma) {
  const auto faces = all_faces(K);
  std::set<IndexList> out;
  for (const auto& xi : faces) {
    if (!subset_of(sigma, xi)) continue;
    for (const auto& mu : faces)
      if (subset_of(mu, xi)) out.insert(mu);
  }
  return out;
}

inline double oracle_mesh(const SimplicialComplex& K) {
  double best = 0.0;
  for (const auto& s : K.maximal_simplices())
    for (std::size_t a = 0; a < s.size(); ++a)
      for (std::size_t b = a + 1; b < s.size(); ++b)
        best = std::max(best, (K.vertex(s[a]) - K.vertex(s[b])).norm());
  return best;
}

/// A random instance of (K, L, phi) for the exact-realization property.
struct MapInstance {
  SimplicialComplex K;
  SimplicialComplex L;
  VertexMap phi;
  int family = 0;
};

/// Family 0: all of K maps into the vertices of one maximal simplex of L.
inline VertexMap map_into_one_simplex(const SimplicialComplex& K, const SimplicialComplex& L, Rng& rng) {
  const auto& mu = L.maximal(uniform_int(rng, 0, static_cast<int>(L.num_maximal()) - 1));
  VertexMap phi{K.id(), L.id(), std::vector<int>(K.num_vertices())};
  for (auto& a : phi.assignment) a = mu[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(mu.size()) - 1))];
  return phi;
}

/// Family 2: an affine map followed by nearest-vertex rounding; empty when the
/// rounded map breaks the simplex condition.
inline std::optional<VertexMap> affine_rounded_map(const SimplicialComplex& K, const SimplicialComplex& L, Rng& rng) {
  const int n = K.ambient_dim(), m = L.ambient_dim();
  Point kmin = K.vertex(0), kmax = K.vertex(0), lmin = L.vertex(0), lmax = L.vertex(0);
  for (const auto& v : K.vertices()) {
    kmin = kmin.cwiseMin(v);
    kmax = kmax.cwiseMax(v);
  }
  for (const auto& v : L.vertices()) {
    lmin = lmin.cwiseMin(v);
    lmax = lmax.cwiseMax(v);
  }
  Eigen::MatrixXd A(m, n);
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < n; ++c) A(r, c) = uniform(rng, -1.0, 1.0);
  VertexMap phi{K.id(), L.id(), std::vector<int>(K.num_vertices())};
  for (std::size_t v = 0; v < K.num_vertices(); ++v) {
    Eigen::VectorXd u = (K.vertex(static_cast<int>(v)) - kmin).cwiseQuotient((kmax - kmin).cwiseMax(1e-12));
    Eigen::VectorXd y = A * u;
    y = (y.array() - y.minCoeff()).matrix();
    const Eigen::VectorXd target = lmin + (lmax - lmin).cwiseProduct(y.cwiseMin(1.0));
    int best = 0;
    for (std::size_t w = 1; w < L.num_vertices(); ++w)
      if ((L.vertex(static_cast<int>(w)) - target).norm() < (L.vertex(best) - target).norm()) best = static_cast<int>(w);
    phi.assignment[v] = best;
  }
  try {
    simpnet::validate_vertex_map(K, L, phi);
  } catch (const simpnet::Error&) {
    return std::nullopt;
  }
  return phi;
}

/// Cycles through three families: maps into one simplex, the retraction
/// Sd L0 -> L0 sending each barycenter to a vertex of its simplex, and affine
/// maps with nearest-vertex rounding.
inline MapInstance random_map_instance(int index, Rng& rng) {
  const int family = index % 3;
  const int n = uniform_int(rng, 1, 3);
  if (family == 1) {
    const std::size_t limit = n == 1 ? 15 : (n == 2 ? 5 : 1);
    SimplicialComplex L = random_complex(n, limit, rng);
    auto rec = simpnet::barycentric_subdivide(L, 1);
    VertexMap phi{rec.complex.id(), L.id(), std::vector<int>(rec.complex.num_vertices())};
    for (std::size_t v = 0; v < phi.assignment.size(); ++v) {
      const auto& src = rec.vertex_provenance[v].indices;
      phi.assignment[v] = src[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(src.size()) - 1))];
    }
    return {std::move(rec.complex), std::move(L), std::move(phi), family};
  }
  const int m = uniform_int(rng, 1, 3);
  SimplicialComplex K = random_complex(n, 30, rng);
  SimplicialComplex L = random_complex(m, 30, rng);
  if (family == 2)
    if (auto phi = affine_rounded_map(K, L, rng)) return {std::move(K), std::move(L), std::move(*phi), family};
  VertexMap phi = map_into_one_simplex(K, L, rng);
  return {std::move(K), std::move(L), std::move(phi), 0};
}

/// `count` points of |K|: interior draws and face draws, spread over every
/// maximal simplex.
inline std::vector<Point> sample_points(const SimplicialComplex& K, std::size_t count, Rng& rng) {
  std::vector<Point> pts;
  pts.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const int s = static_cast<int>(i % K.num_maximal());
    pts.push_back(K.simplex_vertices(s) * random_weights(rng, K.dim(), i % 4 == 3));
  }
  return pts;
}

}  // namespace testing_support
