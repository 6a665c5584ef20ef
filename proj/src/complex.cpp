#include "simpnet/complex.hpp"

#include "detail.hpp"
#include "simpnet/error.hpp"
#include "simpnet/geometry.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

namespace simpnet {

bool is_face_of(std::span<const int> face, std::span<const int> simplex) {
  return std::includes(simplex.begin(), simplex.end(), face.begin(), face.end());
}

SimplicialComplex::SimplicialComplex(int ambient_dim, int dim, std::vector<Point> vertices,
                                     std::vector<IndexList> maximal)
    : ambient_dim_(ambient_dim), dim_(dim), vertices_(std::move(vertices)), maximal_(std::move(maximal)) {
  incident_.assign(vertices_.size(), {});
  for (std::size_t s = 0; s < maximal_.size(); ++s)
    for (int v : maximal_[s]) incident_[static_cast<std::size_t>(v)].push_back(static_cast<int>(s));
  id_ = detail::fnv1a_hex(vertices_, maximal_);
}

namespace {

struct Box {
  Eigen::VectorXd lo, hi;
};

Box bounding_box(const Eigen::MatrixXd& V) { return {V.rowwise().minCoeff(), V.rowwise().maxCoeff()}; }

bool boxes_overlap(const Box& a, const Box& b, double tol) {
  return ((a.lo.array() <= b.hi.array() + tol) && (b.lo.array() <= a.hi.array() + tol)).all();
}

}  // namespace

SimplicialComplex SimplicialComplex::build(int ambient_dim, std::vector<Point> vertices,
                                           std::vector<IndexList> maximal) {
  if (ambient_dim < 1) throw Error(ErrorCode::InvalidArgument, "ambient_dim must be positive");
  if (vertices.empty() || maximal.empty()) throw Error(ErrorCode::InvalidArgument, "empty vertex or simplex list");
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (vertices[i].size() != ambient_dim)
      throw Error(ErrorCode::InvalidArgument, "vertex " + std::to_string(i) + " has the wrong dimension");
    if (!vertices[i].allFinite())
      throw Error(ErrorCode::InvalidArgument, "vertex " + std::to_string(i) + " has a non-finite coordinate");
  }

  const std::size_t len = maximal.front().size();
  if (len == 0) throw Error(ErrorCode::InvalidArgument, "empty maximal simplex");
  for (auto& s : maximal) {
    if (s.size() != len) throw Error(ErrorCode::NonPure, "maximal simplices have different dimensions");
    for (int v : s)
      if (v < 0 || static_cast<std::size_t>(v) >= vertices.size())
        throw Error(ErrorCode::IndexOutOfRange, "vertex index " + std::to_string(v) + " out of range");
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end())
      throw Error(ErrorCode::AffinelyDependent, "maximal simplex repeats a vertex");
  }
  const int dim = static_cast<int>(len) - 1;
  if (dim > ambient_dim) throw Error(ErrorCode::AffinelyDependent, "simplex dimension exceeds ambient dimension");

  {
    std::set<IndexList> seen;
    for (const auto& s : maximal)
      if (!seen.insert(s).second) throw Error(ErrorCode::InvalidArgument, "duplicate maximal simplex");
  }
  {
    std::vector<bool> used(vertices.size(), false);
    for (const auto& s : maximal)
      for (int v : s) used[static_cast<std::size_t>(v)] = true;
    for (std::size_t i = 0; i < used.size(); ++i)
      if (!used[i])
        throw Error(ErrorCode::NonPure, "vertex " + std::to_string(i) + " belongs to no maximal simplex");
  }

  std::vector<BarycentricChart> charts;
  std::vector<Box> boxes;
  charts.reserve(maximal.size());
  for (std::size_t s = 0; s < maximal.size(); ++s) {
    std::vector<Point> pts;
    for (int v : maximal[s]) pts.push_back(vertices[static_cast<std::size_t>(v)]);
    if (!is_affinely_independent(pts))
      throw Error(ErrorCode::AffinelyDependent, "maximal simplex " + std::to_string(s) + " is degenerate");
    Eigen::MatrixXd V(ambient_dim, static_cast<Eigen::Index>(len));
    for (std::size_t j = 0; j < len; ++j) V.col(static_cast<Eigen::Index>(j)) = pts[j];
    try {
      charts.push_back(BarycentricChart::make(V));
    } catch (const Error&) {
      throw Error(ErrorCode::AffinelyDependent, "maximal simplex " + std::to_string(s) + " is ill-conditioned");
    }
    boxes.push_back(bounding_box(V));
  }

  // Sweep over the first coordinate so only box-overlapping pairs are tested.
  constexpr double kTol = kDefaultTol;
  std::vector<int> order(maximal.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return boxes[static_cast<std::size_t>(a)].lo(0) < boxes[static_cast<std::size_t>(b)].lo(0);
  });
  for (std::size_t p = 0; p < order.size(); ++p) {
    const auto a = static_cast<std::size_t>(order[p]);
    for (std::size_t q = p + 1; q < order.size(); ++q) {
      const auto b = static_cast<std::size_t>(order[q]);
      if (boxes[b].lo(0) > boxes[a].hi(0) + kTol) break;
      if (!boxes_overlap(boxes[a], boxes[b], kTol)) continue;
      if (detail::overlaps_off_shared_face(vertices, maximal[a], charts[a], maximal[b], charts[b], kTol))
        throw Error(ErrorCode::BadIntersection, "maximal simplices " + std::to_string(std::min(a, b)) + " and " +
                                                    std::to_string(std::max(a, b)) +
                                                    " overlap outside their shared face");
    }
  }

  return SimplicialComplex(ambient_dim, dim, std::move(vertices), std::move(maximal));
}

Eigen::MatrixXd SimplicialComplex::simplex_vertices(int s) const {
  const auto& idx = maximal(s);
  Eigen::MatrixXd V(ambient_dim_, static_cast<Eigen::Index>(idx.size()));
  for (std::size_t j = 0; j < idx.size(); ++j) V.col(static_cast<Eigen::Index>(j)) = vertex(idx[j]);
  return V;
}

bool SimplicialComplex::has_face(std::span<const int> indices) const {
  if (indices.empty()) return false;
  if (!std::is_sorted(indices.begin(), indices.end())) return false;
  if (indices.front() < 0 || static_cast<std::size_t>(indices.back()) >= vertices_.size()) return false;
  for (int s : incident(indices.front()))
    if (is_face_of(indices, maximal(s))) return true;
  return false;
}

namespace {

// Every non-empty subset of `simplex` of size d+1 (d = -1 means all sizes).
void collect_faces(const IndexList& simplex, int d, std::set<SimplexRef>& out) {
  const int n = static_cast<int>(simplex.size());
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    if (d >= 0 && std::popcount(mask) != d + 1) continue;
    SimplexRef f;
    for (int j = 0; j < n; ++j)
      if (mask & (1u << j)) f.indices.push_back(simplex[static_cast<std::size_t>(j)]);
    out.insert(std::move(f));
  }
}

}  // namespace

std::vector<SimplexRef> SimplicialComplex::faces(int d) const {
  std::set<SimplexRef> out;
  if (d < 0 || d > dim_) return {};
  for (const auto& s : maximal_) collect_faces(s, d, out);
  return {out.begin(), out.end()};
}

std::vector<SimplexRef> SimplicialComplex::all_simplices() const {
  std::set<SimplexRef> out;
  for (const auto& s : maximal_) collect_faces(s, -1, out);
  return {out.begin(), out.end()};
}

std::vector<SimplexRef> star(const SimplicialComplex& K, const SimplexRef& sigma) {
  if (!K.has_face(sigma.indices)) throw Error(ErrorCode::NotASimplex, "simplex is not a face of the complex");
  std::set<SimplexRef> out;
  for (int s : K.incident(sigma.indices.front()))
    if (is_face_of(sigma.indices, K.maximal(s))) collect_faces(K.maximal(s), -1, out);
  return {out.begin(), out.end()};
}

namespace {

SubdivisionRecord subdivide_once(const SimplicialComplex& K) {
  const auto simplices = K.all_simplices();
  std::map<IndexList, int> new_index;
  std::vector<Point> coords;
  coords.reserve(simplices.size());
  for (std::size_t i = 0; i < simplices.size(); ++i) {
    new_index.emplace(simplices[i].indices, static_cast<int>(i));
    Point c = Point::Zero(K.ambient_dim());
    for (int v : simplices[i].indices) c += K.vertex(v);
    coords.push_back(c / static_cast<double>(simplices[i].indices.size()));
  }

  std::vector<IndexList> maximal;
  const int n = K.dim();
  for (const auto& parent : K.maximal_simplices()) {
    IndexList perm(parent.size());
    std::iota(perm.begin(), perm.end(), 0);
    do {
      IndexList chain;
      IndexList face;
      for (int j = 0; j <= n; ++j) {
        face.insert(std::upper_bound(face.begin(), face.end(), parent[static_cast<std::size_t>(perm[static_cast<std::size_t>(j)])]),
                    parent[static_cast<std::size_t>(perm[static_cast<std::size_t>(j)])]);
        chain.push_back(new_index.at(face));
      }
      std::sort(chain.begin(), chain.end());
      maximal.push_back(std::move(chain));
    } while (std::next_permutation(perm.begin(), perm.end()));
  }

  SubdivisionRecord rec{K.id(),
                        ComplexAccess::trusted(K.ambient_dim(), n, std::move(coords), std::move(maximal)),
                        1,
                        simplices};
  return rec;
}

}  // namespace

SubdivisionRecord barycentric_subdivide(const SimplicialComplex& K, int t) {
  if (t < 1) throw Error(ErrorCode::InvalidArgument, "subdivision count must be at least 1");
  if (K.dim() == 0) {
    std::vector<SimplexRef> prov;
    for (std::size_t v = 0; v < K.num_vertices(); ++v) prov.push_back({{static_cast<int>(v)}});
    return {K.id(), K, t, std::move(prov)};
  }
  SubdivisionRecord rec = subdivide_once(K);
  for (int i = 1; i < t; ++i) {
    SubdivisionRecord next = subdivide_once(rec.complex);
    rec.complex = std::move(next.complex);
    rec.vertex_provenance = std::move(next.vertex_provenance);
  }
  rec.source_id = K.id();
  rec.t = t;
  return rec;
}

double diameter(const Eigen::MatrixXd& V) {
  double best = 0.0;
  for (Eigen::Index i = 0; i < V.cols(); ++i)
    for (Eigen::Index j = i + 1; j < V.cols(); ++j) best = std::max(best, (V.col(i) - V.col(j)).norm());
  return best;
}

double mesh(const SimplicialComplex& K) {
  double best = 0.0;
  for (std::size_t s = 0; s < K.num_maximal(); ++s)
    best = std::max(best, diameter(K.simplex_vertices(static_cast<int>(s))));
  return best;
}

int subdivision_count_for_mesh(double m, int n, double epsilon) {
  if (!(epsilon > 0.0)) throw Error(ErrorCode::NonPositiveEpsilon, "epsilon must be positive");
  if (epsilon >= m || n == 0) return 0;
  const double ratio = static_cast<double>(n) / (n + 1);
  const double bound = (std::log(m) - std::log(epsilon)) / (std::log(n + 1.0) - std::log(static_cast<double>(n)));
  int t = std::max(0, static_cast<int>(std::ceil(bound)));
  // Settle rounding at integer boundaries against the ratio bound itself.
  while (t > 0 && m * std::pow(ratio, t - 1) <= epsilon) --t;
  while (m * std::pow(ratio, t) > epsilon) ++t;
  return t;
}

int subdivision_count_for_mesh(const SimplicialComplex& K, double epsilon) {
  return subdivision_count_for_mesh(mesh(K), K.dim(), epsilon);
}

}  // namespace simpnet
