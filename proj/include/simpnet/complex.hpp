#pragma once

#include <Eigen/Dense>

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace simpnet {

using Point = Eigen::VectorXd;
using IndexList = std::vector<int>;

/// A face of a complex, named by its sorted vertex indices.
struct SimplexRef {
  IndexList indices;

  int dim() const { return static_cast<int>(indices.size()) - 1; }

  /// Canonical order: by dimension, then lexicographically.
  friend std::strong_ordering operator<=>(const SimplexRef& a, const SimplexRef& b) {
    if (auto c = a.indices.size() <=> b.indices.size(); c != 0) return c;
    return a.indices <=> b.indices;
  }
  friend bool operator==(const SimplexRef&, const SimplexRef&) = default;
};

/// True when every index of `face` appears in `simplex` (both sorted).
bool is_face_of(std::span<const int> face, std::span<const int> simplex);

/// Finite pure geometric simplicial complex in R^ambient_dim.
///
/// Immutable after construction. `build` validates purity, index ranges,
/// affine independence of every maximal simplex and the pairwise
/// intersection property; indices inside each maximal simplex are stored
/// sorted, the order of the maximal simplices is kept as given.
class SimplicialComplex {
 public:
  static SimplicialComplex build(int ambient_dim, std::vector<Point> vertices,
                                 std::vector<IndexList> maximal_simplices);

  int ambient_dim() const { return ambient_dim_; }
  int dim() const { return dim_; }

  std::size_t num_vertices() const { return vertices_.size(); }
  const std::vector<Point>& vertices() const { return vertices_; }
  const Point& vertex(int i) const { return vertices_[static_cast<std::size_t>(i)]; }

  std::size_t num_maximal() const { return maximal_.size(); }
  const std::vector<IndexList>& maximal_simplices() const { return maximal_; }
  const IndexList& maximal(int s) const { return maximal_[static_cast<std::size_t>(s)]; }

  /// Maximal simplices containing vertex v, ascending.
  const std::vector<int>& incident(int v) const { return incident_[static_cast<std::size_t>(v)]; }

  /// ambient_dim x (dim+1) matrix whose columns are the vertices of maximal simplex s.
  Eigen::MatrixXd simplex_vertices(int s) const;

  /// True when `indices` (sorted) is a face of some maximal simplex.
  bool has_face(std::span<const int> indices) const;

  /// All faces of dimension d, canonical order.
  std::vector<SimplexRef> faces(int d) const;
  /// Every simplex of the complex, canonical order.
  std::vector<SimplexRef> all_simplices() const;

  /// Content fingerprint (hex FNV-1a over coordinates and index lists).
  const std::string& id() const { return id_; }

 private:
  SimplicialComplex(int ambient_dim, int dim, std::vector<Point> vertices,
                    std::vector<IndexList> maximal);

  friend struct ComplexAccess;

  int ambient_dim_ = 0;
  int dim_ = 0;
  std::vector<Point> vertices_;
  std::vector<IndexList> maximal_;
  std::vector<std::vector<int>> incident_;
  std::string id_;
};

/// st(sigma): every face of every maximal simplex that has sigma as a face.
std::vector<SimplexRef> star(const SimplicialComplex& K, const SimplexRef& sigma);

struct SubdivisionRecord {
  std::string source_id;
  SimplicialComplex complex;
  int t = 0;
  /// For each vertex of `complex`, the simplex of Sd^{t-1} K it is the barycenter of.
  std::vector<SimplexRef> vertex_provenance;
};

/// Sd^t K by flag enumeration; vertex identity is combinatorial.
///
/// Vertices of Sd K are the simplices of K in canonical order, so the
/// original vertices keep their indices. The maximal simplices produced from
/// parent simplex i are contiguous and ordered by the permutation that
/// generated their chain.
SubdivisionRecord barycentric_subdivide(const SimplicialComplex& K, int t);

/// Largest pairwise vertex distance of a single simplex (columns are vertices).
double diameter(const Eigen::MatrixXd& simplex_vertices);

double mesh(const SimplicialComplex& K);

/// Smallest t with mesh(K) * (n/(n+1))^t <= epsilon.
int subdivision_count_for_mesh(const SimplicialComplex& K, double epsilon);
int subdivision_count_for_mesh(double mesh_value, int dim, double epsilon);

}  // namespace simpnet
