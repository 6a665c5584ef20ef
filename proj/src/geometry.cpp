#include "simpnet/geometry.hpp"

#include "simpnet/error.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace simpnet {

bool is_affinely_independent(std::span<const Point> points, double tol) {
  if (points.empty()) throw Error(ErrorCode::InvalidArgument, "no points given");
  const Eigen::Index n = points.front().size();
  if (static_cast<Eigen::Index>(points.size()) > n + 1)
    throw Error(ErrorCode::TooManyPoints, std::to_string(points.size()) + " points in R^" + std::to_string(n));
  if (points.size() == 1) return true;
  Eigen::MatrixXd D(n, static_cast<Eigen::Index>(points.size()) - 1);
  for (std::size_t j = 1; j < points.size(); ++j) {
    if (points[j].size() != n) throw Error(ErrorCode::InvalidArgument, "mixed point dimensions");
    D.col(static_cast<Eigen::Index>(j) - 1) = points[j] - points.front();
  }
  const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(D).singularValues();
  return sv(0) > 0.0 && sv(sv.size() - 1) > tol * sv(0);
}

BarycentricChart BarycentricChart::make(const Eigen::MatrixXd& V) {
  const Eigen::Index n = V.rows(), d1 = V.cols();
  if (d1 < 1 || d1 > n + 1) throw Error(ErrorCode::DegenerateSimplex, "vertex count does not fit the ambient space");
  BarycentricChart chart;
  chart.vertices = V;
  if (d1 == n + 1) {
    Eigen::MatrixXd H(n + 1, n + 1);
    H.topRows(n) = V;
    H.row(n).setOnes();
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(H);
    const Eigen::MatrixXd inv = lu.inverse();
    // Exact 1-norm condition number; the LU rcond estimate misses zero pivots.
    const double cond = H.cwiseAbs().colwise().sum().maxCoeff() * inv.cwiseAbs().colwise().sum().maxCoeff();
    if (!inv.allFinite() || !(cond <= kMaxCondition))
      throw Error(ErrorCode::DegenerateSimplex, "homogeneous vertex matrix is ill-conditioned");
    chart.linear = inv.leftCols(n);
    chart.offset = inv.col(n);
    return chart;
  }
  if (d1 == 1) {
    chart.linear = Eigen::MatrixXd::Zero(1, n);
    chart.offset = Eigen::VectorXd::Ones(1);
    return chart;
  }
  // Lower-dimensional simplex: least squares on the affine hull.
  const Eigen::VectorXd v0 = V.col(0);
  const Eigen::MatrixXd D = V.rightCols(d1 - 1).colwise() - v0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(D, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd sv = svd.singularValues();
  if (!(sv(sv.size() - 1) > 0.0) || sv(0) / sv(sv.size() - 1) > kMaxCondition)
    throw Error(ErrorCode::DegenerateSimplex, "edge vectors are nearly dependent");
  const Eigen::MatrixXd P = svd.matrixV() * sv.cwiseInverse().asDiagonal() * svd.matrixU().transpose();
  chart.linear.resize(d1, n);
  chart.linear.row(0) = -P.colwise().sum();
  chart.linear.bottomRows(d1 - 1) = P;
  chart.offset.resize(d1);
  const Eigen::VectorXd Pv0 = P * v0;
  chart.offset(0) = 1.0 + Pv0.sum();
  chart.offset.tail(d1 - 1) = -Pv0;
  return chart;
}

double BarycentricChart::hull_residual(const Point& x, const Eigen::VectorXd& coords) const {
  if (full_dimensional()) return 0.0;
  return (vertices * coords - x).norm();
}

Eigen::VectorXd barycentric_coordinates(const Eigen::MatrixXd& V, const Point& x, double tol) {
  if (x.size() != V.rows()) throw Error(ErrorCode::InvalidArgument, "point dimension mismatch");
  const auto chart = BarycentricChart::make(V);
  Eigen::VectorXd lam = chart.coordinates(x);
  const double scale = std::max(1.0, V.cwiseAbs().maxCoeff());
  if (chart.hull_residual(x, lam) > tol * scale)
    throw Error(ErrorCode::OffAffineHull, "point is not on the affine hull of the simplex");
  return lam;
}

Eigen::VectorXd barycentric_coordinates(std::span<const Point> simplex_vertices, const Point& x, double tol) {
  if (simplex_vertices.empty()) throw Error(ErrorCode::DegenerateSimplex, "empty simplex");
  Eigen::MatrixXd V(simplex_vertices.front().size(), static_cast<Eigen::Index>(simplex_vertices.size()));
  for (std::size_t j = 0; j < simplex_vertices.size(); ++j) {
    if (simplex_vertices[j].size() != V.rows()) throw Error(ErrorCode::InvalidArgument, "mixed vertex dimensions");
    V.col(static_cast<Eigen::Index>(j)) = simplex_vertices[j];
  }
  return barycentric_coordinates(V, x, tol);
}

SolveCache::SolveCache(const SimplicialComplex& K) {
  charts_.reserve(K.num_maximal());
  for (std::size_t s = 0; s < K.num_maximal(); ++s)
    charts_.push_back(BarycentricChart::make(K.simplex_vertices(static_cast<int>(s))));
}

PointLocator::PointLocator(const SimplicialComplex& K, double tol) : complex_(&K), cache_(K), tol_(tol) {
  build_buckets();
}

namespace {

struct Box {
  Eigen::VectorXd lo, hi;
};

// A point with every coordinate >= -tol sits within (d+1) tol diam of the
// simplex; inflating by that much keeps the bucket filter exact.
Box inflated_box(const Eigen::MatrixXd& V, double tol) {
  Box b{V.rowwise().minCoeff(), V.rowwise().maxCoeff()};
  const double diam = (b.hi - b.lo).norm();
  const double pad = static_cast<double>(V.cols()) * tol * diam + tol + 1e-12 * (1.0 + b.hi.cwiseAbs().maxCoeff());
  b.lo.array() -= pad;
  b.hi.array() += pad;
  return b;
}

}  // namespace

void PointLocator::build_buckets() {
  const std::size_t k = cache_.size();
  const Eigen::Index n = complex_->ambient_dim();
  std::vector<Box> boxes;
  boxes.reserve(k);
  for (std::size_t s = 0; s < k; ++s) boxes.push_back(inflated_box(cache_.chart(static_cast<int>(s)).vertices, tol_));
  lo_ = boxes.front().lo;
  Eigen::VectorXd hi = boxes.front().hi;
  for (const auto& b : boxes) {
    lo_ = lo_.cwiseMin(b.lo);
    hi = hi.cwiseMax(b.hi);
  }
  // About one cell per simplex.
  const int per_axis = std::max(1, static_cast<int>(std::floor(std::pow(static_cast<double>(k), 1.0 / static_cast<double>(n)))));
  cells_per_axis_.assign(static_cast<std::size_t>(n), per_axis);
  cell_ = (hi - lo_) / per_axis;
  std::size_t total = 1;
  for (int c : cells_per_axis_) total *= static_cast<std::size_t>(c);

  auto cell_range = [&](const Box& b, std::vector<int>& first, std::vector<int>& last) {
    for (Eigen::Index a = 0; a < n; ++a) {
      const auto i = static_cast<std::size_t>(a);
      const auto clamp = [&](double v) {
        return std::clamp(static_cast<int>(std::floor(cell_(a) > 0 ? v / cell_(a) : 0.0)), 0, cells_per_axis_[i] - 1);
      };
      first[i] = clamp(b.lo(a) - lo_(a));
      last[i] = clamp(b.hi(a) - lo_(a));
    }
  };
  // Two passes over the box ranges: count, then fill (CSR).
  std::vector<std::size_t> counts(total + 1, 0);
  std::vector<int> first(static_cast<std::size_t>(n)), last(static_cast<std::size_t>(n)), cur(static_cast<std::size_t>(n));
  for (int pass = 0; pass < 2; ++pass) {
    std::vector<std::size_t> fill;
    if (pass == 1) {
      bucket_offsets_.assign(total + 1, 0);
      for (std::size_t c = 0; c < total; ++c) bucket_offsets_[c + 1] = bucket_offsets_[c] + counts[c];
      bucket_data_.resize(bucket_offsets_.back());
      fill.assign(bucket_offsets_.begin(), bucket_offsets_.end() - 1);
    }
    for (std::size_t s = 0; s < k; ++s) {
      cell_range(boxes[s], first, last);
      cur = first;
      while (true) {
        std::size_t flat = 0;
        for (std::size_t a = cur.size(); a-- > 0;) flat = flat * static_cast<std::size_t>(cells_per_axis_[a]) + static_cast<std::size_t>(cur[a]);
        if (pass == 0)
          ++counts[flat];
        else
          bucket_data_[fill[flat]++] = static_cast<int>(s);
        std::size_t a = 0;
        while (a < cur.size() && ++cur[a] > last[a]) cur[a] = first[a], ++a;
        if (a == cur.size()) break;
      }
    }
  }
}

std::span<const int> PointLocator::candidates(const Point& x) const {
  std::size_t flat = 0;
  for (Eigen::Index a = x.size(); a-- > 0;) {
    const double off = x(a) - lo_(a);
    const int cells = cells_per_axis_[static_cast<std::size_t>(a)];
    if (off < 0.0 || off > cell_(a) * cells) return {};
    const int c = std::min(cells - 1, cell_(a) > 0 ? static_cast<int>(off / cell_(a)) : 0);
    flat = flat * static_cast<std::size_t>(cells) + static_cast<std::size_t>(c);
  }
  return {bucket_data_.data() + bucket_offsets_[flat], bucket_offsets_[flat + 1] - bucket_offsets_[flat]};
}

std::optional<Eigen::VectorXd> PointLocator::coordinates_if_inside(int s, const Point& x) const {
  const auto& chart = cache_.chart(s);
  Eigen::VectorXd lam = chart.coordinates(x);
  if (lam.minCoeff() < -tol_) return std::nullopt;
  if (chart.hull_residual(x, lam) > tol_) return std::nullopt;
  return lam;
}

BarycentricLocation PointLocator::locate(const Point& x) const {
  if (x.size() != complex_->ambient_dim()) throw Error(ErrorCode::InvalidArgument, "point dimension mismatch");
  BarycentricLocation loc{x, {}};
  if (!x.allFinite()) return loc;
  for (int s : candidates(x))
    if (auto lam = coordinates_if_inside(s, x)) loc.hits.push_back({s, *lam});
  return loc;
}

int PointLocator::find_first(const Point& x) const {
  if (x.size() != complex_->ambient_dim() || !x.allFinite()) return -1;
  for (int s : candidates(x))
    if (contains(s, x)) return s;
  return -1;
}

BarycentricLocation locate(const SimplicialComplex& K, const Point& x, double tol) {
  return PointLocator(K, tol).locate(x);
}

std::vector<Eigen::VectorXd> barycentric_grid(int d, int resolution) {
  if (d < 0 || resolution < 1) throw Error(ErrorCode::InvalidArgument, "grid needs d >= 0 and resolution >= 1");
  std::vector<Eigen::VectorXd> out;
  std::vector<int> counts(static_cast<std::size_t>(d) + 1, 0);
  // Compositions of `resolution` into d+1 non-negative parts, lexicographic.
  std::function<void(int, int)> rec = [&](int pos, int left) {
    if (pos == d) {
      counts[static_cast<std::size_t>(pos)] = left;
      Eigen::VectorXd w(d + 1);
      for (int j = 0; j <= d; ++j) w(j) = static_cast<double>(counts[static_cast<std::size_t>(j)]) / resolution;
      out.push_back(std::move(w));
      return;
    }
    for (int c = left; c >= 0; --c) {
      counts[static_cast<std::size_t>(pos)] = c;
      rec(pos + 1, left - c);
    }
  };
  rec(0, resolution);
  return out;
}

}  // namespace simpnet
