#include "detail.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <limits>

namespace simpnet::detail {

namespace {

constexpr double kPivotEps = 1e-12;

class Tableau {
 public:
  Tableau(const Eigen::MatrixXd& A, const Eigen::VectorXd& b)
      : rows_(static_cast<int>(A.rows())), vars_(static_cast<int>(A.cols())) {
    const int R = rows_, N = vars_;
    T_ = Eigen::MatrixXd::Zero(R + 1, N + R + 1);
    basis_.resize(static_cast<std::size_t>(R));
    for (int i = 0; i < R; ++i) {
      const double sign = b(i) < 0 ? -1.0 : 1.0;
      T_.row(i).head(N) = sign * A.row(i);
      T_(i, N + i) = 1.0;
      T_(i, rhs()) = sign * b(i);
      basis_[static_cast<std::size_t>(i)] = N + i;
    }
  }

  int rhs() const { return vars_ + rows_; }

  // Objective row holds -c for maximization; rhs cell holds the objective value.
  void set_objective(const Eigen::VectorXd& full_c) {
    T_.row(rows_).setZero();
    T_.row(rows_).head(vars_ + rows_) = -full_c.transpose();
    for (int i = 0; i < rows_; ++i) {
      const double f = T_(rows_, basis_[static_cast<std::size_t>(i)]);
      if (f != 0.0) T_.row(rows_) -= f * T_.row(i);
    }
  }

  void optimize(int allowed_columns) {
    for (int iter = 0; iter < 10000; ++iter) {
      int enter = -1;
      for (int j = 0; j < allowed_columns; ++j) {
        if (T_(rows_, j) < -kPivotEps) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < rows_; ++i) {
        const double a = T_(i, enter);
        if (a <= kPivotEps) continue;
        const double ratio = T_(i, rhs()) / a;
        if (leave < 0 || ratio < best - kPivotEps) {
          best = ratio;
          leave = i;
        } else if (ratio <= best + kPivotEps &&
                   basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)]) {
          leave = i;
        }
      }
      if (leave < 0) return;  // unbounded; cannot happen on the bounded problems used here
      pivot(leave, enter);
    }
  }

  void pivot(int r, int c) {
    T_.row(r) /= T_(r, c);
    for (int i = 0; i <= rows_; ++i) {
      if (i == r) continue;
      const double f = T_(i, c);
      if (f != 0.0) T_.row(i) -= f * T_.row(r);
    }
    basis_[static_cast<std::size_t>(r)] = c;
  }

  // Pivot zero-level artificials out of the basis where a structural column allows it.
  void drive_out_artificials() {
    for (int i = 0; i < rows_; ++i) {
      if (basis_[static_cast<std::size_t>(i)] < vars_) continue;
      for (int j = 0; j < vars_; ++j) {
        if (std::abs(T_(i, j)) > 1e-9) {
          pivot(i, j);
          break;
        }
      }
    }
  }

  double value() const { return T_(rows_, rhs()); }

 private:
  int rows_, vars_;
  Eigen::MatrixXd T_;
  std::vector<int> basis_;
};

}  // namespace

std::optional<double> lp_maximize(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                                  const Eigen::VectorXd& c) {
  const int R = static_cast<int>(A.rows()), N = static_cast<int>(A.cols());
  Tableau tab(A, b);

  Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(N + R);
  phase1.tail(R).setConstant(-1.0);
  tab.set_objective(phase1);
  tab.optimize(N + R);
  if (tab.value() < -1e-9) return std::nullopt;

  tab.drive_out_artificials();
  Eigen::VectorXd phase2 = Eigen::VectorXd::Zero(N + R);
  phase2.head(N) = c;
  tab.set_objective(phase2);
  tab.optimize(N);
  return tab.value();
}

bool overlaps_off_shared_face(const std::vector<Point>& vertices, const IndexList& a,
                              const BarycentricChart& chart_a, const IndexList& b,
                              const BarycentricChart& chart_b, double tol) {
  auto in_list = [](const IndexList& l, int v) { return std::binary_search(l.begin(), l.end(), v); };

  // Quick accept: some vertex p of one simplex, not shared, has every
  // non-shared vertex of the other strictly beyond the facet opposite p.
  auto separated_by_facet = [&](const IndexList& s, const BarycentricChart& chart, const IndexList& o) {
    if (!chart.full_dimensional()) return false;
    std::vector<Eigen::VectorXd> coords;
    for (int v : o)
      if (!in_list(s, v)) coords.push_back(chart.coordinates(vertices[static_cast<std::size_t>(v)]));
    if (coords.empty()) return false;
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (in_list(o, s[j])) continue;
      bool all_beyond = true;
      for (const auto& lam : coords) {
        if (lam(static_cast<Eigen::Index>(j)) >= -tol) {
          all_beyond = false;
          break;
        }
      }
      if (all_beyond) return true;
    }
    return false;
  };
  if (separated_by_facet(a, chart_a, b) || separated_by_facet(b, chart_b, a)) return false;

  // LP: maximize the weight on non-shared vertices over common points.
  const int n = static_cast<int>(vertices[static_cast<std::size_t>(a.front())].size());
  const int na = static_cast<int>(a.size()), nb = static_cast<int>(b.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n + 2, na + nb);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 2);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(na + nb);
  for (int j = 0; j < na; ++j) {
    A(0, j) = 1.0;
    A.block(2, j, n, 1) = vertices[static_cast<std::size_t>(a[static_cast<std::size_t>(j)])];
    if (!in_list(b, a[static_cast<std::size_t>(j)])) c(j) = 1.0;
  }
  for (int j = 0; j < nb; ++j) {
    A(1, na + j) = 1.0;
    A.block(2, na + j, n, 1) = -vertices[static_cast<std::size_t>(b[static_cast<std::size_t>(j)])];
    if (!in_list(a, b[static_cast<std::size_t>(j)])) c(na + j) = 1.0;
  }
  rhs(0) = 1.0;
  rhs(1) = 1.0;
  const auto best = lp_maximize(A, rhs, c);
  return best.has_value() && *best > tol;
}

std::string fnv1a_hex(const std::vector<Point>& vertices, const std::vector<IndexList>& simplices) {
  std::uint64_t h = 1469598103934665603ull;
  auto feed = [&h](const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= p[i];
      h *= 1099511628211ull;
    }
  };
  for (const auto& v : vertices)
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      const double x = v(i);
      feed(&x, sizeof x);
    }
  const int sep = -1;
  for (const auto& s : simplices) {
    feed(s.data(), s.size() * sizeof(int));
    feed(&sep, sizeof sep);
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace simpnet::detail
