#include "simpnet/netgen.hpp"

#include "simpnet/error.hpp"

#include <algorithm>
#include <cmath>

namespace simpnet {

SynthesizedNetwork synthesize_network(const SimplicialComplex& K, const SimplicialComplex& L, const VertexMap& phi,
                                      double tol) {
  if (K.ambient_dim() != K.dim() || L.ambient_dim() != L.dim())
    throw Error(ErrorCode::InvalidArgument, "network synthesis needs full-dimensional complexes");
  try {
    validate_vertex_map(K, L, phi);
  } catch (const Error& e) {
    throw Error(ErrorCode::InvalidVertexMap, e.what());
  }

  SynthesizedNetwork net;
  net.n = K.dim();
  net.m = L.dim();
  net.k = static_cast<int>(K.num_maximal());
  net.l = static_cast<int>(L.num_maximal());
  net.tol = tol;
  const int n1 = net.n + 1, m1 = net.m + 1;

  net.w1.resize(net.first_width(), net.n);
  net.b1.resize(net.first_width());
  for (int i = 0; i < net.k; ++i) {
    const auto chart = BarycentricChart::make(K.simplex_vertices(i));
    net.w1.middleRows(i * n1, n1) = chart.linear;
    net.b1.segment(i * n1, n1) = chart.offset;
  }

  std::vector<Eigen::Triplet<double>> ones;
  for (int i = 0; i < net.k; ++i) {
    const auto& sigma = K.maximal(i);
    for (int t = 0; t < n1; ++t) {
      const int u = phi.assignment[static_cast<std::size_t>(sigma[static_cast<std::size_t>(t)])];
      for (int j : L.incident(u)) {
        const auto& mu = L.maximal(j);
        const int r = static_cast<int>(std::lower_bound(mu.begin(), mu.end(), u) - mu.begin());
        ones.emplace_back(j * m1 + r, i * n1 + t, 1.0);
      }
    }
  }
  net.w2.resize(net.second_width(), net.first_width());
  net.w2.setFromTriplets(ones.begin(), ones.end());
  net.w2.makeCompressed();

  net.w3.resize(net.m, net.second_width());
  for (int j = 0; j < net.l; ++j) net.w3.middleCols(j * m1, m1) = L.simplex_vertices(j);
  return net;
}

Point forward(const SynthesizedNetwork& net, const Point& x, ForwardTrace* trace) {
  if (x.size() != net.n) throw Error(ErrorCode::InvalidArgument, "input has the wrong dimension");
  const int n1 = net.n + 1, m1 = net.m + 1;

  const Eigen::VectorXd a = net.w1 * x + net.b1;
  std::vector<bool> source_mask(static_cast<std::size_t>(net.k));
  int active = 0;
  for (int i = 0; i < net.k; ++i) {
    source_mask[static_cast<std::size_t>(i)] = a.segment(i * n1, n1).minCoeff() >= -net.tol;
    active += source_mask[static_cast<std::size_t>(i)] ? 1 : 0;
  }
  if (active == 0) throw Error(ErrorCode::OutsideDomain, "input lies in no source simplex");
  Eigen::VectorXd gated = Eigen::VectorXd::Zero(a.size());
  for (int i = 0; i < net.k; ++i)
    if (source_mask[static_cast<std::size_t>(i)]) gated.segment(i * n1, n1) = a.segment(i * n1, n1) / active;

  const Eigen::VectorXd y = net.w2 * gated;

  // A target coordinate sums up to n+1 source coordinates, each >= -tol.
  const double slack = (net.n + 1) * net.tol;
  std::vector<bool> target_mask(static_cast<std::size_t>(net.l));
  std::vector<Point> blocks(static_cast<std::size_t>(net.l));
  Point sum = Point::Zero(net.m);
  int hits = 0;
  for (int j = 0; j < net.l; ++j) {
    const auto yj = y.segment(j * m1, m1);
    const bool psi = yj.minCoeff() >= -slack && yj.sum() >= 1.0 - slack;
    target_mask[static_cast<std::size_t>(j)] = psi;
    if (!psi) continue;
    blocks[static_cast<std::size_t>(j)] = net.w3.middleCols(j * m1, m1) * yj;
    sum += blocks[static_cast<std::size_t>(j)];
    ++hits;
  }
  if (hits == 0) throw Error(ErrorCode::OutsideDomain, "image lies in no target simplex");
  Point out = sum / hits;

  if (trace) {
    trace->input = x;
    trace->layer1 = a;
    trace->source_mask = std::move(source_mask);
    trace->layer1_gated = std::move(gated);
    trace->layer2 = y;
    trace->target_mask = std::move(target_mask);
    trace->block_outputs = std::move(blocks);
    trace->output = out;
  }
  return out;
}

namespace {

[[noreturn]] void violation(const std::string& what) { throw Error(ErrorCode::InvariantViolation, what); }

}  // namespace

void check_network_invariants(const SynthesizedNetwork& net) {
  if (net.n < 0 || net.m < 0 || net.k < 1 || net.l < 1) violation("layer sizes must be positive");
  if (!(net.tol > 0.0) || !std::isfinite(net.tol)) violation("tol must be positive and finite");
  const int n1 = net.n + 1, m1 = net.m + 1;
  if (net.w1.rows() != net.first_width() || net.w1.cols() != net.n) violation("w1 has the wrong shape");
  if (net.b1.size() != net.first_width()) violation("b1 has the wrong length");
  if (net.w2.rows() != net.second_width() || net.w2.cols() != net.first_width()) violation("w2 has the wrong shape");
  if (net.w3.rows() != net.m || net.w3.cols() != net.second_width()) violation("w3 has the wrong shape");
  if (!net.w1.allFinite() || !net.b1.allFinite() || !net.w3.allFinite()) violation("non-finite weight");

  // Each block of (w1 | b1) inverts a homogeneous vertex matrix.
  for (int i = 0; i < net.k; ++i) {
    Eigen::MatrixXd block(n1, n1);
    block.leftCols(net.n) = net.w1.middleRows(i * n1, n1);
    block.col(net.n) = net.b1.segment(i * n1, n1);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(block);
    if (!lu.isInvertible()) violation("w1/b1 block " + std::to_string(i) + " is singular");
    const Eigen::MatrixXd H = lu.inverse();
    if ((H.row(net.n).array() - 1.0).abs().maxCoeff() > 1e-9)
      violation("w1/b1 block " + std::to_string(i) + " is not the inverse of a homogeneous vertex matrix");
  }

  for (int j = 0; j < net.l; ++j) {
    std::vector<Point> pts;
    for (int r = 0; r < m1; ++r) pts.push_back(net.w3.col(j * m1 + r));
    if (!is_affinely_independent(pts)) violation("w3 block " + std::to_string(j) + " is not a simplex");
  }

  // w2: 0/1 entries; each column picks one target vertex, present in every
  // target block that contains it and at most once per block.
  for (int c = 0; c < net.w2.outerSize(); ++c) {
    std::vector<int> rows;
    for (Eigen::SparseMatrix<double>::InnerIterator it(net.w2, c); it; ++it) {
      if (it.value() == 0.0) continue;
      if (it.value() != 1.0) violation("w2 entry is not 0 or 1");
      rows.push_back(static_cast<int>(it.row()));
    }
    if (rows.empty()) violation("w2 column " + std::to_string(c) + " maps to no target vertex");
    std::sort(rows.begin(), rows.end());
    for (std::size_t p = 1; p < rows.size(); ++p)
      if (rows[p] / m1 == rows[p - 1] / m1) violation("w2 column " + std::to_string(c) + " hits a target block twice");
    const Point u = net.w3.col(rows.front());
    std::size_t expected = 0;
    for (int r = 0; r < net.second_width(); ++r)
      if ((net.w3.col(r) - u).cwiseAbs().maxCoeff() == 0.0) ++expected;
    for (int r : rows)
      if ((net.w3.col(r) - u).cwiseAbs().maxCoeff() != 0.0)
        violation("w2 column " + std::to_string(c) + " maps to two different target vertices");
    if (rows.size() != expected) violation("w2 column " + std::to_string(c) + " misses a target block");
  }
}

Json network_to_json(const SynthesizedNetwork& net) {
  Json j;
  j["n"] = net.n;
  j["m"] = net.m;
  j["k"] = net.k;
  j["l"] = net.l;
  j["tol"] = net.tol;
  j["w1"] = matrix_to_json(net.w1);
  j["b1"] = vector_to_json(net.b1);
  const Eigen::MatrixXd dense = Eigen::MatrixXd(net.w2);
  Json w2 = Json::array();
  for (Eigen::Index r = 0; r < dense.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < dense.cols(); ++c) row.push_back(static_cast<int>(dense(r, c)));
    w2.push_back(std::move(row));
  }
  j["w2"] = std::move(w2);
  j["w3"] = matrix_to_json(net.w3);
  return j;
}

SynthesizedNetwork network_from_json(const Json& j) {
  SynthesizedNetwork net;
  Eigen::MatrixXd w2;
  try {
    net.n = j.at("n").get<int>();
    net.m = j.at("m").get<int>();
    net.k = j.at("k").get<int>();
    net.l = j.at("l").get<int>();
    net.tol = j.at("tol").get<double>();
    net.w1 = matrix_from_json(j.at("w1"), net.n);
    net.b1 = vector_from_json(j.at("b1"));
    w2 = matrix_from_json(j.at("w2"), static_cast<Eigen::Index>(net.k) * (net.n + 1));
    net.w3 = matrix_from_json(j.at("w3"), static_cast<Eigen::Index>(net.l) * (net.m + 1));
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::FormatError, std::string("network file: ") + e.what());
  }
  // An n = 0 network has zero-column w1 rows written as [].
  if (net.w1.rows() == net.k * (net.n + 1) && net.w1.cols() == 0 && net.n > 0)
    throw Error(ErrorCode::FormatError, "network file: w1 rows are empty");
  if (net.w3.rows() == 0 && net.m > 0) throw Error(ErrorCode::InvariantViolation, "w3 has the wrong shape");
  for (Eigen::Index r = 0; r < w2.rows(); ++r)
    for (Eigen::Index c = 0; c < w2.cols(); ++c)
      if (w2(r, c) != 0.0 && w2(r, c) != 1.0) throw Error(ErrorCode::InvariantViolation, "w2 entry is not 0 or 1");
  net.w2 = w2.sparseView();
  net.w2.makeCompressed();
  check_network_invariants(net);
  return net;
}

void save_network(const SynthesizedNetwork& net, const std::filesystem::path& path) {
  write_text_file(path, dump_json(network_to_json(net)));
}

SynthesizedNetwork load_network(const std::filesystem::path& path) { return network_from_json(read_json_file(path)); }

}  // namespace simpnet
