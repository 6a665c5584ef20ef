#include "simpnet/analysis.hpp"

#include "simpnet/error.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <memory>
#include <numbers>
#include <thread>

namespace simpnet {

namespace {

std::uint64_t mul_checked(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = 0;
  if (__builtin_mul_overflow(a, b, &r)) throw Error(ErrorCode::Overflow, "complexity exceeds 64-bit range");
  return r;
}

std::uint64_t side_width(std::uint64_t count, std::uint64_t dim, std::uint64_t t) {
  std::uint64_t fact = 1;
  for (std::uint64_t i = 2; i <= dim + 1; ++i) fact = mul_checked(fact, i);
  std::uint64_t w = mul_checked(count, dim + 1);
  for (std::uint64_t i = 0; i < t; ++i) w = mul_checked(w, fact);
  return w;
}

std::uint64_t splitmix(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

ComplexityFigure complexity(std::uint64_t k, std::uint64_t n, std::uint64_t t1, std::uint64_t l, std::uint64_t m,
                            std::uint64_t t2) {
  if (k < 1 || l < 1) throw Error(ErrorCode::InvalidArgument, "k and l must be at least 1");
  ComplexityFigure c{k, n, t1, l, m, t2, 0, 0, 0};
  c.first = side_width(k, n, t1);
  c.second = side_width(l, m, t2);
  c.value = std::max(c.first, c.second);
  return c;
}

IndexedRng::IndexedRng(std::uint64_t seed, std::uint64_t index, std::uint64_t stream) {
  std::uint64_t s = seed;
  std::uint64_t a = splitmix(s);
  std::uint64_t i = index ^ (stream * 0xd1b54a32d192ed03ULL);
  std::uint64_t b = splitmix(i);
  state_ = a ^ (b * 0xff51afd7ed558ccdULL);
}

std::uint64_t IndexedRng::next() { return splitmix(state_); }

double IndexedRng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double IndexedRng::exponential() { return -std::log1p(-uniform()); }

double IndexedRng::normal() {
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

DomainSampler::DomainSampler(const SimplicialComplex& K, std::uint64_t seed, int grid_resolution)
    : K_(&K), seed_(seed), grid_(grid_resolution > 0 ? barycentric_grid(K.dim(), grid_resolution)
                                                     : std::vector<Eigen::VectorXd>{}) {}

int DomainSampler::simplex_of(std::size_t i) const {
  const std::size_t k = K_->num_maximal();
  if (i < grid_size()) return static_cast<int>(i / grid_.size());
  return static_cast<int>((i - grid_size()) % k);
}

Point DomainSampler::point(std::size_t i) const {
  const int s = simplex_of(i);
  const Eigen::MatrixXd V = K_->simplex_vertices(s);
  if (i < grid_size()) return V * grid_[i % grid_.size()];
  IndexedRng rng(seed_, i);
  Eigen::VectorXd w(V.cols());
  for (Eigen::Index j = 0; j < w.size(); ++j) w(j) = rng.exponential();
  const double total = w.sum();
  if (total > 0.0) w /= total;
  else w.setConstant(1.0 / static_cast<double>(w.size()));
  return V * w;
}

SupEstimate merge(const SupEstimate& a, const SupEstimate& b) {
  if (a.evaluated == 0) return b;
  if (b.evaluated == 0) return a;
  SupEstimate out = (b.value > a.value || (b.value == a.value && b.argmax_index < a.argmax_index)) ? b : a;
  out.evaluated = a.evaluated + b.evaluated;
  return out;
}

namespace {

/// Splits [0, total) into contiguous chunks, runs `body(begin, end)` per chunk
/// and merges in chunk order. Worker exceptions are rethrown.
template <class Body>
SupEstimate run_sharded(std::size_t total, int threads, Body body) {
  const std::size_t workers = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), 1,
                                                      std::max<std::size_t>(total, 1));
  if (workers == 1) return body(0, total);
  std::vector<SupEstimate> parts(workers);
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = total * w / workers, end = total * (w + 1) / workers;
      pool.emplace_back([&, w, begin, end] {
        try {
          parts[w] = body(begin, end);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  SupEstimate out;
  for (const auto& p : parts) out = merge(out, p);
  return out;
}

}  // namespace

SupEstimate estimate_sup_distance_range(const FunctionSampler& f, const FunctionSampler& h,
                                        const DomainSampler& stream, std::size_t begin, std::size_t end) {
  SupEstimate best;
  for (std::size_t i = begin; i < end; ++i) {
    const Point x = stream.point(i);
    const double d = (f(x) - h(x)).norm();
    if (best.evaluated == 0 || d > best.value) {
      best.value = d;
      best.argmax = x;
      best.argmax_index = i;
    }
    ++best.evaluated;
  }
  return best;
}

SupEstimate estimate_sup_distance(const FunctionSampler& f, const FunctionSampler& h, const SimplicialComplex& domain,
                                  const SamplingOptions& opts) {
  if (f.input_dim() != domain.ambient_dim() || h.input_dim() != domain.ambient_dim() ||
      f.output_dim() != h.output_dim())
    throw Error(ErrorCode::SamplerFailure, "samplers do not match the domain");
  const DomainSampler stream(domain, opts.seed, opts.grid_resolution);
  return run_sharded(stream.total(opts.samples), opts.threads, [&](std::size_t b, std::size_t e) {
    return estimate_sup_distance_range(f, h, stream, b, e);
  });
}

SupEstimate estimate_sup_distance(const FunctionSampler& f, const FunctionSampler& h, const SimplicialComplex& domain,
                                  std::size_t samples, std::uint64_t seed) {
  return estimate_sup_distance(f, h, domain, SamplingOptions{samples, seed, 1, 4});
}

double estimate_modulus(const FunctionSampler& f, const SimplicialComplex& domain, double delta,
                        const SamplingOptions& opts) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw Error(ErrorCode::InvalidArgument, "delta must be positive");
  if (f.input_dim() != domain.ambient_dim()) throw Error(ErrorCode::SamplerFailure, f.name() + ": wrong input dimension");
  const int dim = domain.ambient_dim();
  if (dim == 0) return 0.0;
  const DomainSampler stream(domain, opts.seed, opts.grid_resolution);
  const PointLocator strict(domain, 0.0);

  auto body = [&](std::size_t begin, std::size_t end) {
    SupEstimate best;
    for (std::size_t i = begin; i < end; ++i) {
      const Point x = stream.point(i);
      IndexedRng rng(opts.seed, i, 1);
      Point dir(dim);
      double norm = 0.0;
      while (norm < 1e-12) {
        for (int c = 0; c < dim; ++c) dir(c) = rng.normal();
        norm = dir.norm();
      }
      dir /= norm;
      // Half the pairs sit exactly at distance delta, the rest spread inside.
      const double radius = (i % 2 == 0) ? delta : delta * rng.uniform();
      // Pull y back along the segment until it is inside |domain| with no slack.
      Point y = x;
      if (strict.find_first(x) >= 0) {
        double lo = 0.0, hi = 1.0;
        if (strict.find_first(x + radius * dir) >= 0) lo = 1.0;
        else
          for (int it = 0; it < 48; ++it) {
            const double mid = 0.5 * (lo + hi);
            (strict.find_first(x + mid * radius * dir) >= 0 ? lo : hi) = mid;
          }
        y = x + lo * radius * dir;
      }
      const double d = (f(x) - f(y)).norm();
      if (best.evaluated == 0 || d > best.value) {
        best.value = d;
        best.argmax = x;
        best.argmax_index = i;
      }
      ++best.evaluated;
    }
    return best;
  };
  return run_sharded(stream.total(opts.samples), opts.threads, body).value;
}

double estimate_modulus(const FunctionSampler& f, const SimplicialComplex& domain, double delta, std::size_t samples,
                        std::uint64_t seed) {
  return estimate_modulus(f, domain, delta, SamplingOptions{samples, seed, 1, 4});
}

double euclidean_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return (a - b).norm(); }

double estimate_extended_mesh(const SimplicialComplex& K, const FunctionSampler& tau_inverse, const Metric& metric,
                              std::size_t samples, std::uint64_t seed, int grid_resolution) {
  if (tau_inverse.input_dim() != K.ambient_dim())
    throw Error(ErrorCode::SamplerFailure, tau_inverse.name() + ": wrong input dimension");
  const auto grid = barycentric_grid(K.dim(), std::max(grid_resolution, 1));
  double best = 0.0;
  for (std::size_t s = 0; s < K.num_maximal(); ++s) {
    const Eigen::MatrixXd V = K.simplex_vertices(static_cast<int>(s));
    std::vector<Eigen::VectorXd> images;
    images.reserve(grid.size());
    for (const auto& w : grid) images.push_back(tau_inverse(V * w));
    for (std::size_t a = 0; a < images.size(); ++a)
      for (std::size_t b = a + 1; b < images.size(); ++b) best = std::max(best, metric(images[a], images[b]));
    for (std::size_t p = 0; p < samples; ++p) {
      IndexedRng rng(seed, s * samples + p, 2);
      Eigen::VectorXd wa(V.cols()), wb(V.cols());
      for (Eigen::Index j = 0; j < wa.size(); ++j) wa(j) = rng.exponential();
      for (Eigen::Index j = 0; j < wb.size(); ++j) wb(j) = rng.exponential();
      wa /= wa.sum();
      wb /= wb.sum();
      best = std::max(best, metric(tau_inverse(V * wa), tau_inverse(V * wb)));
    }
  }
  return best;
}

FunctionSampler network_sampler(const SynthesizedNetwork& net, std::string name) {
  auto shared = std::make_shared<const SynthesizedNetwork>(net);
  return FunctionSampler(std::move(name), net.n, net.m, [shared](const Eigen::VectorXd& x) { return forward(*shared, x); });
}

FunctionSampler simplicial_map_sampler(const SimplicialComplex& K, const SimplicialComplex& L, const VertexMap& phi,
                                       std::string name) {
  auto shared = std::make_shared<const SimplicialMap>(K, L, phi);
  return FunctionSampler(std::move(name), K.ambient_dim(), L.ambient_dim(),
                         [shared](const Eigen::VectorXd& x) { return (*shared)(x); });
}

Json complexity_to_json(const ComplexityFigure& c) {
  Json j;
  j["k"] = c.k;
  j["n"] = c.n;
  j["t1"] = c.t1;
  j["l"] = c.l;
  j["m"] = c.m;
  j["t2"] = c.t2;
  j["first_width"] = c.first;
  j["second_width"] = c.second;
  j["value"] = c.value;
  return j;
}

Json sup_estimate_to_json(const SupEstimate& s) {
  Json j;
  j["value"] = s.value;
  j["lower_bound"] = true;
  j["argmax"] = vector_to_json(s.argmax);
  j["argmax_index"] = s.argmax_index;
  j["evaluated"] = s.evaluated;
  return j;
}

Json approximation_report_to_json(const ApproximationReport& r) {
  Json j;
  j["samples"] = r.samples;
  j["seed"] = r.seed;
  j["sup_error"] = sup_estimate_to_json(r.sup_error);
  j["target_mesh"] = r.target_mesh;
  j["star_condition"] = star_report_to_json(r.star);
  j["complexity"] = complexity_to_json(r.complexity);
  j["modulus"] = Json::array();
  for (const auto& m : r.modulus) {
    Json e;
    e["delta"] = m.delta;
    e["rho_target"] = m.target;
    e["rho_network"] = m.network;
    e["lower_bound"] = true;
    j["modulus"].push_back(std::move(e));
  }
  return j;
}

}  // namespace simpnet
