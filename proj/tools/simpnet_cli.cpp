// simpnet: command-line front end for complexes, vertex maps and networks.
//
// Exit status: 0 success, 1 validation or verification failure, 2 usage error.

#include "simpnet/analysis.hpp"
#include "simpnet/approx.hpp"
#include "simpnet/ball_example.hpp"
#include "simpnet/complex.hpp"
#include "simpnet/error.hpp"
#include "simpnet/json_io.hpp"
#include "simpnet/netgen.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

namespace fs = std::filesystem;
using namespace simpnet;

namespace {

constexpr double kEquivalenceTol = 1e-9;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Point parse_point(const std::string& text) {
  std::vector<double> vals;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string item = text.substr(pos, comma - pos);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc{} || ptr != item.data() + item.size())
      throw UsageError("cannot parse coordinate '" + item + "'");
    vals.push_back(v);
    pos = comma + 1;
  }
  return Eigen::Map<const Eigen::VectorXd>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

/// Builtin maps |K| -> |L| for `approx build-map`.
FunctionSampler builtin_function(const std::string& fn_name, const SimplicialComplex& K, const SimplicialComplex& L) {
  const int n = K.ambient_dim(), m = L.ambient_dim();
  if (fn_name == "identity") {
    if (n != m) throw UsageError("identity needs equal dimensions");
    return FunctionSampler("identity", n, m, [](const Eigen::VectorXd& x) { return x; });
  }
  if (fn_name == "swap") {
    if (n != m || n < 2) throw UsageError("swap needs equal dimensions >= 2");
    return FunctionSampler("swap", n, m, [](const Eigen::VectorXd& x) {
      Eigen::VectorXd y = x;
      std::swap(y(0), y(1));
      return y;
    });
  }
  if (fn_name == "constant") {
    const Point c = L.vertex(0);
    return FunctionSampler("constant", n, m, [c](const Eigen::VectorXd&) { return c; });
  }
  if (fn_name == "ball-projection") {
    if (n != 3 || m != 2) throw UsageError("ball-projection maps R^3 to R^2");
    return ball_projection_sampler();
  }
  if (fn_name.starts_with("affine:")) {
    const Json j = read_json_file(fn_name.substr(7));
    const Eigen::MatrixXd A = matrix_from_json(j.at("matrix"), n);
    const Eigen::VectorXd b = vector_from_json(j.at("offset"));
    if (A.rows() != m || A.cols() != n || b.size() != m) throw UsageError("affine map has the wrong shape");
    return FunctionSampler("affine", n, m, [A, b](const Eigen::VectorXd& x) -> Eigen::VectorXd { return A * x + b; });
  }
  throw UsageError("unknown function '" + fn_name + "' (identity, swap, constant, ball-projection, affine:<file>)");
}

void print(const Json& j) { std::cout << dump_json(j); }

Json error_json(const Error& e) {
  Json j;
  j["error"] = to_string(e.code());
  j["message"] = e.what();
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simplicial complexes, simplicial approximation and exact two-hidden-layer networks"};
  app.require_subcommand(1);

  // complex
  auto* complex_cmd = app.add_subcommand("complex", "Inspect and refine simplicial complexes");
  complex_cmd->require_subcommand(1);
  std::string complex_file, complex_out;
  int subdivide_t = 1;
  auto* validate_cmd = complex_cmd->add_subcommand("validate", "Check a complex file");
  validate_cmd->add_option("file", complex_file, "complex JSON")->required();
  auto* subdivide_cmd = complex_cmd->add_subcommand("subdivide", "Barycentric subdivision");
  subdivide_cmd->add_option("file", complex_file, "complex JSON")->required();
  subdivide_cmd->add_option("--t", subdivide_t, "number of subdivisions")->required();
  subdivide_cmd->add_option("--out", complex_out, "output file")->required();
  auto* mesh_cmd = complex_cmd->add_subcommand("mesh", "Largest simplex diameter");
  mesh_cmd->add_option("file", complex_file, "complex JSON")->required();

  // approx
  auto* approx_cmd = app.add_subcommand("approx", "Simplicial approximation");
  approx_cmd->require_subcommand(1);
  std::string source_file, target_file, fn_spec, map_file, out_file;
  int max_t = 0, resolution = 5;
  auto* build_cmd = approx_cmd->add_subcommand("build-map", "Subdivide the source until the star condition holds");
  build_cmd->add_option("--source", source_file)->required();
  build_cmd->add_option("--target", target_file)->required();
  build_cmd->add_option("--fn", fn_spec, "identity, swap, constant, ball-projection or affine:<file>")->required();
  build_cmd->add_option("--max-t", max_t)->required()->check(CLI::NonNegativeNumber);
  build_cmd->add_option("--resolution", resolution)->required()->check(CLI::PositiveNumber);
  build_cmd->add_option("--out", out_file)->required();

  // net
  auto* net_cmd = app.add_subcommand("net", "Synthesize and evaluate networks");
  net_cmd->require_subcommand(1);
  std::string net_file, point_text;
  auto* synth_cmd = net_cmd->add_subcommand("synth", "Network realizing a simplicial map");
  synth_cmd->add_option("--source", source_file)->required();
  synth_cmd->add_option("--target", target_file)->required();
  synth_cmd->add_option("--map", map_file)->required();
  synth_cmd->add_option("--out", out_file)->required();
  auto* eval_cmd = net_cmd->add_subcommand("eval", "Forward pass at one point");
  eval_cmd->add_option("--net", net_file)->required();
  eval_cmd->add_option("--point", point_text, "x,y,...")->required();

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "Compare a network with its simplicial map");
  verify_cmd->require_subcommand(1);
  std::size_t samples = 1000;
  std::uint64_t seed = 0;
  int threads = 1;
  auto* equiv_cmd = verify_cmd->add_subcommand("equivalence", "Sampled max |network - simplicial map|");
  equiv_cmd->add_option("--net", net_file)->required();
  equiv_cmd->add_option("--source", source_file)->required();
  equiv_cmd->add_option("--target", target_file)->required();
  equiv_cmd->add_option("--map", map_file)->required();
  equiv_cmd->add_option("--samples", samples)->required();
  equiv_cmd->add_option("--seed", seed)->required();
  equiv_cmd->add_option("--threads", threads)->check(CLI::PositiveNumber);

  // example
  auto* example_cmd = app.add_subcommand("example", "Built-in scenarios");
  example_cmd->require_subcommand(1);
  std::string t1_text = "0", report_file;
  int t2 = 0;
  auto* ball_cmd = example_cmd->add_subcommand("ball", "Projection B^3 -> B^2 through a tetrahedron and a triangle");
  ball_cmd->add_option("--t1", t1_text, "source subdivisions or 'auto'")->required();
  ball_cmd->add_option("--t2", t2, "target subdivisions")->required()->check(CLI::NonNegativeNumber);
  ball_cmd->add_option("--samples", samples)->required()->check(CLI::PositiveNumber);
  ball_cmd->add_option("--seed", seed)->required();
  ball_cmd->add_option("--report", report_file)->required();
  ball_cmd->add_option("--threads", threads)->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*validate_cmd) {
      try {
        const SimplicialComplex K = load_complex(complex_file);
        print({{"valid", true},
               {"id", K.id()},
               {"ambient_dim", K.ambient_dim()},
               {"dim", K.dim()},
               {"vertices", K.num_vertices()},
               {"maximal_simplices", K.num_maximal()}});
        return 0;
      } catch (const Error& e) {
        Json j = error_json(e);
        j["valid"] = false;
        print(j);
        return 1;
      }
    }
    if (*subdivide_cmd) {
      if (subdivide_t < 1) throw UsageError("--t must be at least 1");
      const SimplicialComplex K = load_complex(complex_file);
      const auto rec = barycentric_subdivide(K, subdivide_t);
      save_complex(rec.complex, complex_out);
      print({{"t", subdivide_t},
             {"vertices", rec.complex.num_vertices()},
             {"maximal_simplices", rec.complex.num_maximal()},
             {"mesh", mesh(rec.complex)}});
      return 0;
    }
    if (*mesh_cmd) {
      const SimplicialComplex K = load_complex(complex_file);
      print({{"mesh", mesh(K)}, {"dim", K.dim()}});
      return 0;
    }
    if (*build_cmd) {
      const SimplicialComplex K = load_complex(source_file);
      const SimplicialComplex L = load_complex(target_file);
      const FunctionSampler g = builtin_function(fn_spec, K, L);
      VertexMapOptions opts;
      opts.max_t = max_t;
      opts.resolution = resolution;
      const VertexMapResult r = build_vertex_map(K, L, g, opts);
      std::string source_ref = source_file;
      if (r.t > 0) {
        fs::path sub = out_file;
        sub.replace_extension(".source.json");
        save_complex(r.source, sub);
        source_ref = sub.string();
      }
      write_text_file(out_file, dump_json(vertex_map_to_json(r.map, source_ref, target_file)));
      print({{"t", r.t}, {"source", source_ref}, {"star_condition", star_report_to_json(r.report)}});
      return 0;
    }
    if (*synth_cmd) {
      const SimplicialComplex K = load_complex(source_file);
      const SimplicialComplex L = load_complex(target_file);
      const VertexMap phi = vertex_map_from_json(read_json_file(map_file));
      const SynthesizedNetwork net = synthesize_network(K, L, phi);
      save_network(net, out_file);
      print({{"widths", {net.n, net.first_width(), net.second_width(), net.m}}});
      return 0;
    }
    if (*eval_cmd) {
      const SynthesizedNetwork net = load_network(net_file);
      print({{"output", vector_to_json(forward(net, parse_point(point_text)))}});
      return 0;
    }
    if (*equiv_cmd) {
      const SimplicialComplex K = load_complex(source_file);
      const SimplicialComplex L = load_complex(target_file);
      const VertexMap phi = vertex_map_from_json(read_json_file(map_file));
      const SynthesizedNetwork net = load_network(net_file);
      if (net.n != K.ambient_dim() || net.m != L.ambient_dim() ||
          static_cast<std::size_t>(net.k) != K.num_maximal() || static_cast<std::size_t>(net.l) != L.num_maximal())
        throw Error(ErrorCode::InvalidArgument, "network does not match the complexes");
      const SupEstimate est = estimate_sup_distance(simplicial_map_sampler(K, L, phi), network_sampler(net), K,
                                                    SamplingOptions{samples, seed, threads, 4});
      const bool pass = est.value <= kEquivalenceTol;
      print({{"samples", est.evaluated},
             {"seed", seed},
             {"max_error", est.value},
             {"argmax", vector_to_json(est.argmax)},
             {"tolerance", kEquivalenceTol},
             {"pass", pass}});
      return pass ? 0 : 1;
    }
    if (*ball_cmd) {
      BallExampleConfig cfg;
      if (t1_text != "auto") {
        int t1 = 0;
        const auto [ptr, ec] = std::from_chars(t1_text.data(), t1_text.data() + t1_text.size(), t1);
        if (ec != std::errc{} || ptr != t1_text.data() + t1_text.size() || t1 < 0)
          throw UsageError("--t1 must be a non-negative integer or 'auto'");
        cfg.t1 = t1;
      }
      cfg.t2 = t2;
      cfg.samples = samples;
      cfg.seed = seed;
      cfg.threads = threads;
      const BallExampleResult r = run_ball_example(cfg);
      write_text_file(report_file, dump_json(ball_report_to_json(r)));
      const bool pass = r.equivalence.value <= kEquivalenceTol && r.report.star.pass();
      print({{"t1", r.t1},
             {"t2", r.t2},
             {"sup_error", r.report.sup_error.value},
             {"target_mesh", r.report.target_mesh},
             {"equivalence_error", r.equivalence.value},
             {"star_condition", r.report.star.pass()},
             {"report", report_file}});
      return pass ? 0 : 1;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
