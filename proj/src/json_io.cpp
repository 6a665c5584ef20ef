#include "simpnet/json_io.hpp"

#include "simpnet/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace simpnet {

namespace {

void format_double(std::string& out, double v) {
  if (!std::isfinite(v)) throw Error(ErrorCode::FormatError, "cannot serialize a non-finite number");
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  out.append(buf, res.ptr);
}

bool is_scalar(const Json& j) { return !j.is_array() && !j.is_object(); }

void emit(std::string& out, const Json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (j.type()) {
    case Json::value_t::number_float:
      format_double(out, j.get<double>());
      return;
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += inner + Json(it.key()).dump() + ": ";
        emit(out, it.value(), indent + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case Json::value_t::array: {
      bool flat = true;
      for (const auto& e : j) flat = flat && is_scalar(e);
      if (flat) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          emit(out, j[i], indent + 1);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += inner;
        emit(out, j[i], indent + 1);
      }
      out += "\n" + pad + "]";
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

std::string dump_json(const Json& j) {
  std::string out;
  emit(out, j, 0);
  out += "\n";
  return out;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::FormatError, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return Json::parse(ss.str());
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::FormatError, path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::FormatError, "cannot write " + path.string());
  out << text;
}

Json vector_to_json(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Json matrix_to_json(const Eigen::MatrixXd& M) {
  Json a = Json::array();
  for (Eigen::Index r = 0; r < M.rows(); ++r) a.push_back(vector_to_json(M.row(r).transpose()));
  return a;
}

Eigen::VectorXd vector_from_json(const Json& j) {
  if (!j.is_array()) throw Error(ErrorCode::FormatError, "expected a number array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw Error(ErrorCode::FormatError, "expected a number");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

Eigen::MatrixXd matrix_from_json(const Json& j, Eigen::Index cols_hint) {
  if (!j.is_array()) throw Error(ErrorCode::FormatError, "expected a nested array");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const Eigen::Index cols = rows ? static_cast<Eigen::Index>(j[0].is_array() ? j[0].size() : 0) : cols_hint;
  Eigen::MatrixXd M(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Eigen::VectorXd row = vector_from_json(j[static_cast<std::size_t>(r)]);
    if (row.size() != cols) throw Error(ErrorCode::FormatError, "ragged matrix");
    M.row(r) = row.transpose();
  }
  return M;
}

Json complex_to_json(const SimplicialComplex& K) {
  Json j;
  j["ambient_dim"] = K.ambient_dim();
  Json verts = Json::array();
  for (const auto& v : K.vertices()) verts.push_back(vector_to_json(v));
  j["vertices"] = std::move(verts);
  j["maximal_simplices"] = K.maximal_simplices();
  return j;
}

SimplicialComplex complex_from_json(const Json& j) {
  try {
    const int n = j.at("ambient_dim").get<int>();
    std::vector<Point> verts;
    for (const auto& v : j.at("vertices")) verts.push_back(vector_from_json(v));
    auto maximal = j.at("maximal_simplices").get<std::vector<IndexList>>();
    return SimplicialComplex::build(n, std::move(verts), std::move(maximal));
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::FormatError, std::string("complex file: ") + e.what());
  }
}

SimplicialComplex load_complex(const std::filesystem::path& path) { return complex_from_json(read_json_file(path)); }

void save_complex(const SimplicialComplex& K, const std::filesystem::path& path) {
  write_text_file(path, dump_json(complex_to_json(K)));
}

}  // namespace simpnet
