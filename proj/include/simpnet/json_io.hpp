#pragma once

#include "simpnet/complex.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace simpnet {

using Json = nlohmann::json;

/// Deterministic pretty printer: floats with 17 significant digits, arrays of
/// scalars on one line.
std::string dump_json(const Json& j);

Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

Json vector_to_json(const Eigen::VectorXd& v);
Json matrix_to_json(const Eigen::MatrixXd& M);
Eigen::VectorXd vector_from_json(const Json& j);
/// Row-major nested array; `cols_hint` fixes the column count of an empty matrix.
Eigen::MatrixXd matrix_from_json(const Json& j, Eigen::Index cols_hint = 0);

/// {"ambient_dim": n, "vertices": [[...]], "maximal_simplices": [[...]]}
Json complex_to_json(const SimplicialComplex& K);
SimplicialComplex complex_from_json(const Json& j);
SimplicialComplex load_complex(const std::filesystem::path& path);
void save_complex(const SimplicialComplex& K, const std::filesystem::path& path);

}  // namespace simpnet
