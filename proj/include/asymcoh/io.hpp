// io.hpp — JSON/CSV serialization and matrix file loading
//
// Matrix files are JSON objects {"dim": d, "entries": [[re, im], ...]} with
// d*d row-major entries; non-finite numbers are rejected. Generators may
// also be given by name: sigmax | sigmay | sigmaz | diag:<v1,v2,...>.

#pragma once

#include "bounds.hpp"
#include "coherence.hpp"
#include "core.hpp"
#include "covariant.hpp"
#include "estimation.hpp"
#include "weak_values.hpp"

#include <json.hpp>

#include <string>

namespace asymcoh {

using Json = nlohmann::json;

Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);
Matrix load_matrix(const std::string& path);

DensityMatrix load_density_matrix(const std::string& path, double tol = 1e-9);
GeneratorObservable load_generator(const std::string& path_or_name);

Json to_json(const OrthonormalBasis& basis);
Json to_json(const CoherenceResult& result);
Json to_json(const KDTable& table);
Json to_json(const BoundsReport& report);
Json to_json(const PropertyReport& report);
Json to_json(const EstimationRecord& record);
Json to_json(const ConvergenceStudy& study);

std::string to_csv(const KDTable& table);
std::string to_csv(const BoundsReport& report);
std::string to_csv(const ConvergenceStudy& study);
std::string to_table(const PropertyReport& report);

} // namespace asymcoh
