#pragma once

// JSON interchange: states, observable pairs and pure decompositions.

#include "twinobs/linalg.hpp"
#include "twinobs/spin.hpp"
#include "twinobs/state.hpp"
#include "twinobs/twin_solver.hpp"

#include <json.hpp>

#include <iosfwd>
#include <optional>
#include <string>

namespace twinobs {

using Json = nlohmann::json;

/// Partial override: only the fields present in the document are replaced.
struct ToleranceOverride {
    std::optional<double> rank_tol;
    std::optional<double> residual_tol;
    std::optional<double> cluster_tol;
    std::optional<double> herm_tol;

    Tolerances apply(Tolerances base) const;
    bool empty() const { return !rank_tol && !residual_tol && !cluster_tol && !herm_tol; }
};

struct StateDocument {
    Dims dims;
    Matrix rho;  // row-major, composite index i+ * d- + i-
    ToleranceOverride tolerances;
    std::optional<Scenario> scenario;

    BipartiteState to_state(const Tolerances& base = {}) const;
};

StateDocument make_state_document(const BipartiteState& state,
                                  std::optional<Scenario> scenario = std::nullopt);

/// Matrices are nested rows of [re, im] pairs; a bare number is read as a real entry.
Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j, const std::string& locus);
Json vector_to_json(const Vector& v);
Vector vector_from_json(const Json& j, const std::string& locus);

Json to_json(const StateDocument& doc);
Json to_json(const ObservablePair& pair);
Json to_json(const PureDecomposition& dec);

/// `locus` names the source (a file path or "<stdin>") and prefixes every error message.
StateDocument parse_state_document(const Json& j, const std::string& locus);
ObservablePair parse_pair(const Json& j, const std::string& locus);
PureDecomposition parse_decomposition(const Json& j, const std::string& locus);

/// Throws ParseError with the locus on malformed JSON.
Json read_json(std::istream& in, const std::string& locus);
Json read_json_file(const std::string& path);

}  // namespace twinobs
