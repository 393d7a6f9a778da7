#include "twinobs/io.hpp"

#include "twinobs/error.hpp"

#include <fstream>
#include <istream>

namespace twinobs {

namespace {

[[noreturn]] void fail(const std::string& locus, const std::string& what) {
    throw Error(ErrorCode::ParseError, locus + ": " + what);
}

const Json& field(const Json& j, const char* name, const std::string& locus) {
    if (!j.is_object()) fail(locus, "expected an object");
    auto it = j.find(name);
    if (it == j.end()) fail(locus, std::string("missing field '") + name + "'");
    return *it;
}

double number(const Json& j, const std::string& locus) {
    if (!j.is_number()) fail(locus, "expected a number");
    return j.get<double>();
}

Complex complex_entry(const Json& j, const std::string& locus) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2) {
        return {number(j[0], locus + "[0]"), number(j[1], locus + "[1]")};
    }
    fail(locus, "expected [re, im] or a number");
}

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Dims parse_dims(const Json& j, const std::string& locus) {
    if (!j.is_array() || j.size() != 2) fail(locus, "expected [d_plus, d_minus]");
    Dims d;
    for (int k = 0; k < 2; ++k) {
        const std::string here = locus + "[" + std::to_string(k) + "]";
        if (!j[k].is_number_integer() || j[k].get<long long>() < 1) {
            fail(here, "expected a positive integer");
        }
        (k == 0 ? d.plus : d.minus) = j[k].get<Index>();
    }
    return d;
}

ToleranceOverride parse_tolerances(const Json& j, const std::string& locus) {
    if (!j.is_object()) fail(locus, "expected an object");
    ToleranceOverride t;
    for (const auto& [key, value] : j.items()) {
        const std::string here = locus + "." + key;
        const double v = number(value, here);
        if (!(v >= 0.0)) fail(here, "tolerance must be non-negative");
        if (key == "rank_tol") t.rank_tol = v;
        else if (key == "residual_tol") t.residual_tol = v;
        else if (key == "cluster_tol") t.cluster_tol = v;
        else if (key == "herm_tol") t.herm_tol = v;
        else fail(here, "unknown tolerance");
    }
    return t;
}

Json tolerances_to_json(const ToleranceOverride& t) {
    Json j = Json::object();
    if (t.rank_tol) j["rank_tol"] = *t.rank_tol;
    if (t.residual_tol) j["residual_tol"] = *t.residual_tol;
    if (t.cluster_tol) j["cluster_tol"] = *t.cluster_tol;
    if (t.herm_tol) j["herm_tol"] = *t.herm_tol;
    return j;
}

// Errors from the library are rethrown with the locus attached.
template <typename F>
auto with_locus(const std::string& locus, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const Error& e) {
        if (e.code() == ErrorCode::ParseError) throw;
        throw Error(e.code(), locus + ": " + e.what());
    }
}

}  // namespace

Tolerances ToleranceOverride::apply(Tolerances base) const {
    if (rank_tol) base.rank_tol = *rank_tol;
    if (residual_tol) base.residual_tol = *residual_tol;
    if (cluster_tol) base.cluster_tol = *cluster_tol;
    if (herm_tol) base.herm_tol = *herm_tol;
    return base;
}

BipartiteState StateDocument::to_state(const Tolerances& base) const {
    return BipartiteState::from_matrix(rho, dims, tolerances.apply(base));
}

StateDocument make_state_document(const BipartiteState& state, std::optional<Scenario> scenario) {
    StateDocument doc;
    doc.dims = state.dims();
    doc.rho = state.rho();
    doc.scenario = scenario;
    return doc;
}

Json matrix_to_json(const Matrix& m) {
    Json rows = Json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Index k = 0; k < m.cols(); ++k) row.push_back(complex_to_json(m(i, k)));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const Json& j, const std::string& locus) {
    if (!j.is_array() || j.empty()) fail(locus, "expected a non-empty array of rows");
    const auto rows = static_cast<Index>(j.size());
    if (!j[0].is_array()) fail(locus + "[0]", "expected a row");
    const auto cols = static_cast<Index>(j[0].size());
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        const std::string row_locus = locus + "[" + std::to_string(i) + "]";
        const Json& row = j[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Index>(row.size()) != cols) {
            fail(row_locus, "expected a row of length " + std::to_string(cols));
        }
        for (Index k = 0; k < cols; ++k) {
            m(i, k) = complex_entry(row[static_cast<std::size_t>(k)],
                                    row_locus + "[" + std::to_string(k) + "]");
        }
    }
    return m;
}

Json vector_to_json(const Vector& v) {
    Json out = Json::array();
    for (Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
    return out;
}

Vector vector_from_json(const Json& j, const std::string& locus) {
    if (!j.is_array() || j.empty()) fail(locus, "expected a non-empty array");
    Vector v(static_cast<Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        v(static_cast<Index>(i)) = complex_entry(j[i], locus + "[" + std::to_string(i) + "]");
    }
    return v;
}

Json to_json(const StateDocument& doc) {
    Json j;
    j["dims"] = {doc.dims.plus, doc.dims.minus};
    j["rho"] = matrix_to_json(doc.rho);
    if (!doc.tolerances.empty()) j["tolerances"] = tolerances_to_json(doc.tolerances);
    if (doc.scenario) j["scenario"] = std::string(to_string(*doc.scenario));
    return j;
}

Json to_json(const ObservablePair& pair) {
    return {{"a_plus", matrix_to_json(pair.plus)}, {"a_minus", matrix_to_json(pair.minus)}};
}

Json to_json(const PureDecomposition& dec) {
    Json comps = Json::array();
    for (const auto& c : dec.components) {
        comps.push_back({{"weight", c.weight}, {"vector", vector_to_json(c.vector)}});
    }
    return {{"dims", {dec.dims.plus, dec.dims.minus}}, {"components", comps}};
}

StateDocument parse_state_document(const Json& j, const std::string& locus) {
    StateDocument doc;
    doc.dims = parse_dims(field(j, "dims", locus), locus + ": dims");
    const Json& rho = field(j, "rho", locus);
    const std::string rho_locus = locus + ": rho";
    const Index n = doc.dims.total();
    if (rho.is_array() && !rho.empty() && !rho[0].is_array()) {
        fail(rho_locus, "expected rows of [re, im] entries");
    }
    if (n > 1 && rho.is_array() && rho.size() == static_cast<std::size_t>(n * n) &&
        rho[0].is_array() && rho[0].size() == 2 && rho[0][0].is_number()) {
        // Flat row-major list of [re, im] pairs.
        doc.rho = Matrix(n, n);
        for (Index i = 0; i < n * n; ++i) {
            doc.rho(i / n, i % n) = complex_entry(rho[static_cast<std::size_t>(i)],
                                                  rho_locus + "[" + std::to_string(i) + "]");
        }
    } else {
        doc.rho = matrix_from_json(rho, rho_locus);
    }
    if (doc.rho.rows() != n || doc.rho.cols() != n) {
        throw Error(ErrorCode::DimensionMismatch,
                    rho_locus + ": " + std::to_string(doc.rho.rows()) + "x" +
                        std::to_string(doc.rho.cols()) + " does not match dims " +
                        std::to_string(doc.dims.plus) + "x" + std::to_string(doc.dims.minus));
    }
    if (auto it = j.find("tolerances"); it != j.end()) {
        doc.tolerances = parse_tolerances(*it, locus + ": tolerances");
    }
    if (auto it = j.find("scenario"); it != j.end()) {
        if (!it->is_string()) fail(locus + ": scenario", "expected a string");
        doc.scenario = with_locus(locus + ": scenario",
                                  [&] { return parse_scenario(it->get<std::string>()); });
    }
    return doc;
}

ObservablePair parse_pair(const Json& j, const std::string& locus) {
    const Matrix plus = matrix_from_json(field(j, "a_plus", locus), locus + ": a_plus");
    const Matrix minus = matrix_from_json(field(j, "a_minus", locus), locus + ": a_minus");
    return with_locus(locus, [&] { return make_pair(plus, minus); });
}

PureDecomposition parse_decomposition(const Json& j, const std::string& locus) {
    PureDecomposition dec;
    dec.dims = parse_dims(field(j, "dims", locus), locus + ": dims");
    const Json& comps = field(j, "components", locus);
    if (!comps.is_array() || comps.empty()) fail(locus + ": components", "expected a non-empty array");
    for (std::size_t k = 0; k < comps.size(); ++k) {
        const std::string here = locus + ": components[" + std::to_string(k) + "]";
        PureComponent c;
        c.weight = number(field(comps[k], "weight", here), here + ".weight");
        c.vector = vector_from_json(field(comps[k], "vector", here), here + ".vector");
        if (c.vector.size() != dec.dims.total()) {
            throw Error(ErrorCode::DimensionMismatch, here + ".vector: length does not match dims");
        }
        dec.components.push_back(std::move(c));
    }
    return dec;
}

Json read_json(std::istream& in, const std::string& locus) {
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        fail(locus, std::string("malformed JSON: ") + e.what());
    }
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(path, "cannot open file");
    return read_json(in, path);
}

}  // namespace twinobs
