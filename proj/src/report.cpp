#include "twinobs/report.hpp"

#include "twinobs/error.hpp"
#include "twinobs/measurement.hpp"
#include "twinobs/schmidt.hpp"
#include "twinobs/twin_analysis.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace twinobs {

namespace {

// Twin-space comparisons use the looser tolerance for subspace agreement.
constexpr double kSpanTol = 1e-8;
constexpr double kSchmidtTol = 1e-9;

class Checks {
public:
    void add(const std::string& name, double residual, double tolerance) {
        Json e = check_entry(name, residual, tolerance);
        ok_ = ok_ && e["pass"].get<bool>();
        list_.push_back(std::move(e));
    }
    void fail(const std::string& name, const std::string& detail) {
        ok_ = false;
        list_.push_back(
            {{"check", name}, {"residual", nullptr}, {"tolerance", nullptr}, {"pass", false},
             {"detail", detail}});
    }
    void fail(const std::string& name, const Error& e) {
        fail(name, std::string(e.what()));
    }
    bool ok() const { return ok_; }
    Json json() const { return list_; }

private:
    Json list_ = Json::array();
    bool ok_ = true;
};

Json real_vector_json(const RealVector& v) {
    Json out = Json::array();
    for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

Json index_vector_json(const std::vector<Index>& v) {
    Json out = Json::array();
    for (Index x : v) out.push_back(x);
    return out;
}

Json tolerance_json(const Tolerances& t) {
    return {{"rank_tol", t.rank_tol},
            {"residual_tol", t.residual_tol},
            {"cluster_tol", t.cluster_tol},
            {"herm_tol", t.herm_tol}};
}

Json header(const BipartiteState& state, const char* command) {
    return {{"command", command},
            {"dims", {state.dims().plus, state.dims().minus}},
            {"tolerances", tolerance_json(state.tolerances())}};
}

Json space_summary(const TwinSpace& space) {
    return {{"dim_total", space.dim_total},
            {"dim_detectable", space.dim_detectable},
            {"dim_undetectable_plus", space.dim_undetectable_plus},
            {"dim_undetectable_minus", space.dim_undetectable_minus},
            {"nonsingular", space.nonsingular}};
}

Json value_index_map(const std::vector<double>& sigma) {
    Json out = Json::array();
    for (std::size_t k = 0; k < sigma.size(); ++k) out.push_back({{"value", sigma[k]}, {"index", k}});
    return out;
}

// Spectral analysis of one pair; failures are recorded as failed checks.
Json pair_analysis(const BipartiteState& state, const ObservablePair& pair, Checks& checks,
                   const std::string& prefix) {
    const Tolerances& tol = state.tolerances();
    Json j;
    try {
        const DetectableSplit split = split_detectable(pair, state);
        checks.add(prefix + "off-block coupling", split.off_block_residual, tol.residual_tol);
        checks.add(prefix + "detectable parts are twins", split.detectable_twin_residual,
                   tol.residual_tol);
        checks.add(prefix + "undetectable parts annihilate rho", split.undetectable_residual,
                   tol.residual_tol);
        j["detectable_plus"] = matrix_to_json(split.detectable_plus);
        j["detectable_minus"] = matrix_to_json(split.detectable_minus);
        const DetectableSpectra spectra = detectable_spectra(split, tol.cluster_tol);
        j["spectrum"] = spectra.values;
        j["multiplicity_plus"] = index_vector_json(spectra.mult_plus);
        j["multiplicity_minus"] = index_vector_json(spectra.mult_minus);
        checks.add(prefix + "equal detectable spectra", spectra.max_mismatch, kSpanTol);
        checks.add(prefix + "rho' vanishes across distinct values",
                   off_spectrum_support_residual(split, tol.cluster_tol), kSpanTol);
        const CharacteristicTwins chars = characteristic_projector_twins(split, state);
        checks.add(prefix + "characteristic projectors are twins", chars.max_twin_residual(),
                   kSpanTol);
        checks.add(prefix + "sum a P(a) rho reconstructs A rho", chars.state_reconstruction_residual,
                   kSpanTol);
        Json probs = Json::array();
        for (const auto& cp : chars.pairs) {
            probs.push_back({{"value", cp.value}, {"probability", cp.probability_prime}});
        }
        j["characteristic_values"] = probs;
    } catch (const Error& e) {
        checks.fail(prefix + "spectral analysis", e);
    }
    return j;
}

Json simplified_json(const SimplifiedMatrix& sm) {
    return {{"sigma_prime", value_index_map(sm.sigma_prime)},
            {"compressed", matrix_to_json(sm.compressed)},
            {"max_forbidden", sm.max_forbidden}};
}

// The listed pairs may span less than the full twin space (undetectable parts).
Index reference_span_dim(const std::vector<ObservablePair>& refs) {
    if (refs.empty()) return 0;
    const RealVector first = pair_coordinates(refs.front());
    RealMatrix coords(first.size(), static_cast<Index>(refs.size()));
    for (std::size_t k = 0; k < refs.size(); ++k) coords.col(static_cast<Index>(k)) = pair_coordinates(refs[k]);
    Eigen::ColPivHouseholderQR<RealMatrix> qr(coords);
    qr.setThreshold(1e-9);
    return qr.rank();
}

}  // namespace

Json check_entry(const std::string& name, double residual, double tolerance) {
    const bool pass = std::isfinite(residual) && residual <= tolerance;
    return {{"check", name}, {"residual", residual}, {"tolerance", tolerance}, {"pass", pass}};
}

Report solve_report(const BipartiteState& state, std::optional<Scenario> scenario) {
    const Tolerances& tol = state.tolerances();
    const TwinSpace space = solve_twin_space(state);
    Json doc = header(state, "solve");
    doc.update(space_summary(space));
    Json warnings = Json::array();
    if (space.nonsingular) warnings.push_back("nonsingular state: trivial twins only");
    doc["warnings"] = warnings;

    Checks checks;
    Json basis = Json::array();
    for (std::size_t k = 0; k < space.basis.size(); ++k) {
        basis.push_back(to_json(space.basis[k]));
        checks.add("basis pair " + std::to_string(k) + " is a twin",
                   twin_residual(state.rho(), state.dims(), space.basis[k]), tol.residual_tol);
    }
    doc["basis"] = basis;
    const ConsequenceReport cons = twins_restrict_to_range_vectors(state, space);
    checks.add("twins of every range vector", cons.range_vector_residual, cons.tolerance);
    checks.add("same twins for any state with this range", cons.same_range_distance, kSpanTol);

    if (scenario) {
        doc["scenario"] = std::string(to_string(*scenario));
        doc["note"] = "the twin space depends only on the range; mixture weights are free";
        const SpinScenario s{*scenario, {}};
        if (s.dims() == state.dims()) {
            Json refs = Json::array();
            for (const ObservablePair& ref : reference_twins(*scenario)) {
                refs.push_back(to_json(ref));
                checks.add("reference pair " + std::to_string(refs.size() - 1) + " in twin space",
                           pair_containment(ref, space), kSpanTol);
            }
            doc["reference_pairs"] = refs;
            doc["reference_span_dim"] = reference_span_dim(reference_twins(*scenario));
        }
    }
    doc["checks"] = checks.json();
    doc["verdict"] = checks.ok();
    return {doc, checks.ok()};
}

Report verify_report(const BipartiteState& state, const ObservablePair& pair) {
    const Tolerances& tol = state.tolerances();
    Json doc = header(state, "verify");
    Checks checks;
    const TwinCheck twin = is_twin_pair(state, pair);
    checks.add("(A+ - A-) rho = 0", twin.residual, twin.tolerance);
    const CommutationResiduals comm = commutation_check(pair, state);
    checks.add("[A+, rho+] = 0", comm.rho_plus, tol.residual_tol);
    checks.add("[A-, rho-] = 0", comm.rho_minus, tol.residual_tol);
    checks.add("[A+, R+] = 0", comm.range_plus, tol.residual_tol);
    checks.add("[A-, R-] = 0", comm.range_minus, tol.residual_tol);
    if (twin.verdict) doc["analysis"] = pair_analysis(state, pair, checks, "");
    doc["checks"] = checks.json();
    doc["verdict"] = checks.ok();
    return {doc, checks.ok()};
}

Report analyze_report(const BipartiteState& state, std::uint64_t seed) {
    Json doc = header(state, "analyze");
    Checks checks;

    const GeometryReport geometry = verify_subspace_geometry(state);
    for (const auto& e : geometry.entries) checks.add(e.relation, e.residual, geometry.tolerance);

    const TwinSpace space = solve_twin_space(state);
    doc["twin_space"] = space_summary(space);
    Json pairs = Json::array();
    for (std::size_t k = 0; k < space.basis.size(); ++k) {
        Json entry = pair_analysis(state, space.basis[k], checks,
                                   "basis pair " + std::to_string(k) + ": ");
        entry["pair"] = to_json(space.basis[k]);
        pairs.push_back(std::move(entry));
    }
    doc["basis_analysis"] = pairs;

    Json complete = {{"seed", seed}, {"attempt_budget", kCompleteTwinAttempts}};
    const auto found = find_complete_twins(space, state, seed);
    complete["found"] = found.has_value();
    if (found) {
        complete["attempts"] = found->attempts;
        complete["pair"] = to_json(found->pair);
        complete["sigma_prime"] = found->bases.sigma_prime;
        try {
            const SimplifiedMatrix sm = simplified_matrix(state, found->bases);
            complete["simplified"] = simplified_json(sm);
            checks.add("simplified matrix sparsity", sm.max_forbidden, sm.tolerance);
        } catch (const Error& e) {
            checks.fail("simplified matrix sparsity", e);
        }
    } else {
        complete["note"] = "not found within the attempt budget; this does not prove none exist";
    }
    doc["complete_twins"] = complete;
    doc["checks"] = checks.json();
    doc["verdict"] = checks.ok();
    return {doc, checks.ok()};
}

Report measure_report(const BipartiteState& state, const ObservablePair& pair) {
    Json doc = header(state, "measure");
    Checks checks;
    try {
        const DistantMeasurementReport r = distant_measurement_report(state, pair);
        checks.add("(A+ - A-) rho = 0", r.twin_residual, state.tolerances().residual_tol);
        checks.add("Tr A+ rho = Tr A- rho", std::abs(r.expectation_plus - r.expectation_minus),
                   r.tolerance);
        checks.add("Tr P+(a) rho = Tr P-(a) rho", r.max_probability_residual, r.tolerance);
        checks.add("equal collapse via P+(a) and P-(a)", r.max_collapse_residual, r.tolerance);
        checks.add("probabilities sum to one", std::abs(r.probability_sum - 1.0), r.tolerance);
        doc["expectation_plus"] = r.expectation_plus;
        doc["expectation_minus"] = r.expectation_minus;
        Json outcomes = Json::array();
        for (const auto& o : r.outcomes) {
            outcomes.push_back({{"value", o.value},
                                {"probability_plus", o.probability_plus},
                                {"probability_minus", o.probability_minus},
                                {"post_state", matrix_to_json(o.post_state_plus)},
                                {"conditional_minus", matrix_to_json(o.conditional_minus)},
                                {"conditional_plus", matrix_to_json(o.conditional_plus)},
                                {"collapse_residual", o.collapse_residual}});
        }
        doc["outcomes"] = outcomes;
    } catch (const Error& e) {
        checks.fail("distant measurement", e);
    }
    doc["checks"] = checks.json();
    doc["verdict"] = checks.ok();
    return {doc, checks.ok()};
}

Report schmidt_report(const BipartiteState& state,
                      const std::optional<PureDecomposition>& decomposition, std::uint64_t seed) {
    const Tolerances& tol = state.tolerances();
    Json doc = header(state, "schmidt");
    Checks checks;
    const TwinSpace space = solve_twin_space(state);
    const auto found = find_complete_twins(space, state, seed);
    if (!found) {
        checks.fail("complete twins found", "no complete twins within " +
                                                std::to_string(kCompleteTwinAttempts) +
                                                " attempts (seed " + std::to_string(seed) + ")");
        doc["checks"] = checks.json();
        doc["verdict"] = false;
        return {doc, false};
    }
    const MatchedBases& bases = found->bases;
    doc["complete_pair"] = to_json(found->pair);
    doc["basis_plus"] = matrix_to_json(bases.basis_plus);
    doc["basis_minus"] = matrix_to_json(bases.basis_minus);

    try {
        const SimplifiedMatrix sm = simplified_matrix(state, bases);
        doc["simplified"] = simplified_json(sm);
        checks.add("simplified matrix sparsity", sm.max_forbidden, sm.tolerance);
    } catch (const Error& e) {
        checks.fail("simplified matrix sparsity", e);
    }

    if (state_range(state).basis.cols() == 1) {
        const SchmidtForm form = pure_schmidt(state, bases);
        doc["schmidt"] = {{"sigma_prime", form.sigma_prime},
                          {"coefficients", real_vector_json(form.coefficients)},
                          {"basis_minus", matrix_to_json(form.basis_minus)}};
        checks.add("Schmidt reconstruction", form.reconstruction_error, kSchmidtTol);
        checks.add("r_a match the spectra of rho+ and rho-", form.spectrum_mismatch, kSchmidtTol);
    }

    if (decomposition) {
        checks.add("decomposition reproduces rho", max_abs(decomposition->density() - state.rho()),
                   tol.residual_tol);
        try {
            const GeneralizedSchmidtExpansion ex = simultaneous_expansion(*decomposition, bases, tol);
            Json comps = Json::array();
            for (std::size_t i = 0; i < ex.coefficients.size(); ++i) {
                comps.push_back({{"alpha", vector_to_json(ex.coefficients[i])},
                                 {"r", real_vector_json(ex.weights[i])}});
            }
            doc["expansion"] = {{"sigma_prime", ex.sigma_prime}, {"components", comps}};
            checks.add("expansion off-diagonal", ex.max_off_diagonal, tol.residual_tol);
            checks.add("expansion normalization", ex.max_norm_defect, 1e-10);
            checks.add("expansion reconstructs M", ex.reconstruction_residual, kSchmidtTol);
        } catch (const Error& e) {
            checks.fail("simultaneous expansion", e);
        }
        const CompatibilityReport compat = compatibility_report(*decomposition, bases, tol);
        Json entries = Json::array();
        for (const auto& e : compat.entries) {
            entries.push_back({{"side", e.side == Side::Plus ? "+" : "-"},
                               {"first", e.first},
                               {"second", e.second},
                               {"residual", e.residual}});
        }
        doc["compatibility"] = entries;
        checks.add("subsystem operators commute", compat.max_residual, compat.tolerance);
    }
    doc["checks"] = checks.json();
    doc["verdict"] = checks.ok();
    return {doc, checks.ok()};
}

namespace {

bool numeric_leaves(const Json& j) {
    if (j.is_number() || j.is_boolean() || j.is_null()) return true;
    if (!j.is_array()) return false;
    for (const auto& x : j) {
        if (!numeric_leaves(x)) return false;
    }
    return true;
}

std::string format_number(const Json& j) {
    if (j.is_null()) return "n/a";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", j.get<double>());
    return buf;
}

void render(const Json& j, int indent, std::ostringstream& out) {
    const std::string pad(static_cast<std::size_t>(indent), ' ');
    if (j.is_object() && j.contains("check") && j.contains("pass")) {
        out << pad << (j["pass"].get<bool>() ? "PASS " : "FAIL ") << j["check"].get<std::string>()
            << "  residual=" << format_number(j["residual"])
            << " tol=" << format_number(j["tolerance"]);
        if (j.contains("detail")) out << "  (" << j["detail"].get<std::string>() << ")";
        out << "\n";
        return;
    }
    if (j.is_object()) {
        for (const auto& [key, value] : j.items()) {
            if (value.is_primitive() || numeric_leaves(value)) {
                out << pad << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump())
                    << "\n";
            } else {
                out << pad << key << ":\n";
                render(value, indent + 2, out);
            }
        }
        return;
    }
    if (j.is_array()) {
        for (std::size_t k = 0; k < j.size(); ++k) {
            if (j[k].is_primitive()) {
                out << pad << "- " << (j[k].is_string() ? j[k].get<std::string>() : j[k].dump()) << "\n";
            } else if (j[k].is_object() && j[k].contains("check")) {
                render(j[k], indent, out);
            } else {
                out << pad << "[" << k << "]\n";
                render(j[k], indent + 2, out);
            }
        }
        return;
    }
    out << pad << j.dump() << "\n";
}

}  // namespace

std::string render_text(const Json& document) {
    std::ostringstream out;
    render(document, 0, out);
    return out.str();
}

}  // namespace twinobs
