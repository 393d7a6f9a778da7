#include "twinobs/measurement.hpp"

#include "twinobs/error.hpp"
#include "twinobs/twin_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace twinobs {

namespace {

constexpr double kProjectorTol = 1e-9;

void require_projector(const Matrix& p, Index dim, const char* what) {
    if (p.rows() != dim || p.cols() != dim) {
        throw Error(ErrorCode::DimensionMismatch, std::string(what) + " does not match state");
    }
    if (!is_projector(p, kProjectorTol)) {
        throw Error(ErrorCode::NotProjector, std::string(what) + " is not an orthogonal projector");
    }
}

double expectation(const Matrix& op, const Matrix& rho) { return (op * rho).trace().real(); }

}  // namespace

CollapseResult luders_collapse(const Matrix& rho, const Matrix& projector, double rank_tol) {
    require_projector(projector, rho.rows(), "event");
    CollapseResult out;
    out.probability = expectation(projector, rho);
    if (out.probability > rank_tol) {
        Matrix post = projector * rho * projector / out.probability;
        out.post_state = (post + post.adjoint()) / 2.0;
    }
    return out;
}

EventPair make_event_pair(const Matrix& e, const Matrix& f, double residual_tol) {
    require_projector(e, e.rows(), "E");
    require_projector(f, e.rows(), "F");
    return {e, f, max_abs(commutator(e, f)) <= residual_tol};
}

bool CriteriaReport::coherent() const {
    if (collapse_pass != algebraic_pass) return false;
    if (certainty_status == CertaintyCriterion::Evaluated && certainty_pass != collapse_pass) {
        return false;
    }
    return true;
}

CriteriaReport event_equivalence(const Matrix& rho, const EventPair& events, const Tolerances& tol) {
    const Matrix& e = events.e;
    const Matrix& f = events.f;
    require_projector(e, rho.rows(), "E");
    require_projector(f, rho.rows(), "F");

    CriteriaReport r;
    r.tolerance = tol.residual_tol;
    r.certainty_tolerance = kCertaintyCriterionTol;
    r.commuting = max_abs(commutator(e, f)) <= tol.residual_tol;
    r.probability_e = expectation(e, rho);
    r.probability_f = expectation(f, rho);
    const Matrix ere = e * rho * e;
    const Matrix frf = f * rho * f;
    r.collapse_residual = max_abs(ere - frf);
    r.algebraic_residual = max_abs(e * rho - f * rho);
    r.collapse_pass = r.collapse_residual <= r.tolerance;
    r.algebraic_pass = r.algebraic_residual <= r.tolerance;

    if (!r.commuting) {
        r.certainty_status = CertaintyCriterion::NotCommuting;
    } else if (r.probability_e <= tol.rank_tol || r.probability_f <= tol.rank_tol) {
        r.certainty_status = CertaintyCriterion::ProbabilityZero;
    } else {
        r.certainty_status = CertaintyCriterion::Evaluated;
        r.certainty_e_then_f = expectation(f, ere) / r.probability_e;
        r.certainty_f_then_e = expectation(e, frf) / r.probability_f;
        r.certainty_pass = std::abs(r.certainty_e_then_f - 1.0) <= r.certainty_tolerance &&
                           std::abs(r.certainty_f_then_e - 1.0) <= r.certainty_tolerance;
    }
    return r;
}

CertaintyResult certainty_test(const Matrix& rho, const Matrix& a, const Tolerances& tol) {
    if (a.rows() != rho.rows() || a.cols() != rho.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "observable does not match state");
    }
    const Matrix op = hermitize(a, tol.herm_tol, "observable");
    CertaintyResult out;
    out.candidate = expectation(op, rho);
    out.residual = max_abs(op * rho - out.candidate * rho);
    out.sharp_by_relation = out.residual <= tol.residual_tol;

    // Characteristic projector at the cluster nearest to the candidate.
    const EigenCluster* nearest = nullptr;
    const auto clusters = cluster_spectrum(op, tol.cluster_tol, tol.herm_tol);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& c : clusters) {
        const double gap = std::abs(c.value - out.candidate);
        if (gap < best) {
            best = gap;
            nearest = &c;
        }
    }
    if (nearest && best <= tol.cluster_tol + tol.residual_tol) {
        out.probability = expectation(nearest->projector, rho);
    }
    out.sharp_by_probability = out.probability >= 1.0 - tol.residual_tol;
    if (out.sharp_by_relation && out.sharp_by_probability) out.value = out.candidate;
    return out;
}

DistantMeasurementReport distant_measurement_report(const BipartiteState& state,
                                                    const ObservablePair& pair) {
    const Dims dims = state.dims();
    const Tolerances& tol = state.tolerances();
    const Matrix& rho = state.rho();

    DistantMeasurementReport report;
    report.twin_residual = is_twin_pair(state, pair).residual;
    report.expectation_plus = expectation(lift(pair.plus, dims, Side::Plus), rho);
    report.expectation_minus = expectation(lift(pair.minus, dims, Side::Minus), rho);

    const DetectableSplit split = split_detectable(pair, state);
    const CharacteristicTwins chars = characteristic_projector_twins(split, state);
    for (const CharacteristicPair& cp : chars.pairs) {
        const Matrix pp = lift(cp.full_plus, dims, Side::Plus);
        const Matrix pm = lift(cp.full_minus, dims, Side::Minus);
        const CollapseResult by_plus = luders_collapse(rho, pp, tol.rank_tol);
        const CollapseResult by_minus = luders_collapse(rho, pm, tol.rank_tol);
        report.max_probability_residual = std::max(
            report.max_probability_residual, std::abs(by_plus.probability - by_minus.probability));
        report.probability_sum += by_plus.probability;
        if (!by_plus.post_state || !by_minus.post_state) continue;

        MeasurementOutcome outcome;
        outcome.value = cp.value;
        outcome.probability_plus = by_plus.probability;
        outcome.probability_minus = by_minus.probability;
        outcome.post_state_plus = *by_plus.post_state;
        outcome.post_state_minus = *by_minus.post_state;
        outcome.collapse_residual = max_abs(outcome.post_state_plus - outcome.post_state_minus);
        outcome.conditional_minus = partial_trace(rho * pp, dims, Side::Plus) / by_plus.probability;
        outcome.conditional_plus = partial_trace(rho * pm, dims, Side::Minus) / by_minus.probability;
        report.max_collapse_residual =
            std::max(report.max_collapse_residual, outcome.collapse_residual);
        report.outcomes.push_back(std::move(outcome));
    }
    report.verdict = report.twin_residual <= tol.residual_tol &&
                     report.max_probability_residual <= report.tolerance &&
                     report.max_collapse_residual <= report.tolerance &&
                     std::abs(report.probability_sum - 1.0) <= report.tolerance &&
                     std::abs(report.expectation_plus - report.expectation_minus) <= report.tolerance;
    return report;
}

}  // namespace twinobs
