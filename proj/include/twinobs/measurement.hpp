#pragma once

#include "twinobs/linalg.hpp"
#include "twinobs/state.hpp"
#include "twinobs/twin_solver.hpp"

#include <optional>
#include <vector>

namespace twinobs {

struct CollapseResult {
    double probability = 0.0;
    std::optional<Matrix> post_state;  // P rho P / Tr(P rho); absent when the event cannot occur
};

/// Ideal (Luders) measurement of the event P. Throws NotProjector.
CollapseResult luders_collapse(const Matrix& rho, const Matrix& projector, double rank_tol);

struct EventPair {
    Matrix e;
    Matrix f;
    bool commuting = false;
};

EventPair make_event_pair(const Matrix& e, const Matrix& f, double residual_tol);

enum class CertaintyCriterion { Evaluated, NotCommuting, ProbabilityZero };

/// The three equivalence criteria for events E, F in rho:
///   (1) E rho E = F rho F, (2) Tr(F E rho E)/Tr(E rho) = Tr(E F rho F)/Tr(F rho) = 1,
///   (3) E rho = F rho.
struct CriteriaReport {
    bool commuting = false;
    double probability_e = 0.0;
    double probability_f = 0.0;
    double collapse_residual = 0.0;   // (1)
    double algebraic_residual = 0.0;  // (3)
    CertaintyCriterion certainty_status = CertaintyCriterion::NotCommuting;
    double certainty_e_then_f = 0.0;  // (2), valid when Evaluated
    double certainty_f_then_e = 0.0;
    bool collapse_pass = false;
    bool algebraic_pass = false;
    bool certainty_pass = false;
    double tolerance = 0.0;
    double certainty_tolerance = 0.0;

    /// All applicable verdicts agree.
    bool coherent() const;
};

inline constexpr double kCertaintyCriterionTol = 1e-9;

CriteriaReport event_equivalence(const Matrix& rho, const EventPair& events, const Tolerances& tol);

struct CertaintyResult {
    std::optional<double> value;  // sharp value, when both directions agree it is certain
    double candidate = 0.0;       // Tr(A rho)
    double residual = 0.0;        // |A rho - a rho|
    double probability = 0.0;     // Tr(P_a rho)
    bool sharp_by_relation = false;
    bool sharp_by_probability = false;

    bool consistent() const { return sharp_by_relation == sharp_by_probability; }
};

/// A rho = a rho holds iff Tr(P_a rho) = 1; both directions are evaluated.
CertaintyResult certainty_test(const Matrix& rho, const Matrix& a, const Tolerances& tol);

struct MeasurementOutcome {
    double value = 0.0;
    double probability_plus = 0.0;   // Tr P+(a) rho
    double probability_minus = 0.0;  // Tr P-(a) rho
    Matrix post_state_plus;          // collapse by P+(a) (x) 1
    Matrix post_state_minus;         // collapse by 1 (x) P-(a)
    Matrix conditional_minus;        // state of S- once P+(a) occurred
    Matrix conditional_plus;         // state of S+ once P-(a) occurred
    double collapse_residual = 0.0;
};

inline constexpr double kDistantMeasurementTol = 1e-9;

struct DistantMeasurementReport {
    std::vector<MeasurementOutcome> outcomes;  // positive-probability values of sigma'
    double expectation_plus = 0.0;
    double expectation_minus = 0.0;
    double max_probability_residual = 0.0;
    double max_collapse_residual = 0.0;
    double probability_sum = 0.0;
    double twin_residual = 0.0;
    double tolerance = kDistantMeasurementTol;
    bool verdict = false;
};

/// Measuring A+ directly and A- directly give the same statistics and the same collapse.
DistantMeasurementReport distant_measurement_report(const BipartiteState& state,
                                                    const ObservablePair& pair);

}  // namespace twinobs
