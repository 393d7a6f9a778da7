#pragma once

#include "twinobs/linalg.hpp"
#include "twinobs/state.hpp"

#include <optional>
#include <vector>

namespace twinobs {

/// A+ on H+ and A- on H-. Twins when (A+ (x) 1) rho = (1 (x) A-) rho.
struct ObservablePair {
    Matrix plus;
    Matrix minus;

    Dims dims() const { return {plus.rows(), minus.rows()}; }
};

/// Hermitizes both sides, rejecting anything further than herm_tol from Hermitian.
ObservablePair make_pair(const Matrix& plus, const Matrix& minus, double herm_tol = 1e-9);
ObservablePair scalar_pair(Dims dims);

/// Concatenated hermitian_basis coordinates of A+ then A-. The map is an isometry from the
/// sum of Hilbert-Schmidt inner products to the Euclidean one.
RealVector pair_coordinates(const ObservablePair& pair);
ObservablePair pair_from_coordinates(const RealVector& x, Dims dims);

struct TwinSpace {
    Dims dims;
    std::vector<ObservablePair> basis;  // basis[0] is the normalized scalar pair
    RealMatrix coordinates;             // orthonormal columns, one per basis pair
    Index dim_total = 0;
    Index dim_detectable = 0;
    Index dim_undetectable_plus = 0;    // (dim N+)^2
    Index dim_undetectable_minus = 0;   // (dim N-)^2
    bool nonsingular = false;

    ObservablePair combination(const RealVector& weights) const;
};

/// Kernel of the real-linear map x -> (A+(x) (x) 1 - 1 (x) A-(x)) C over Hermitian coordinates,
/// where C is an orthonormal basis of the range of rho.
TwinSpace solve_twin_space(const BipartiteState& state);

/// Orthonormal coordinates of the detectable twins (R+ A+ R+, R- A- R-) of a solved space.
RealMatrix detectable_coordinates(const TwinSpace& space, const BipartiteState& state);

struct TwinCheck {
    bool verdict = false;
    double residual = 0.0;
    double tolerance = 0.0;
};

double twin_residual(const Matrix& rho, Dims dims, const ObservablePair& pair);
TwinCheck is_twin_pair(const BipartiteState& state, const ObservablePair& pair);

/// If B = B+ (x) 1 + 1 (x) B- has a sharp value b in the state, returns
/// (B+ - b/2, -B- + b/2), which is a twin pair.
std::optional<ObservablePair> additive_twins(const BipartiteState& state, const Matrix& b_plus,
                                             const Matrix& b_minus);

struct ConsequenceReport {
    Index range_vectors_checked = 0;
    double range_vector_residual = 0.0;   // every basis twin is a twin of each range eigenvector
    double same_range_distance = 0.0;     // reweighted state on the same range, same twin space
    Index reweighted_dim = 0;
    double tolerance = 0.0;

    bool pass() const {
        return range_vector_residual <= tolerance && same_range_distance <= tolerance;
    }
};

ConsequenceReport twins_restrict_to_range_vectors(const BipartiteState& state,
                                                  const TwinSpace& space);

double twin_space_distance(const TwinSpace& a, const TwinSpace& b);
/// Zero when every pair of `inner` lies in `outer`.
double twin_space_containment(const TwinSpace& inner, const TwinSpace& outer);
double pair_containment(const ObservablePair& pair, const TwinSpace& space);

struct AdmissionReport {
    bool verdict = false;
    double range_residual = 0.0;      // |(A+ - A-) R|
    double component_residual = 0.0;  // largest |(A+ - A-) phi| over range eigenvectors
    double twin_residual = 0.0;
    double tolerance = 0.0;
};

AdmissionReport states_admitting_twins(const ObservablePair& pair, const BipartiteState& state);

}  // namespace twinobs
