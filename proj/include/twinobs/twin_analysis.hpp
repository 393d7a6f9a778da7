#pragma once

// Spectral structure of twin pairs: detectable/undetectable split, common detectable
// spectrum, characteristic projectors, and closure under functions and symmetric polynomials.

#include "twinobs/linalg.hpp"
#include "twinobs/state.hpp"
#include "twinobs/twin_solver.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace twinobs {

struct CommutationResiduals {
    double rho_plus = 0.0;    // [A+, rho+]
    double rho_minus = 0.0;   // [A-, rho-]
    double range_plus = 0.0;  // [A+, R+]
    double range_minus = 0.0; // [A-, R-]

    double max() const;
};

CommutationResiduals commutation_check(const ObservablePair& pair, const BipartiteState& state);

/// A_s = A'_s (+) A''_s with respect to H_s = R_s (+) N_s.
struct DetectableSplit {
    Matrix detectable_plus;     // r+ x r+, in the basis bases.range_plus
    Matrix detectable_minus;
    Matrix undetectable_plus;   // n+ x n+, in the basis bases.null_plus
    Matrix undetectable_minus;
    SubsystemBases bases;
    Matrix rho_prime;           // rho restricted to R+ (x) R-
    double off_block_residual = 0.0;
    double detectable_twin_residual = 0.0;  // (A'+ - A'-) rho'
    double undetectable_residual = 0.0;     // (0' (+) A''_s) rho

    Dims prime_dims() const { return {detectable_plus.rows(), detectable_minus.rows()}; }
    /// (A'_s (+) 0''_s) on the full subsystem spaces.
    ObservablePair embedded_detectable() const;
    /// (0'_s (+) A''_s) on the full subsystem spaces.
    ObservablePair embedded_undetectable() const;
};

/// Throws NotReducible if A_s mixes R_s and N_s beyond residual_tol.
DetectableSplit split_detectable(const ObservablePair& pair, const BipartiteState& state);

struct DetectableSpectra {
    std::vector<double> values;      // common characteristic values, ascending
    std::vector<Index> mult_plus;
    std::vector<Index> mult_minus;
    double max_mismatch = 0.0;
};

/// Throws SpectraMismatch when the two detectable spectra differ.
DetectableSpectra detectable_spectra(const DetectableSplit& split, double cluster_tol);

/// rho'|m+>|m-> = 0 whenever the characteristic values of |m+> and |m-> differ;
/// returns the largest such norm.
double off_spectrum_support_residual(const DetectableSplit& split, double cluster_tol);

struct CharacteristicPair {
    double value = 0.0;
    Matrix prime_plus;    // P'+(a) on R+
    Matrix prime_minus;   // P'-(a) on R-
    Matrix full_plus;     // P+(a), characteristic projector of the full A+
    Matrix full_minus;
    double twin_residual = 0.0;       // (P'+(a) - P'-(a)) rho'
    double full_twin_residual = 0.0;  // (P+(a) - P-(a)) rho
    double probability_prime = 0.0;   // Tr P'+(a) rho'
    double probability_plus = 0.0;    // Tr P+(a) rho
    double probability_minus = 0.0;   // Tr P-(a) rho
};

struct CharacteristicTwins {
    std::vector<CharacteristicPair> pairs;
    double reconstruction_residual = 0.0;        // sum_a a P'(a) vs A'
    double state_reconstruction_residual = 0.0;  // sum_a a P(a) rho vs A rho

    double max_twin_residual() const;
};

/// Projectors by the Lagrange product prod_{b != a} (A' - b)/(a - b) over the common spectrum.
CharacteristicTwins characteristic_projector_twins(const DetectableSplit& split,
                                                   const BipartiteState& state);

/// (point, value) samples of a real function on the spectra of a pair.
using ValueTable = std::vector<std::pair<double, double>>;

ValueTable tabulate(const ObservablePair& pair, const std::function<double(double)>& f,
                    double cluster_tol);

/// Spectral calculus on each side; every eigenvalue must match a table point within
/// cluster_tol.
ObservablePair apply_function(const ObservablePair& pair, const ValueTable& table,
                              double cluster_tol);
ObservablePair apply_function(const ObservablePair& pair, const std::function<double(double)>& f,
                              double cluster_tol);

struct Monomial {
    double coefficient = 0.0;
    std::vector<unsigned> exponents;  // one per variable
};

struct Polynomial {
    std::vector<Monomial> terms;

    std::size_t variables() const;
    bool is_symmetric(double tol = 1e-12) const;
};

/// Evaluates a symmetric polynomial on twin pairs, each monomial replaced by the average
/// of its operator word over all orderings. Throws NotSymmetric for non-symmetric input.
ObservablePair symmetric_polynomial(const std::vector<ObservablePair>& pairs,
                                    const Polynomial& poly, const BipartiteState& state);

struct MatchedBases {
    std::vector<double> sigma_prime;  // ascending
    Matrix basis_plus;                // d+ x |sigma'|, column k has value sigma_prime[k]
    Matrix basis_minus;               // d- x |sigma'|
};

/// sum_a a |a><a| on side s.
Matrix detectable_operator(const MatchedBases& bases, Side s);

struct CompleteTwins {
    ObservablePair pair;  // detectable twins padded with zero on the null spaces
    MatchedBases bases;
    Index attempts = 0;
};

inline constexpr Index kCompleteTwinAttempts = 64;

/// Seeded random search of the detectable twin subspace for a pair whose detectable parts
/// are both nondegenerate. An empty result means "not found", not "none exist".
std::optional<CompleteTwins> find_complete_twins(const TwinSpace& space, const BipartiteState& state,
                                                 std::uint64_t seed = 0,
                                                 Index attempts = kCompleteTwinAttempts);

}  // namespace twinobs
