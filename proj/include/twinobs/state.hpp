#pragma once

#include "twinobs/linalg.hpp"

#include <string>
#include <vector>

namespace twinobs {

/// Density matrix on H+ (x) H-, validated on construction: Hermitian, PSD, unit trace.
class BipartiteState {
public:
    /// Traces within 1e-6 of one are renormalized; anything further off is rejected.
    static BipartiteState from_matrix(const Matrix& rho, Dims dims, Tolerances tol = {});

    const Matrix& rho() const { return rho_; }
    Dims dims() const { return dims_; }
    const Tolerances& tolerances() const { return tol_; }

    BipartiteState with_tolerances(const Tolerances& tol) const;

private:
    BipartiteState(Matrix rho, Dims dims, Tolerances tol)
        : rho_(std::move(rho)), dims_(dims), tol_(tol) {}

    Matrix rho_;
    Dims dims_;
    Tolerances tol_;
};

BipartiteState from_pure(const Vector& phi, Dims dims, Tolerances tol = {});

struct PureComponent {
    double weight = 0.0;
    Vector vector;
};

struct PureDecomposition {
    Dims dims;
    std::vector<PureComponent> components;

    Matrix density() const;
};

BipartiteState mix(const PureDecomposition& dec, Tolerances tol = {});

struct SubsystemPair {
    Matrix rho_plus;
    Matrix rho_minus;
};

SubsystemPair reduce(const BipartiteState& state);

struct SubspaceProjectors {
    Matrix range;        // R
    Matrix null;         // N
    Matrix range_plus;   // R+
    Matrix null_plus;    // N+
    Matrix range_minus;  // R-
    Matrix null_minus;   // N-
};

SubspaceProjectors projectors(const BipartiteState& state);

/// Eigenvector bases of rho+ and rho- split at the rank cutoff, ascending eigenvalue order.
struct SubsystemBases {
    Matrix range_plus;
    Matrix null_plus;
    Matrix range_minus;
    Matrix null_minus;
    RealVector values_plus;   // positive eigenvalues of rho+
    RealVector values_minus;

    Index rank(Side s) const { return s == Side::Plus ? range_plus.cols() : range_minus.cols(); }
    Index nullity(Side s) const { return s == Side::Plus ? null_plus.cols() : null_minus.cols(); }
};

SubsystemBases subsystem_bases(const BipartiteState& state);

/// Range of rho as eigenvectors with positive eigenvalue (ascending) and those eigenvalues.
struct StateRange {
    Matrix basis;
    RealVector values;
};

StateRange state_range(const BipartiteState& state);

struct GeometryEntry {
    std::string relation;
    double residual;
};

struct GeometryReport {
    std::vector<GeometryEntry> entries;
    double tolerance = 0.0;

    double max_residual() const;
    bool pass() const { return max_residual() <= tolerance; }
};

/// Residuals of R = R (R+ (x) R-), R = R+ R = R- R, N+ N = N+, N- N = N-, and
/// rho annihilating N+ (x) H- and H+ (x) N-.
GeometryReport verify_subspace_geometry(const BipartiteState& state);

struct RelevantRestriction {
    Matrix rho_prime;    // operator on R+ (x) R-
    Matrix basis_plus;   // d+ x r+
    Matrix basis_minus;  // d- x r-
    Matrix embedding;    // basis_plus (x) basis_minus

    Dims prime_dims() const { return {basis_plus.cols(), basis_minus.cols()}; }
    Matrix compress(const Matrix& full) const { return embedding.adjoint() * full * embedding; }
    Matrix expand(const Matrix& prime) const { return embedding * prime * embedding.adjoint(); }
};

RelevantRestriction restrict_to_relevant(const BipartiteState& state);
RelevantRestriction restrict_to_relevant(const BipartiteState& state, const SubsystemBases& bases);

}  // namespace twinobs
