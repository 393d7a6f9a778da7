#pragma once

// Canonical forms of rho in the characteristic bases of complete twins.

#include "twinobs/linalg.hpp"
#include "twinobs/state.hpp"
#include "twinobs/twin_analysis.hpp"

#include <string>
#include <vector>

namespace twinobs {

struct SimplifiedMatrix {
    std::vector<double> sigma_prime;  // row/column labels of compressed
    Matrix compressed;                // M[a,b] = <a,a| rho |b,b>
    double max_forbidden = 0.0;       // largest <a,c| rho |b,d> with a != c or b != d
    double trace_defect = 0.0;        // |Tr M - 1|
    double tolerance = 0.0;
};

/// Throws SparsityViolation when a forbidden element exceeds residual_tol.
SimplifiedMatrix simplified_matrix(const BipartiteState& state, const MatchedBases& bases);

struct SchmidtForm {
    std::vector<double> sigma_prime;
    RealVector coefficients;  // r_a^{1/2}
    Matrix basis_plus;        // |a>+
    Matrix basis_minus;       // |a>- with the phase of <a|+ Phi absorbed
    double reconstruction_error = 0.0;
    double spectrum_mismatch = 0.0;  // r_a against the positive eigenvalues of rho+ and rho-
};

/// Phi = sum_a r_a^{1/2} |a>+ |a>-. Throws NotPure.
SchmidtForm pure_schmidt(const BipartiteState& state, const MatchedBases& bases);

struct GeneralizedSchmidtExpansion {
    std::vector<double> sigma_prime;
    std::vector<Vector> coefficients;  // alpha^(i)_a
    std::vector<RealVector> weights;   // r^(i)_a = |alpha^(i)_a|^2
    double max_off_diagonal = 0.0;
    double max_norm_defect = 0.0;
    double reconstruction_residual = 0.0;  // sum_i w_i alpha alpha^dagger against M
};

/// Throws OffDiagonalLeak when a component has weight off the diagonal pairs |a>|a>.
GeneralizedSchmidtExpansion simultaneous_expansion(const PureDecomposition& dec,
                                                   const MatchedBases& bases,
                                                   const Tolerances& tol = {});

struct CompatibilityEntry {
    Side side = Side::Plus;
    std::string first;
    std::string second;
    double residual = 0.0;
};

struct CompatibilityReport {
    std::vector<CompatibilityEntry> entries;
    double max_residual = 0.0;
    double tolerance = 0.0;

    bool pass() const { return max_residual <= tolerance; }
};

/// Commutators among A_s, every rho_s^(i) and rho_s, on each side.
CompatibilityReport compatibility_report(const PureDecomposition& dec, const MatchedBases& bases,
                                         const Tolerances& tol = {});

}  // namespace twinobs
