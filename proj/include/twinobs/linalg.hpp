#pragma once

// Dense complex linear algebra shared by every module.
//
// Composite index convention: for H = H+ (x) H-, basis index i = i_plus * d_minus + i_minus.
// All operators on the composite space use it.

#include <Eigen/Dense>

#include <complex>
#include <string_view>
#include <vector>

namespace twinobs {

using Complex = std::complex<double>;
using Index = Eigen::Index;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

struct Tolerances {
    double rank_tol = 1e-10;      // eigenvalue cutoff, relative to the largest eigenvalue
    double residual_tol = 1e-8;   // operator relations such as the twin residual
    double cluster_tol = 1e-8;    // eigenvalue degeneracy grouping
    double herm_tol = 1e-9;       // Hermiticity check after ingestion

    void validate() const;
};

enum class Side { Plus, Minus };

struct Dims {
    Index plus = 1;
    Index minus = 1;

    Index total() const { return plus * minus; }
    Index of(Side s) const { return s == Side::Plus ? plus : minus; }
    friend bool operator==(const Dims&, const Dims&) = default;
};

struct SpectralDecomposition {
    RealVector values;  // ascending
    Matrix vectors;     // orthonormal columns, first non-negligible component real positive
};

/// Symmetrizes (M + M^dagger)/2 after checking max |M - M^dagger| <= herm_tol.
Matrix hermitize(const Matrix& m, double herm_tol, std::string_view what = "operator");

double max_abs(const Matrix& m);
Matrix identity(Index d);
Matrix commutator(const Matrix& a, const Matrix& b);
bool is_projector(const Matrix& p, double tol);

SpectralDecomposition eigh(const Matrix& h, double herm_tol = 1e-9);

/// Orthonormal basis of the null space: right singular vectors whose singular value is
/// at most tol * sigma_max.
Matrix kernel_basis(const Matrix& m, double tol);
RealMatrix kernel_basis(const RealMatrix& m, double tol);

/// Orthonormal basis of the column span, dropping directions with singular value <= tol.
RealMatrix orthonormal_span(const RealMatrix& columns, double tol);

Matrix kron(const Matrix& a, const Matrix& b);

/// A (x) 1 for side Plus, 1 (x) A for side Minus.
Matrix lift(const Matrix& a, Dims dims, Side side);

/// Trace over the factor `traced`; the result acts on the other factor.
Matrix partial_trace(const Matrix& m, Dims dims, Side traced);

/// Eigenvalue cutoff separating range from null space.
double positive_cutoff(const RealVector& eigenvalues, double rank_tol);

struct RangeNullSplit {
    Matrix range_basis;   // eigenvectors with eigenvalue > cutoff, ascending eigenvalue
    Matrix null_basis;
    RealVector range_values;
    Matrix range;         // projector R
    Matrix null;          // projector N
};

/// PSD operator only; throws NotPositive if an eigenvalue lies below -cutoff.
RangeNullSplit range_null_split(const Matrix& h, double rank_tol, double herm_tol = 1e-9);

struct RangeNull {
    Matrix range;
    Matrix null;
};
RangeNull range_null_projectors(const Matrix& h, double rank_tol, double herm_tol = 1e-9);

/// d^2 Hilbert-Schmidt orthonormal Hermitian matrices: diagonal units first, then for each
/// i < j in row-major order the symmetric (E_ij + E_ji)/sqrt2 and antisymmetric
/// (-i E_ij + i E_ji)/sqrt2 elements.
std::vector<Matrix> hermitian_basis(Index d);

/// Coordinates Tr(G_k A) over hermitian_basis(d).
RealVector hermitian_coordinates(const Matrix& a);
Matrix from_hermitian_coordinates(const RealVector& x, Index d);

/// Characteristic value of a Hermitian operator after grouping eigenvalues within cluster_tol.
struct EigenCluster {
    double value;
    Index multiplicity;
    Matrix vectors;    // orthonormal columns spanning the characteristic subspace
    Matrix projector;
};

std::vector<EigenCluster> cluster_spectrum(const Matrix& h, double cluster_tol,
                                           double herm_tol = 1e-9);

/// Sine of the largest principal angle between two orthonormal column sets.
/// Returns 1 when the dimensions differ.
double subspace_distance(const RealMatrix& q1, const RealMatrix& q2);

/// max_k |(1 - Q_outer Q_outer^T) q_k| over the columns of inner.
double containment_residual(const RealMatrix& inner, const RealMatrix& outer);

}  // namespace twinobs
