#include "twinobs/linalg.hpp"

#include "twinobs/error.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <string>

namespace twinobs {

namespace {

void require_finite(const Matrix& m, std::string_view what) {
    if (!m.allFinite()) {
        throw Error(ErrorCode::InvalidInput, std::string(what) + " has non-finite entries");
    }
}

void fix_phase(Matrix& vectors) {
    constexpr double kNegligible = 1e-10;
    for (Index c = 0; c < vectors.cols(); ++c) {
        for (Index r = 0; r < vectors.rows(); ++r) {
            const double mag = std::abs(vectors(r, c));
            if (mag > kNegligible) {
                vectors.col(c) *= std::conj(vectors(r, c)) / mag;
                vectors(r, c) = mag;
                break;
            }
        }
    }
}

template <typename Mat>
Mat kernel_impl(const Mat& m, double tol) {
    const Index n = m.cols();
    if (m.rows() == 0 || n == 0) {
        return Mat::Identity(n, n);
    }
    Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double smax = sv.size() > 0 ? sv(0) : 0.0;
    Index rank = 0;
    if (smax > 0.0) {
        for (Index k = 0; k < sv.size(); ++k) {
            if (sv(k) > tol * smax) ++rank;
        }
    }
    return svd.matrixV().rightCols(n - rank);
}

}  // namespace

void Tolerances::validate() const {
    if (!(rank_tol >= 0.0) || !(residual_tol >= 0.0) || !(cluster_tol >= 0.0) ||
        !(herm_tol >= 0.0)) {
        throw Error(ErrorCode::InvalidInput, "tolerances must be non-negative");
    }
}

Matrix hermitize(const Matrix& m, double herm_tol, std::string_view what) {
    if (m.rows() != m.cols()) {
        throw Error(ErrorCode::DimensionMismatch, std::string(what) + " is not square");
    }
    require_finite(m, what);
    const double asym = max_abs(m - m.adjoint());
    if (asym > herm_tol) {
        throw Error(ErrorCode::NonHermitian, std::string(what) + " deviates from Hermitian by " +
                                                 std::to_string(asym));
    }
    return (m + m.adjoint()) / 2.0;
}

double max_abs(const Matrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

Matrix identity(Index d) { return Matrix::Identity(d, d); }

Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

bool is_projector(const Matrix& p, double tol) {
    return p.rows() == p.cols() && max_abs(p - p.adjoint()) <= tol && max_abs(p * p - p) <= tol;
}

SpectralDecomposition eigh(const Matrix& h, double herm_tol) {
    const Matrix sym = hermitize(h, herm_tol, "eigh input");
    if (sym.rows() == 0) return {RealVector(), Matrix(0, 0)};
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorCode::ConvergenceFailure, "Hermitian eigensolver did not converge");
    }
    SpectralDecomposition out{solver.eigenvalues(), solver.eigenvectors()};
    fix_phase(out.vectors);
    return out;
}

Matrix kernel_basis(const Matrix& m, double tol) {
    require_finite(m, "kernel input");
    return kernel_impl(m, tol);
}

RealMatrix kernel_basis(const RealMatrix& m, double tol) {
    if (!m.allFinite()) throw Error(ErrorCode::InvalidInput, "kernel input has non-finite entries");
    return kernel_impl(m, tol);
}

RealMatrix orthonormal_span(const RealMatrix& columns, double tol) {
    if (columns.cols() == 0 || columns.rows() == 0) {
        return RealMatrix(columns.rows(), 0);
    }
    Eigen::JacobiSVD<RealMatrix> svd(columns, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    Index rank = 0;
    for (Index k = 0; k < sv.size(); ++k) {
        if (sv(k) > tol) ++rank;
    }
    return svd.matrixU().leftCols(rank);
}

Matrix kron(const Matrix& a, const Matrix& b) {
    return Eigen::kroneckerProduct(a, b).eval();
}

Matrix lift(const Matrix& a, Dims dims, Side side) {
    if (a.rows() != dims.of(side) || a.cols() != dims.of(side)) {
        throw Error(ErrorCode::DimensionMismatch, "subsystem operator does not match dims");
    }
    return side == Side::Plus ? kron(a, identity(dims.minus)) : kron(identity(dims.plus), a);
}

Matrix partial_trace(const Matrix& m, Dims dims, Side traced) {
    if (m.rows() != dims.total() || m.cols() != dims.total()) {
        throw Error(ErrorCode::DimensionMismatch,
                    "operator of size " + std::to_string(m.rows()) + " does not match " +
                        std::to_string(dims.plus) + "x" + std::to_string(dims.minus));
    }
    const Index dp = dims.plus;
    const Index dm = dims.minus;
    if (traced == Side::Minus) {
        Matrix out = Matrix::Zero(dp, dp);
        for (Index i = 0; i < dp; ++i)
            for (Index j = 0; j < dp; ++j)
                for (Index k = 0; k < dm; ++k) out(i, j) += m(i * dm + k, j * dm + k);
        return out;
    }
    Matrix out = Matrix::Zero(dm, dm);
    for (Index i = 0; i < dm; ++i)
        for (Index j = 0; j < dm; ++j)
            for (Index k = 0; k < dp; ++k) out(i, j) += m(k * dm + i, k * dm + j);
    return out;
}

double positive_cutoff(const RealVector& eigenvalues, double rank_tol) {
    if (eigenvalues.size() == 0) return 0.0;
    return rank_tol * std::max(eigenvalues.maxCoeff(), 0.0);
}

RangeNullSplit range_null_split(const Matrix& h, double rank_tol, double herm_tol) {
    const SpectralDecomposition dec = eigh(h, herm_tol);
    const double cutoff = positive_cutoff(dec.values, rank_tol);
    const Index n = dec.values.size();
    if (n > 0 && dec.values(0) < -cutoff) {
        throw Error(ErrorCode::NotPositive,
                    "eigenvalue " + std::to_string(dec.values(0)) + " is negative");
    }
    Index null_count = 0;
    while (null_count < n && dec.values(null_count) <= cutoff) ++null_count;

    RangeNullSplit out;
    out.null_basis = dec.vectors.leftCols(null_count);
    out.range_basis = dec.vectors.rightCols(n - null_count);
    out.range_values = dec.values.tail(n - null_count);
    out.range = out.range_basis * out.range_basis.adjoint();
    out.null = out.null_basis * out.null_basis.adjoint();
    return out;
}

RangeNull range_null_projectors(const Matrix& h, double rank_tol, double herm_tol) {
    RangeNullSplit split = range_null_split(h, rank_tol, herm_tol);
    return {std::move(split.range), std::move(split.null)};
}

std::vector<Matrix> hermitian_basis(Index d) {
    if (d < 1) throw Error(ErrorCode::InvalidInput, "hermitian_basis needs d >= 1");
    std::vector<Matrix> basis;
    basis.reserve(static_cast<std::size_t>(d * d));
    for (Index i = 0; i < d; ++i) {
        Matrix e = Matrix::Zero(d, d);
        e(i, i) = 1.0;
        basis.push_back(std::move(e));
    }
    const double s = 1.0 / std::sqrt(2.0);
    for (Index i = 0; i < d; ++i) {
        for (Index j = i + 1; j < d; ++j) {
            Matrix sym = Matrix::Zero(d, d);
            sym(i, j) = s;
            sym(j, i) = s;
            basis.push_back(std::move(sym));
            Matrix anti = Matrix::Zero(d, d);
            anti(i, j) = Complex(0.0, -s);
            anti(j, i) = Complex(0.0, s);
            basis.push_back(std::move(anti));
        }
    }
    return basis;
}

RealVector hermitian_coordinates(const Matrix& a) {
    const Index d = a.rows();
    RealVector x(d * d);
    Index k = 0;
    for (Index i = 0; i < d; ++i) x(k++) = a(i, i).real();
    const double r2 = std::sqrt(2.0);
    for (Index i = 0; i < d; ++i) {
        for (Index j = i + 1; j < d; ++j) {
            // Tr(G A) for the symmetric and antisymmetric elements.
            x(k++) = r2 * 0.5 * (a(i, j) + a(j, i)).real();
            x(k++) = r2 * 0.5 * (a(j, i) - a(i, j)).imag();
        }
    }
    return x;
}

Matrix from_hermitian_coordinates(const RealVector& x, Index d) {
    if (x.size() != d * d) {
        throw Error(ErrorCode::DimensionMismatch, "coordinate vector does not match dimension");
    }
    Matrix a = Matrix::Zero(d, d);
    Index k = 0;
    for (Index i = 0; i < d; ++i) a(i, i) = x(k++);
    const double s = 1.0 / std::sqrt(2.0);
    for (Index i = 0; i < d; ++i) {
        for (Index j = i + 1; j < d; ++j) {
            const double sym = x(k++);
            const double anti = x(k++);
            a(i, j) = s * Complex(sym, -anti);
            a(j, i) = s * Complex(sym, anti);
        }
    }
    return a;
}

std::vector<EigenCluster> cluster_spectrum(const Matrix& h, double cluster_tol, double herm_tol) {
    const SpectralDecomposition dec = eigh(h, herm_tol);
    std::vector<EigenCluster> clusters;
    const Index n = dec.values.size();
    Index start = 0;
    while (start < n) {
        Index end = start + 1;
        while (end < n && dec.values(end) - dec.values(end - 1) <= cluster_tol) ++end;
        EigenCluster c;
        c.multiplicity = end - start;
        c.value = dec.values.segment(start, c.multiplicity).mean();
        c.vectors = dec.vectors.middleCols(start, c.multiplicity);
        c.projector = c.vectors * c.vectors.adjoint();
        clusters.push_back(std::move(c));
        start = end;
    }
    return clusters;
}

double subspace_distance(const RealMatrix& q1, const RealMatrix& q2) {
    if (q1.cols() != q2.cols() || q1.rows() != q2.rows()) return 1.0;
    if (q1.cols() == 0) return 0.0;
    return std::max(containment_residual(q1, q2), containment_residual(q2, q1));
}

double containment_residual(const RealMatrix& inner, const RealMatrix& outer) {
    if (inner.cols() == 0) return 0.0;
    const RealMatrix rest = inner - outer * (outer.transpose() * inner);
    Eigen::JacobiSVD<RealMatrix> svd(rest);
    return svd.singularValues()(0);
}

}  // namespace twinobs
