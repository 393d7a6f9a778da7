#include "twinobs/schmidt.hpp"

#include "twinobs/error.hpp"

#include <algorithm>
#include <cmath>

namespace twinobs {

namespace {

constexpr double kNormTol = 1e-10;

void require_bases(const MatchedBases& bases, Dims dims) {
    const auto k = static_cast<Index>(bases.sigma_prime.size());
    if (bases.basis_plus.rows() != dims.plus || bases.basis_minus.rows() != dims.minus ||
        bases.basis_plus.cols() != k || bases.basis_minus.cols() != k) {
        throw Error(ErrorCode::DimensionMismatch, "matched bases do not match the state");
    }
}

// C[a, c] = <a|+ <c|- phi
Matrix product_coefficients(const Vector& phi, const MatchedBases& bases) {
    const Matrix w = kron(bases.basis_plus, bases.basis_minus);
    const Vector flat = w.adjoint() * phi;
    const Index k = bases.basis_plus.cols();
    Matrix c(k, k);
    for (Index a = 0; a < k; ++a)
        for (Index b = 0; b < k; ++b) c(a, b) = flat(a * k + b);
    return c;
}

// <a|+ (x) 1 applied to phi
Vector partial_contract(const Vector& a_plus, const Vector& phi, Dims dims) {
    Vector out = Vector::Zero(dims.minus);
    for (Index i = 0; i < dims.plus; ++i) out += std::conj(a_plus(i)) * phi.segment(i * dims.minus, dims.minus);
    return out;
}

double sorted_mismatch(std::vector<double> a, std::vector<double> b) {
    if (a.size() != b.size()) return 1.0;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double worst = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, std::abs(a[k] - b[k]));
    return worst;
}

std::vector<double> to_std(const RealVector& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

SimplifiedMatrix simplified_matrix(const BipartiteState& state, const MatchedBases& bases) {
    require_bases(bases, state.dims());
    const Index k = bases.basis_plus.cols();
    const Matrix w = kron(bases.basis_plus, bases.basis_minus);
    const Matrix t = w.adjoint() * state.rho() * w;

    SimplifiedMatrix out;
    out.sigma_prime = bases.sigma_prime;
    out.tolerance = state.tolerances().residual_tol;
    out.compressed = Matrix::Zero(k, k);
    for (Index a = 0; a < k; ++a) {
        for (Index c = 0; c < k; ++c) {
            for (Index b = 0; b < k; ++b) {
                for (Index d = 0; d < k; ++d) {
                    const Complex v = t(a * k + c, b * k + d);
                    if (a == c && b == d) {
                        out.compressed(a, b) = v;
                    } else {
                        out.max_forbidden = std::max(out.max_forbidden, std::abs(v));
                    }
                }
            }
        }
    }
    out.trace_defect = std::abs(out.compressed.trace().real() - 1.0);
    if (out.max_forbidden > out.tolerance) {
        throw Error(ErrorCode::SparsityViolation,
                    "forbidden element of size " + std::to_string(out.max_forbidden));
    }
    return out;
}

SchmidtForm pure_schmidt(const BipartiteState& state, const MatchedBases& bases) {
    const Dims dims = state.dims();
    require_bases(bases, dims);
    const StateRange range = state_range(state);
    if (range.basis.cols() != 1) {
        throw Error(ErrorCode::NotPure, "state has rank " + std::to_string(range.basis.cols()));
    }
    const Vector phi = range.basis.col(0);
    const SubsystemPair reduced = reduce(state);
    const Tolerances& tol = state.tolerances();

    // Pseudo-inverse square root of rho- on its range.
    const RangeNullSplit minus = range_null_split(reduced.rho_minus, tol.rank_tol, tol.herm_tol);
    const RealVector inv_sqrt = minus.range_values.cwiseSqrt().cwiseInverse();
    const Matrix rho_minus_inv_sqrt =
        minus.range_basis * inv_sqrt.asDiagonal() * minus.range_basis.adjoint();

    const Index k = bases.basis_plus.cols();
    SchmidtForm out;
    out.sigma_prime = bases.sigma_prime;
    out.basis_plus = bases.basis_plus;
    out.basis_minus = bases.basis_minus;
    out.coefficients = RealVector::Zero(k);
    Vector rebuilt = Vector::Zero(dims.total());
    for (Index a = 0; a < k; ++a) {
        const Vector contracted = partial_contract(bases.basis_plus.col(a), phi, dims);
        const Vector direction = rho_minus_inv_sqrt * contracted;
        const double norm = direction.norm();
        if (norm > kNormTol) {
            out.basis_minus.col(a) = direction / norm;
            out.coefficients(a) = out.basis_minus.col(a).dot(contracted).real();
        }
        rebuilt += out.coefficients(a) * kron(out.basis_plus.col(a), out.basis_minus.col(a));
    }
    out.reconstruction_error = (phi - rebuilt).norm();

    std::vector<double> r;
    for (Index a = 0; a < k; ++a) r.push_back(out.coefficients(a) * out.coefficients(a));
    const RealVector plus_values =
        range_null_split(reduced.rho_plus, tol.rank_tol, tol.herm_tol).range_values;
    out.spectrum_mismatch = std::max(sorted_mismatch(r, to_std(plus_values)),
                                     sorted_mismatch(r, to_std(minus.range_values)));
    return out;
}

GeneralizedSchmidtExpansion simultaneous_expansion(const PureDecomposition& dec,
                                                   const MatchedBases& bases,
                                                   const Tolerances& tol) {
    require_bases(bases, dec.dims);
    const Index k = bases.basis_plus.cols();
    GeneralizedSchmidtExpansion out;
    out.sigma_prime = bases.sigma_prime;
    Matrix m = Matrix::Zero(k, k);
    for (const PureComponent& comp : dec.components) {
        if (comp.vector.size() != dec.dims.total()) {
            throw Error(ErrorCode::DimensionMismatch, "component does not match dims");
        }
        const Matrix c = product_coefficients(comp.vector, bases);
        Vector alpha = c.diagonal();
        Matrix off = c;
        off.diagonal().setZero();
        out.max_off_diagonal = std::max(out.max_off_diagonal, max_abs(off));
        out.max_norm_defect = std::max(out.max_norm_defect, std::abs(alpha.squaredNorm() - 1.0));
        out.weights.push_back(alpha.cwiseAbs2());
        m += comp.weight * alpha * alpha.adjoint();
        out.coefficients.push_back(std::move(alpha));
    }
    if (out.max_off_diagonal > tol.residual_tol || out.max_norm_defect > tol.residual_tol) {
        throw Error(ErrorCode::OffDiagonalLeak,
                    "component leaves span{|a>|a>}: off-diagonal " +
                        std::to_string(out.max_off_diagonal) + ", norm defect " +
                        std::to_string(out.max_norm_defect));
    }
    const Matrix w = kron(bases.basis_plus, bases.basis_minus);
    const Matrix t = w.adjoint() * dec.density() * w;
    Matrix target(k, k);
    for (Index a = 0; a < k; ++a)
        for (Index b = 0; b < k; ++b) target(a, b) = t(a * k + a, b * k + b);
    out.reconstruction_residual = max_abs(m - target);
    return out;
}

CompatibilityReport compatibility_report(const PureDecomposition& dec, const MatchedBases& bases,
                                         const Tolerances& tol) {
    require_bases(bases, dec.dims);
    CompatibilityReport report;
    report.tolerance = tol.residual_tol;
    const Matrix total = dec.density();
    for (Side side : {Side::Plus, Side::Minus}) {
        const Side traced = side == Side::Plus ? Side::Minus : Side::Plus;
        std::vector<std::pair<std::string, Matrix>> ops;
        ops.emplace_back("A", detectable_operator(bases, side));
        for (std::size_t i = 0; i < dec.components.size(); ++i) {
            const Vector& v = dec.components[i].vector;
            ops.emplace_back("rho^(" + std::to_string(i + 1) + ")",
                             partial_trace(v * v.adjoint(), dec.dims, traced));
        }
        ops.emplace_back("rho", partial_trace(total, dec.dims, traced));
        for (std::size_t p = 0; p < ops.size(); ++p) {
            for (std::size_t q = p + 1; q < ops.size(); ++q) {
                const double r = max_abs(commutator(ops[p].second, ops[q].second));
                report.entries.push_back({side, ops[p].first, ops[q].first, r});
                report.max_residual = std::max(report.max_residual, r);
            }
        }
    }
    return report;
}

}  // namespace twinobs
