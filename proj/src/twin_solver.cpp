#include "twinobs/twin_solver.hpp"

#include "twinobs/error.hpp"
#include "twinobs/measurement.hpp"

#include <algorithm>
#include <cmath>

namespace twinobs {

namespace {

// Singular values of a projected orthonormal set are either ~1 or ~0.
constexpr double kProjectedRankTol = 0.5;

void require_pair_dims(const ObservablePair& pair, Dims dims) {
    if (pair.plus.rows() != dims.plus || pair.plus.cols() != dims.plus ||
        pair.minus.rows() != dims.minus || pair.minus.cols() != dims.minus) {
        throw Error(ErrorCode::DimensionMismatch, "observable pair does not match state dims");
    }
}

Matrix difference_operator(const ObservablePair& pair, Dims dims) {
    return lift(pair.plus, dims, Side::Plus) - lift(pair.minus, dims, Side::Minus);
}

void append_realified(const Matrix& m, RealMatrix& out, Index col) {
    const Index n = m.size();
    for (Index k = 0; k < n; ++k) {
        out(k, col) = m.data()[k].real();
        out(n + k, col) = m.data()[k].imag();
    }
}

}  // namespace

ObservablePair make_pair(const Matrix& plus, const Matrix& minus, double herm_tol) {
    return {hermitize(plus, herm_tol, "A+"), hermitize(minus, herm_tol, "A-")};
}

ObservablePair scalar_pair(Dims dims) { return {identity(dims.plus), identity(dims.minus)}; }

RealVector pair_coordinates(const ObservablePair& pair) {
    const RealVector p = hermitian_coordinates(pair.plus);
    const RealVector m = hermitian_coordinates(pair.minus);
    RealVector x(p.size() + m.size());
    x << p, m;
    return x;
}

ObservablePair pair_from_coordinates(const RealVector& x, Dims dims) {
    const Index np = dims.plus * dims.plus;
    const Index nm = dims.minus * dims.minus;
    if (x.size() != np + nm) {
        throw Error(ErrorCode::DimensionMismatch, "pair coordinate vector has wrong length");
    }
    return {from_hermitian_coordinates(x.head(np), dims.plus),
            from_hermitian_coordinates(x.tail(nm), dims.minus)};
}

ObservablePair TwinSpace::combination(const RealVector& weights) const {
    if (weights.size() != coordinates.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "weight count does not match twin space");
    }
    return pair_from_coordinates(coordinates * weights, dims);
}

TwinSpace solve_twin_space(const BipartiteState& state) {
    const Dims dims = state.dims();
    const Tolerances& tol = state.tolerances();
    const Matrix range = state_range(state).basis;

    const std::vector<Matrix> gp = hermitian_basis(dims.plus);
    const std::vector<Matrix> gm = hermitian_basis(dims.minus);
    const Index unknowns = static_cast<Index>(gp.size() + gm.size());
    RealMatrix constraint(2 * range.size(), unknowns);
    Index col = 0;
    for (const Matrix& g : gp) append_realified(lift(g, dims, Side::Plus) * range, constraint, col++);
    for (const Matrix& g : gm) {
        append_realified(-(lift(g, dims, Side::Minus) * range), constraint, col++);
    }
    const RealMatrix kernel = kernel_basis(constraint, tol.residual_tol);

    // Put the scalar pair first, then an orthonormal completion.
    RealVector scalar = pair_coordinates(scalar_pair(dims));
    scalar.normalize();
    const RealMatrix rest =
        orthonormal_span(kernel - scalar * (scalar.transpose() * kernel), kProjectedRankTol);

    TwinSpace space;
    space.dims = dims;
    space.coordinates.resize(unknowns, rest.cols() + 1);
    space.coordinates.col(0) = scalar;
    space.coordinates.rightCols(rest.cols()) = rest;
    space.dim_total = space.coordinates.cols();
    for (Index k = 0; k < space.dim_total; ++k) {
        space.basis.push_back(pair_from_coordinates(space.coordinates.col(k), dims));
    }

    const SubsystemBases bases = subsystem_bases(state);
    const Index np = bases.nullity(Side::Plus);
    const Index nm = bases.nullity(Side::Minus);
    space.dim_undetectable_plus = np * np;
    space.dim_undetectable_minus = nm * nm;
    space.dim_detectable = detectable_coordinates(space, state).cols();
    space.nonsingular = range.cols() == dims.total();
    return space;
}

RealMatrix detectable_coordinates(const TwinSpace& space, const BipartiteState& state) {
    const SubspaceProjectors p = projectors(state);
    RealMatrix projected(space.coordinates.rows(), space.coordinates.cols());
    for (Index k = 0; k < space.coordinates.cols(); ++k) {
        const ObservablePair& pair = space.basis[static_cast<std::size_t>(k)];
        const ObservablePair detectable{p.range_plus * pair.plus * p.range_plus,
                                        p.range_minus * pair.minus * p.range_minus};
        projected.col(k) = pair_coordinates(detectable);
    }
    return orthonormal_span(projected, kProjectedRankTol);
}

double twin_residual(const Matrix& rho, Dims dims, const ObservablePair& pair) {
    require_pair_dims(pair, dims);
    return max_abs(difference_operator(pair, dims) * rho);
}

TwinCheck is_twin_pair(const BipartiteState& state, const ObservablePair& pair) {
    TwinCheck check;
    check.residual = twin_residual(state.rho(), state.dims(), pair);
    check.tolerance = state.tolerances().residual_tol;
    check.verdict = check.residual <= check.tolerance;
    return check;
}

std::optional<ObservablePair> additive_twins(const BipartiteState& state, const Matrix& b_plus,
                                             const Matrix& b_minus) {
    const Dims dims = state.dims();
    const Tolerances& tol = state.tolerances();
    const ObservablePair b = make_pair(b_plus, b_minus, tol.herm_tol);
    require_pair_dims(b, dims);
    const Matrix total = lift(b.plus, dims, Side::Plus) + lift(b.minus, dims, Side::Minus);
    const CertaintyResult sharp = certainty_test(state.rho(), total, tol);
    if (!sharp.value) return std::nullopt;
    const double half = *sharp.value / 2.0;
    ObservablePair twins{b.plus - half * identity(dims.plus), -b.minus + half * identity(dims.minus)};
    if (!is_twin_pair(state, twins).verdict) {
        // Sharp value found but the shifted pair fails the twin relation: inconsistent numerics.
        return std::nullopt;
    }
    return twins;
}

ConsequenceReport twins_restrict_to_range_vectors(const BipartiteState& state,
                                                  const TwinSpace& space) {
    const Tolerances& tol = state.tolerances();
    const StateRange range = state_range(state);
    ConsequenceReport report;
    report.tolerance = tol.residual_tol;
    report.range_vectors_checked = range.basis.cols();
    for (Index k = 0; k < range.basis.cols(); ++k) {
        const Vector phi = range.basis.col(k);
        const Matrix pure = phi * phi.adjoint();
        for (const ObservablePair& pair : space.basis) {
            report.range_vector_residual =
                std::max(report.range_vector_residual, twin_residual(pure, state.dims(), pair));
        }
    }

    // Same range, different weights: 1, 2, ..., r normalized.
    const Index r = range.basis.cols();
    RealVector w = RealVector::LinSpaced(r, 1.0, static_cast<double>(r));
    w /= w.sum();
    const Matrix reweighted = range.basis * w.cast<Complex>().asDiagonal() * range.basis.adjoint();
    const BipartiteState other = BipartiteState::from_matrix(reweighted, state.dims(), tol);
    const TwinSpace other_space = solve_twin_space(other);
    report.reweighted_dim = other_space.dim_total;
    report.same_range_distance = twin_space_distance(space, other_space);
    return report;
}

double twin_space_distance(const TwinSpace& a, const TwinSpace& b) {
    if (!(a.dims == b.dims)) return 1.0;
    return subspace_distance(a.coordinates, b.coordinates);
}

double twin_space_containment(const TwinSpace& inner, const TwinSpace& outer) {
    if (!(inner.dims == outer.dims)) return 1.0;
    return containment_residual(inner.coordinates, outer.coordinates);
}

double pair_containment(const ObservablePair& pair, const TwinSpace& space) {
    require_pair_dims(pair, space.dims);
    const RealVector x = pair_coordinates(pair);
    const double norm = x.norm();
    if (norm == 0.0) return 0.0;
    const RealVector rest = x - space.coordinates * (space.coordinates.transpose() * x);
    return rest.norm() / norm;
}

AdmissionReport states_admitting_twins(const ObservablePair& pair, const BipartiteState& state) {
    const Dims dims = state.dims();
    require_pair_dims(pair, dims);
    const Tolerances& tol = state.tolerances();
    const Matrix diff = difference_operator(make_pair(pair.plus, pair.minus, tol.herm_tol), dims);
    const StateRange range = state_range(state);

    AdmissionReport report;
    report.tolerance = tol.residual_tol;
    report.range_residual = max_abs(diff * (range.basis * range.basis.adjoint()));
    for (Index k = 0; k < range.basis.cols(); ++k) {
        report.component_residual =
            std::max(report.component_residual, max_abs(diff * range.basis.col(k)));
    }
    report.twin_residual = max_abs(diff * state.rho());
    report.verdict = report.range_residual <= report.tolerance &&
                     report.component_residual <= report.tolerance;
    return report;
}

}  // namespace twinobs
