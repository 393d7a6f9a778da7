#include "twinobs/state.hpp"

#include "twinobs/error.hpp"

#include <algorithm>
#include <cmath>

namespace twinobs {

namespace {

constexpr double kTraceIngestTol = 1e-6;
constexpr double kNormTol = 1e-10;

void require_dims(Dims dims) {
    if (dims.plus < 1 || dims.minus < 1) {
        throw Error(ErrorCode::InvalidInput, "subsystem dimensions must be positive");
    }
}

}  // namespace

BipartiteState BipartiteState::from_matrix(const Matrix& rho, Dims dims, Tolerances tol) {
    tol.validate();
    require_dims(dims);
    if (rho.rows() != dims.total() || rho.cols() != dims.total()) {
        throw Error(ErrorCode::DimensionMismatch,
                    "density matrix is " + std::to_string(rho.rows()) + "x" +
                        std::to_string(rho.cols()) + ", expected " +
                        std::to_string(dims.total()));
    }
    Matrix sym = hermitize(rho, tol.herm_tol, "density matrix");
    const double tr = sym.trace().real();
    if (std::abs(tr - 1.0) > kTraceIngestTol) {
        throw Error(ErrorCode::NotNormalized, "trace is " + std::to_string(tr));
    }
    sym /= tr;
    // Rejects eigenvalues below -rank_tol * lambda_max.
    (void)range_null_split(sym, tol.rank_tol, tol.herm_tol);
    return BipartiteState(std::move(sym), dims, tol);
}

BipartiteState BipartiteState::with_tolerances(const Tolerances& tol) const {
    tol.validate();
    return BipartiteState(rho_, dims_, tol);
}

BipartiteState from_pure(const Vector& phi, Dims dims, Tolerances tol) {
    require_dims(dims);
    if (phi.size() != dims.total()) {
        throw Error(ErrorCode::DimensionMismatch, "state vector length does not match dims");
    }
    const double norm = phi.norm();
    if (std::abs(norm - 1.0) > kNormTol) {
        throw Error(ErrorCode::NotNormalized, "vector norm is " + std::to_string(norm));
    }
    return BipartiteState::from_matrix(phi * phi.adjoint(), dims, tol);
}

Matrix PureDecomposition::density() const {
    Matrix rho = Matrix::Zero(dims.total(), dims.total());
    for (const auto& c : components) rho += c.weight * c.vector * c.vector.adjoint();
    return rho;
}

BipartiteState mix(const PureDecomposition& dec, Tolerances tol) {
    require_dims(dec.dims);
    if (dec.components.empty()) {
        throw Error(ErrorCode::WeightError, "decomposition has no components");
    }
    double total = 0.0;
    for (const auto& c : dec.components) {
        if (!(c.weight > 0.0) || !std::isfinite(c.weight)) {
            throw Error(ErrorCode::WeightError, "weights must be positive");
        }
        if (c.vector.size() != dec.dims.total()) {
            throw Error(ErrorCode::DimensionMismatch, "component vector length does not match dims");
        }
        if (std::abs(c.vector.norm() - 1.0) > kNormTol) {
            throw Error(ErrorCode::NotNormalized, "decomposition component is not a unit vector");
        }
        total += c.weight;
    }
    if (std::abs(total - 1.0) > kTraceIngestTol) {
        throw Error(ErrorCode::WeightError, "weights sum to " + std::to_string(total));
    }
    return BipartiteState::from_matrix(dec.density() / total, dec.dims, tol);
}

SubsystemPair reduce(const BipartiteState& state) {
    return {partial_trace(state.rho(), state.dims(), Side::Minus),
            partial_trace(state.rho(), state.dims(), Side::Plus)};
}

SubspaceProjectors projectors(const BipartiteState& state) {
    const auto& tol = state.tolerances();
    const SubsystemPair sub = reduce(state);
    const RangeNull full = range_null_projectors(state.rho(), tol.rank_tol, tol.herm_tol);
    const RangeNull plus = range_null_projectors(sub.rho_plus, tol.rank_tol, tol.herm_tol);
    const RangeNull minus = range_null_projectors(sub.rho_minus, tol.rank_tol, tol.herm_tol);
    return {full.range, full.null, plus.range, plus.null, minus.range, minus.null};
}

SubsystemBases subsystem_bases(const BipartiteState& state) {
    const auto& tol = state.tolerances();
    const SubsystemPair sub = reduce(state);
    RangeNullSplit plus = range_null_split(sub.rho_plus, tol.rank_tol, tol.herm_tol);
    RangeNullSplit minus = range_null_split(sub.rho_minus, tol.rank_tol, tol.herm_tol);
    return {std::move(plus.range_basis),  std::move(plus.null_basis),
            std::move(minus.range_basis), std::move(minus.null_basis),
            std::move(plus.range_values), std::move(minus.range_values)};
}

StateRange state_range(const BipartiteState& state) {
    const auto& tol = state.tolerances();
    RangeNullSplit split = range_null_split(state.rho(), tol.rank_tol, tol.herm_tol);
    return {std::move(split.range_basis), std::move(split.range_values)};
}

double GeometryReport::max_residual() const {
    double m = 0.0;
    for (const auto& e : entries) m = std::max(m, e.residual);
    return m;
}

GeometryReport verify_subspace_geometry(const BipartiteState& state) {
    const Dims dims = state.dims();
    const SubspaceProjectors p = projectors(state);
    const Matrix rp = lift(p.range_plus, dims, Side::Plus);
    const Matrix rm = lift(p.range_minus, dims, Side::Minus);
    const Matrix np = lift(p.null_plus, dims, Side::Plus);
    const Matrix nm = lift(p.null_minus, dims, Side::Minus);
    const Matrix& r = p.range;
    const Matrix& n = p.null;
    const Matrix& rho = state.rho();

    GeometryReport report;
    report.tolerance = state.tolerances().residual_tol;
    report.entries = {
        {"R = R (R+ x R-)", max_abs(r - r * kron(p.range_plus, p.range_minus))},
        {"R = R+ R", max_abs(r - rp * r)},
        {"R = R R+", max_abs(r - r * rp)},
        {"R = R- R", max_abs(r - rm * r)},
        {"R = R R-", max_abs(r - r * rm)},
        {"N+ N = N+", max_abs(np * n - np)},
        {"N- N = N-", max_abs(nm * n - nm)},
        {"rho N+ = 0", max_abs(rho * np)},
        {"rho N- = 0", max_abs(rho * nm)},
    };
    return report;
}

RelevantRestriction restrict_to_relevant(const BipartiteState& state) {
    return restrict_to_relevant(state, subsystem_bases(state));
}

RelevantRestriction restrict_to_relevant(const BipartiteState& state, const SubsystemBases& bases) {
    RelevantRestriction out;
    out.basis_plus = bases.range_plus;
    out.basis_minus = bases.range_minus;
    out.embedding = kron(out.basis_plus, out.basis_minus);
    out.rho_prime = out.compress(state.rho());
    out.rho_prime = (out.rho_prime + out.rho_prime.adjoint()) / 2.0;
    return out;
}

}  // namespace twinobs
