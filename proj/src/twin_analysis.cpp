#include "twinobs/twin_analysis.hpp"

#include "twinobs/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

namespace twinobs {

namespace {

void require_pair_dims(const ObservablePair& pair, Dims dims) {
    if (!(pair.dims() == dims) || pair.plus.cols() != dims.plus ||
        pair.minus.cols() != dims.minus) {
        throw Error(ErrorCode::DimensionMismatch, "observable pair does not match state dims");
    }
}

Matrix symmetrized(const Matrix& m) { return (m + m.adjoint()) / 2.0; }

RealVector eigenvalues_of(const Matrix& h) {
    return h.rows() == 0 ? RealVector() : eigh(h).values;
}

bool nondegenerate(const RealVector& ascending, double cluster_tol) {
    for (Index k = 1; k < ascending.size(); ++k) {
        if (ascending(k) - ascending(k - 1) <= cluster_tol) return false;
    }
    return true;
}

Matrix lagrange_projector(const Matrix& a, const std::vector<double>& spectrum, std::size_t k) {
    Matrix p = identity(a.rows());
    const double value = spectrum[k];
    for (std::size_t j = 0; j < spectrum.size(); ++j) {
        if (j == k) continue;
        p = p * (a - spectrum[j] * identity(a.rows())) / (value - spectrum[j]);
    }
    return symmetrized(p);
}

Matrix full_characteristic_projector(const Matrix& a, double value, double cluster_tol) {
    Matrix p = Matrix::Zero(a.rows(), a.cols());
    for (const EigenCluster& c : cluster_spectrum(a, cluster_tol)) {
        if (std::abs(c.value - value) <= cluster_tol) p += c.projector;
    }
    return p;
}

double lookup(const ValueTable& table, double x, double cluster_tol) {
    const std::pair<double, double>* best = nullptr;
    for (const auto& entry : table) {
        if (!best || std::abs(entry.first - x) < std::abs(best->first - x)) best = &entry;
    }
    if (!best || std::abs(best->first - x) > cluster_tol) {
        throw Error(ErrorCode::InvalidInput,
                    "function table has no value for characteristic value " + std::to_string(x));
    }
    return best->second;
}

Matrix apply_side(const Matrix& a, const ValueTable& table, double cluster_tol) {
    const SpectralDecomposition dec = eigh(a);
    RealVector f(dec.values.size());
    for (Index k = 0; k < f.size(); ++k) f(k) = lookup(table, dec.values(k), cluster_tol);
    return symmetrized(dec.vectors * f.cast<Complex>().asDiagonal() * dec.vectors.adjoint());
}

using ExponentMap = std::map<std::vector<unsigned>, double>;

ExponentMap canonical_terms(const Polynomial& poly, std::size_t vars) {
    ExponentMap terms;
    for (const Monomial& m : poly.terms) {
        std::vector<unsigned> e = m.exponents;
        e.resize(vars, 0u);
        terms[e] += m.coefficient;
    }
    return terms;
}

// Average of the operator word over all of its distinct orderings.
Matrix symmetrized_word(const std::vector<const Matrix*>& ops, const std::vector<unsigned>& exps,
                        Index dim) {
    std::vector<std::size_t> word;
    for (std::size_t v = 0; v < exps.size(); ++v) word.insert(word.end(), exps[v], v);
    if (word.empty()) return identity(dim);
    Matrix sum = Matrix::Zero(dim, dim);
    std::size_t count = 0;
    std::sort(word.begin(), word.end());
    do {
        Matrix prod = identity(dim);
        for (std::size_t v : word) prod = prod * *ops[v];
        sum += prod;
        ++count;
    } while (std::next_permutation(word.begin(), word.end()));
    return sum / static_cast<double>(count);
}

}  // namespace

double CommutationResiduals::max() const {
    return std::max({rho_plus, rho_minus, range_plus, range_minus});
}

CommutationResiduals commutation_check(const ObservablePair& pair, const BipartiteState& state) {
    require_pair_dims(pair, state.dims());
    const SubsystemPair sub = reduce(state);
    const SubspaceProjectors p = projectors(state);
    return {max_abs(commutator(pair.plus, sub.rho_plus)),
            max_abs(commutator(pair.minus, sub.rho_minus)),
            max_abs(commutator(pair.plus, p.range_plus)),
            max_abs(commutator(pair.minus, p.range_minus))};
}

ObservablePair DetectableSplit::embedded_detectable() const {
    return {symmetrized(bases.range_plus * detectable_plus * bases.range_plus.adjoint()),
            symmetrized(bases.range_minus * detectable_minus * bases.range_minus.adjoint())};
}

ObservablePair DetectableSplit::embedded_undetectable() const {
    return {symmetrized(bases.null_plus * undetectable_plus * bases.null_plus.adjoint()),
            symmetrized(bases.null_minus * undetectable_minus * bases.null_minus.adjoint())};
}

DetectableSplit split_detectable(const ObservablePair& pair, const BipartiteState& state) {
    const Dims dims = state.dims();
    require_pair_dims(pair, dims);
    const Tolerances& tol = state.tolerances();
    const ObservablePair a = make_pair(pair.plus, pair.minus, tol.herm_tol);

    DetectableSplit split;
    split.bases = subsystem_bases(state);
    const SubsystemBases& b = split.bases;
    split.off_block_residual =
        std::max(max_abs(b.range_plus.adjoint() * a.plus * b.null_plus),
                 max_abs(b.range_minus.adjoint() * a.minus * b.null_minus));
    if (split.off_block_residual > tol.residual_tol) {
        throw Error(ErrorCode::NotReducible,
                    "pair does not reduce in range and null spaces (off-block " +
                        std::to_string(split.off_block_residual) + ")");
    }
    split.detectable_plus = symmetrized(b.range_plus.adjoint() * a.plus * b.range_plus);
    split.detectable_minus = symmetrized(b.range_minus.adjoint() * a.minus * b.range_minus);
    split.undetectable_plus = symmetrized(b.null_plus.adjoint() * a.plus * b.null_plus);
    split.undetectable_minus = symmetrized(b.null_minus.adjoint() * a.minus * b.null_minus);

    const RelevantRestriction restriction = restrict_to_relevant(state, b);
    split.rho_prime = restriction.rho_prime;
    split.detectable_twin_residual =
        twin_residual(split.rho_prime, split.prime_dims(),
                      {split.detectable_plus, split.detectable_minus});

    const ObservablePair undetectable = split.embedded_undetectable();
    split.undetectable_residual =
        std::max(max_abs(lift(undetectable.plus, dims, Side::Plus) * state.rho()),
                 max_abs(lift(undetectable.minus, dims, Side::Minus) * state.rho()));
    return split;
}

DetectableSpectra detectable_spectra(const DetectableSplit& split, double cluster_tol) {
    const auto plus = cluster_spectrum(split.detectable_plus, cluster_tol);
    const auto minus = cluster_spectrum(split.detectable_minus, cluster_tol);
    if (plus.size() != minus.size()) {
        throw Error(ErrorCode::SpectraMismatch,
                    "detectable parts have " + std::to_string(plus.size()) + " and " +
                        std::to_string(minus.size()) + " characteristic values");
    }
    DetectableSpectra out;
    for (std::size_t k = 0; k < plus.size(); ++k) {
        const double gap = std::abs(plus[k].value - minus[k].value);
        out.max_mismatch = std::max(out.max_mismatch, gap);
        if (gap > cluster_tol) {
            throw Error(ErrorCode::SpectraMismatch,
                        "characteristic values " + std::to_string(plus[k].value) + " and " +
                            std::to_string(minus[k].value) + " differ");
        }
        out.values.push_back((plus[k].value + minus[k].value) / 2.0);
        out.mult_plus.push_back(plus[k].multiplicity);
        out.mult_minus.push_back(minus[k].multiplicity);
    }
    return out;
}

double off_spectrum_support_residual(const DetectableSplit& split, double cluster_tol) {
    const SpectralDecomposition plus = eigh(split.detectable_plus);
    const SpectralDecomposition minus = eigh(split.detectable_minus);
    double worst = 0.0;
    for (Index i = 0; i < plus.values.size(); ++i) {
        for (Index j = 0; j < minus.values.size(); ++j) {
            if (std::abs(plus.values(i) - minus.values(j)) <= cluster_tol) continue;
            const Vector product = kron(plus.vectors.col(i), minus.vectors.col(j));
            worst = std::max(worst, (split.rho_prime * product).norm());
        }
    }
    return worst;
}

double CharacteristicTwins::max_twin_residual() const {
    double m = 0.0;
    for (const auto& p : pairs) m = std::max({m, p.twin_residual, p.full_twin_residual});
    return m;
}

CharacteristicTwins characteristic_projector_twins(const DetectableSplit& split,
                                                   const BipartiteState& state) {
    const Tolerances& tol = state.tolerances();
    const Dims dims = state.dims();
    const Dims prime = split.prime_dims();
    const DetectableSpectra spectra = detectable_spectra(split, tol.cluster_tol);
    const std::vector<double>& sigma = spectra.values;
    for (std::size_t k = 1; k < sigma.size(); ++k) {
        if (sigma[k] - sigma[k - 1] <= tol.cluster_tol) {
            throw Error(ErrorCode::DegenerateSpectrumCollision,
                        "characteristic values closer than cluster_tol");
        }
    }

    // Full operators A'_s (+) A''_s, needed for the characteristic projectors of A_s.
    const ObservablePair detectable = split.embedded_detectable();
    const ObservablePair undetectable = split.embedded_undetectable();
    const Matrix full_plus = detectable.plus + undetectable.plus;
    const Matrix full_minus = detectable.minus + undetectable.minus;

    CharacteristicTwins out;
    Matrix sum_plus = Matrix::Zero(prime.plus, prime.plus);
    Matrix sum_minus = Matrix::Zero(prime.minus, prime.minus);
    Matrix state_sum_plus = Matrix::Zero(dims.total(), dims.total());
    Matrix state_sum_minus = Matrix::Zero(dims.total(), dims.total());
    for (std::size_t k = 0; k < sigma.size(); ++k) {
        CharacteristicPair cp;
        cp.value = sigma[k];
        cp.prime_plus = lagrange_projector(split.detectable_plus, sigma, k);
        cp.prime_minus = lagrange_projector(split.detectable_minus, sigma, k);
        cp.full_plus = full_characteristic_projector(full_plus, cp.value, tol.cluster_tol);
        cp.full_minus = full_characteristic_projector(full_minus, cp.value, tol.cluster_tol);
        cp.twin_residual = twin_residual(split.rho_prime, prime, {cp.prime_plus, cp.prime_minus});
        cp.full_twin_residual = twin_residual(state.rho(), dims, {cp.full_plus, cp.full_minus});
        cp.probability_prime = (lift(cp.prime_plus, prime, Side::Plus) * split.rho_prime).trace().real();
        const Matrix lifted_plus = lift(cp.full_plus, dims, Side::Plus);
        const Matrix lifted_minus = lift(cp.full_minus, dims, Side::Minus);
        cp.probability_plus = (lifted_plus * state.rho()).trace().real();
        cp.probability_minus = (lifted_minus * state.rho()).trace().real();

        sum_plus += cp.value * cp.prime_plus;
        sum_minus += cp.value * cp.prime_minus;
        state_sum_plus += cp.value * lifted_plus * state.rho();
        state_sum_minus += cp.value * lifted_minus * state.rho();
        out.pairs.push_back(std::move(cp));
    }
    out.reconstruction_residual = std::max(max_abs(sum_plus - split.detectable_plus),
                                           max_abs(sum_minus - split.detectable_minus));
    out.state_reconstruction_residual = std::max(
        max_abs(state_sum_plus - lift(full_plus, dims, Side::Plus) * state.rho()),
        max_abs(state_sum_minus - lift(full_minus, dims, Side::Minus) * state.rho()));
    return out;
}

ValueTable tabulate(const ObservablePair& pair, const std::function<double(double)>& f,
                    double cluster_tol) {
    std::vector<double> values;
    for (const Matrix* side : {&pair.plus, &pair.minus}) {
        const RealVector ev = eigenvalues_of(*side);
        values.insert(values.end(), ev.data(), ev.data() + ev.size());
    }
    std::sort(values.begin(), values.end());
    ValueTable table;
    std::size_t start = 0;
    while (start < values.size()) {
        std::size_t end = start + 1;
        while (end < values.size() && values[end] - values[end - 1] <= cluster_tol) ++end;
        double mean = 0.0;
        for (std::size_t k = start; k < end; ++k) mean += values[k];
        mean /= static_cast<double>(end - start);
        table.emplace_back(mean, f(mean));
        start = end;
    }
    return table;
}

ObservablePair apply_function(const ObservablePair& pair, const ValueTable& table,
                              double cluster_tol) {
    return {apply_side(pair.plus, table, cluster_tol), apply_side(pair.minus, table, cluster_tol)};
}

ObservablePair apply_function(const ObservablePair& pair, const std::function<double(double)>& f,
                              double cluster_tol) {
    return apply_function(pair, tabulate(pair, f, cluster_tol), cluster_tol);
}

std::size_t Polynomial::variables() const {
    std::size_t n = 0;
    for (const auto& m : terms) n = std::max(n, m.exponents.size());
    return n;
}

bool Polynomial::is_symmetric(double tol) const {
    const std::size_t n = variables();
    const ExponentMap terms_map = canonical_terms(*this, n);
    for (std::size_t v = 0; v + 1 < n; ++v) {
        ExponentMap swapped;
        for (const auto& [e, c] : terms_map) {
            std::vector<unsigned> s = e;
            std::swap(s[v], s[v + 1]);
            swapped[s] += c;
        }
        for (const auto& [e, c] : terms_map) {
            const auto it = swapped.find(e);
            const double other = it == swapped.end() ? 0.0 : it->second;
            if (std::abs(c - other) > tol * std::max(1.0, std::abs(c))) return false;
        }
        for (const auto& [e, c] : swapped) {
            if (!terms_map.contains(e) && std::abs(c) > tol * std::max(1.0, std::abs(c))) {
                return false;
            }
        }
    }
    return true;
}

ObservablePair symmetric_polynomial(const std::vector<ObservablePair>& pairs,
                                    const Polynomial& poly, const BipartiteState& state) {
    if (poly.variables() > pairs.size()) {
        throw Error(ErrorCode::InvalidInput, "polynomial has more variables than pairs");
    }
    const Dims dims = state.dims();
    std::vector<const Matrix*> plus_ops;
    std::vector<const Matrix*> minus_ops;
    for (const ObservablePair& p : pairs) {
        require_pair_dims(p, dims);
        const TwinCheck check = is_twin_pair(state, p);
        if (!check.verdict) {
            throw Error(ErrorCode::InvalidInput, "input pair is not a twin pair (residual " +
                                                     std::to_string(check.residual) + ")");
        }
        plus_ops.push_back(&p.plus);
        minus_ops.push_back(&p.minus);
    }
    // Missing trailing variables count as exponent zero.
    Polynomial padded = poly;
    for (auto& m : padded.terms) m.exponents.resize(pairs.size(), 0u);
    if (!padded.is_symmetric()) {
        throw Error(ErrorCode::NotSymmetric, "polynomial is not invariant under transpositions");
    }

    ObservablePair out{Matrix::Zero(dims.plus, dims.plus), Matrix::Zero(dims.minus, dims.minus)};
    for (const auto& [e, c] : canonical_terms(padded, pairs.size())) {
        if (c == 0.0) continue;
        out.plus += c * symmetrized_word(plus_ops, e, dims.plus);
        out.minus += c * symmetrized_word(minus_ops, e, dims.minus);
    }
    out.plus = symmetrized(out.plus);
    out.minus = symmetrized(out.minus);
    return out;
}

Matrix detectable_operator(const MatchedBases& bases, Side s) {
    const Matrix& basis = s == Side::Plus ? bases.basis_plus : bases.basis_minus;
    RealVector values = Eigen::Map<const RealVector>(bases.sigma_prime.data(),
                                                     static_cast<Index>(bases.sigma_prime.size()));
    return basis * values.cast<Complex>().asDiagonal() * basis.adjoint();
}

std::optional<CompleteTwins> find_complete_twins(const TwinSpace& space, const BipartiteState& state,
                                                 std::uint64_t seed, Index attempts) {
    const Tolerances& tol = state.tolerances();
    const SubsystemBases bases = subsystem_bases(state);
    if (bases.rank(Side::Plus) != bases.rank(Side::Minus)) return std::nullopt;

    const RealMatrix detectable = detectable_coordinates(space, state);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (Index attempt = 1; attempt <= attempts; ++attempt) {
        RealVector w(detectable.cols());
        for (Index k = 0; k < w.size(); ++k) w(k) = normal(rng);
        const ObservablePair candidate = pair_from_coordinates(detectable * w, space.dims);
        DetectableSplit split;
        try {
            split = split_detectable(candidate, state);
        } catch (const Error&) {
            continue;
        }
        const SpectralDecomposition plus = eigh(split.detectable_plus);
        const SpectralDecomposition minus = eigh(split.detectable_minus);
        if (!nondegenerate(plus.values, tol.cluster_tol) ||
            !nondegenerate(minus.values, tol.cluster_tol)) {
            continue;
        }
        try {
            (void)detectable_spectra(split, tol.cluster_tol);
        } catch (const Error&) {
            continue;
        }
        CompleteTwins out;
        out.pair = split.embedded_detectable();
        out.attempts = attempt;
        out.bases.basis_plus = bases.range_plus * plus.vectors;
        out.bases.basis_minus = bases.range_minus * minus.vectors;
        for (Index k = 0; k < plus.values.size(); ++k) {
            out.bases.sigma_prime.push_back((plus.values(k) + minus.values(k)) / 2.0);
        }
        return out;
    }
    return std::nullopt;
}

}  // namespace twinobs
