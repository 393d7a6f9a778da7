// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "fixtures.hpp"
#include "oracles.hpp"
#include "twinobs/error.hpp"
#include "twinobs/measurement.hpp"
#include "twinobs/schmidt.hpp"
#include "twinobs/spin.hpp"
#include "twinobs/twin_analysis.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

using namespace twinobs;

namespace {

struct Criterion {
    int number = 0;
    std::string title;
    bool ok = true;
    std::vector<std::string> notes;

    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            notes.push_back(what);
        }
    }
    void bound(double value, double tol, const std::string& what) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%s = %.3g > %.1g", what.c_str(), value, tol);
        require(std::isfinite(value) && value <= tol, buf);
    }
};

RealMatrix span_of(const std::vector<ObservablePair>& pairs) {
    RealMatrix cols(oracle::vec_embed(pairs.front()).size(), static_cast<Index>(pairs.size()));
    for (std::size_t k = 0; k < pairs.size(); ++k) cols.col(static_cast<Index>(k)) = oracle::vec_embed(pairs[k]);
    return oracle::gram_schmidt(cols);
}

Matrix total_sz_half() {
    const Matrix sz = fixture::sz_half();
    return kron(sz, identity(2)) + kron(identity(2), sz);
}

Matrix gibbs_hamiltonian() { return total_sz_half() + kron(fixture::sz_half(), fixture::sz_half()); }

std::vector<BipartiteState> nonsingular_states() {
    oracle::Rng rng(9005);
    std::vector<BipartiteState> out;
    const Dims dims[] = {{2, 2}, {2, 3}, {3, 3}};
    for (int t = 0; t < 20; ++t) {
        const Dims d = dims[t % 3];
        out.push_back(BipartiteState::from_matrix(oracle::random_state(d.total(), d.total(), rng), d));
    }
    for (double temp : {0.5, 1.0, 5.0})
        out.push_back(BipartiteState::from_matrix(oracle::gibbs_state(gibbs_hamiltonian(), temp), {2, 2}));
    return out;
}

std::vector<BipartiteState> example_states() {
    std::vector<BipartiteState> out;
    for (Scenario s : all_scenarios()) out.push_back(build_scenario({s, {}}));
    return out;
}

Criterion criterion1() {
    Criterion c{1, "Example 1 twins are (a1 + b s_z, a1 - b s_z)"};
    const BipartiteState s = build_scenario({Scenario::Example1Range10_00, {}});
    const TwinSpace space = solve_twin_space(s);
    c.require(space.dim_total == 2, "dim_total = " + std::to_string(space.dim_total));
    const std::vector<ObservablePair> analytic{{identity(2), identity(2)},
                                               {fixture::sz_half(), -fixture::sz_half()}};
    c.bound(oracle::principal_distance(span_of(space.basis), span_of(analytic)), 1e-8, "distance");
    return c;
}

Criterion criterion2() {
    Criterion c{2, "Example 1 range {|1,0>,|1,-1>} has scalar twins only"};
    const BipartiteState s = build_scenario({Scenario::Example1Range10_1m1, {}});
    const TwinSpace space = solve_twin_space(s);
    c.require(!space.nonsingular, "state reported nonsingular");
    c.require(space.dim_detectable == 1, "dim_detectable = " + std::to_string(space.dim_detectable));
    c.bound(pair_containment(scalar_pair(s.dims()), space), 1e-8, "scalar containment");
    return c;
}

Criterion criterion3() {
    Criterion c{3, "Example 2 M_S=0 twins span (1,1), (s_z,-s_z), (s_z^2,s_z^2)"};
    const BipartiteState s = build_scenario({Scenario::Example2Ms0, {}});
    const TwinSpace space = solve_twin_space(s);
    c.require(space.dim_total == 3, "dim_total = " + std::to_string(space.dim_total));
    const Matrix sz = fixture::sz_one();
    const std::vector<ObservablePair> analytic{{identity(3), identity(3)}, {sz, -sz}, {sz * sz, sz * sz}};
    c.bound(oracle::principal_distance(span_of(space.basis), span_of(analytic)), 1e-8, "distance");
    return c;
}

Criterion criterion4() {
    Criterion c{4, "Example 2 M_S=1 definitional dimension 4, listed spans contained, A'+- = +-diag(1,-1)/2"};
    const BipartiteState s = build_scenario({Scenario::Example2Ms1, {}});
    const TwinSpace space = solve_twin_space(s);
    const RealMatrix brute = oracle::brute_force_twin_space(s.rho(), s.dims());
    c.require(space.dim_total == 4, "dim_total = " + std::to_string(space.dim_total));
    c.require(brute.cols() == 4, "oracle dimension = " + std::to_string(brute.cols()));
    c.bound(oracle::principal_distance(span_of(space.basis), brute), 1e-8, "oracle distance");
    const Matrix sz = fixture::sz_one();
    const Matrix one = identity(3);
    const ObservablePair a{sz - 0.5 * one, -sz + 0.5 * one};
    for (const ObservablePair& p : {ObservablePair{one, one}, a, ObservablePair{sz * sz - sz, sz * sz - sz}})
        c.bound(pair_containment(p, space), 1e-8, "listed pair containment");
    const ObservablePair det = split_detectable(a, s).embedded_detectable();
    c.bound(max_abs(det.plus - fixture::diag({0.5, -0.5, 0.0})), 1e-8, "A'+ deviation");
    c.bound(max_abs(det.minus - fixture::diag({-0.5, 0.5, 0.0})), 1e-8, "A'- deviation");
    return c;
}

Criterion criterion5() {
    Criterion c{5, "nonsingular states (20 random, Gibbs at T = 0.5, 1, 5) have scalar twins only"};
    for (const BipartiteState& s : nonsingular_states()) {
        const TwinSpace space = solve_twin_space(s);
        c.require(space.nonsingular, "state not recognised as nonsingular");
        c.require(space.dim_total == 1, "dim_total = " + std::to_string(space.dim_total));
    }
    return c;
}

Criterion criterion6() {
    Criterion c{6, "solver agrees with the dense definitional kernel on 50 random states"};
    oracle::Rng rng(9006);
    const Dims dims[] = {{2, 2}, {2, 3}, {3, 2}, {3, 3}};
    double worst = 0.0;
    for (int t = 0; t < 50; ++t) {
        const Dims d = dims[t % 4];
        Matrix rho;
        switch (t % 3) {
            case 0:
                rho = oracle::random_state(d.total(), std::uniform_int_distribution<Index>(1, d.total())(rng), rng);
                break;
            case 1: {
                const Dims inner{std::max<Index>(1, d.plus - 1), d.minus - 1};
                rho = oracle::random_embedded_state(
                    d, inner, std::uniform_int_distribution<Index>(1, inner.total())(rng), rng);
                break;
            }
            default: {
                Matrix bp, bm;
                double b;
                rho = oracle::random_additive_state(d, rng, bp, bm, b);
            }
        }
        const BipartiteState s = BipartiteState::from_matrix(rho, d);
        const TwinSpace space = solve_twin_space(s);
        const RealMatrix brute = oracle::brute_force_twin_space(s.rho(), d);
        c.require(space.dim_total == brute.cols(), "trial " + std::to_string(t) + ": dimension " +
                                                       std::to_string(space.dim_total) + " vs " +
                                                       std::to_string(brute.cols()));
        worst = std::max(worst, oracle::principal_distance(span_of(space.basis), brute));
    }
    c.bound(worst, 1e-8, "worst distance");
    return c;
}

Criterion criterion7() {
    Criterion c{7, "equal detectable spectra, support residuals, characteristic projector twins"};
    std::vector<BipartiteState> states = example_states();
    for (BipartiteState& s : nonsingular_states()) states.push_back(std::move(s));
    double eigs = 0, support = 0, twin = 0, recon = 0;
    for (const BipartiteState& s : states) {
        const TwinSpace space = solve_twin_space(s);
        for (const ObservablePair& p : space.basis) {
            const DetectableSplit split = split_detectable(p, s);
            eigs = std::max(eigs, detectable_spectra(split, s.tolerances().cluster_tol).max_mismatch);
            support = std::max(support, off_spectrum_support_residual(split, s.tolerances().cluster_tol));
            const CharacteristicTwins ct = characteristic_projector_twins(split, s);
            for (const CharacteristicPair& cp : ct.pairs) {
                const TwinCheck check = is_twin_pair(s, {cp.full_plus, cp.full_minus});
                c.require(check.verdict, "characteristic projector pair is not a twin");
                twin = std::max(twin, check.residual);
            }
            recon = std::max(recon, ct.state_reconstruction_residual);
        }
    }
    c.bound(eigs, 1e-8, "spectrum mismatch");
    c.bound(twin, 1e-8, "characteristic twin residual");
    c.bound(support, 1e-8, "support residual");
    c.bound(recon, 1e-8, "sum_a a P(a) rho residual");
    return c;
}

Criterion criterion8() {
    Criterion c{8, "functions and symmetric polynomials of twins stay twins; anticommutator chain"};
    oracle::Rng rng(9008);
    std::normal_distribution<double> n(0.0, 1.0);
    std::vector<BipartiteState> states = example_states();
    for (int t = 0; t < 6; ++t) {
        Matrix bp, bm;
        double b;
        const Dims d{2 + t % 2, 3};
        states.push_back(BipartiteState::from_matrix(oracle::random_additive_state(d, rng, bp, bm, b), d));
    }
    auto random_twin = [&](const BipartiteState& s) {
        const TwinSpace space = solve_twin_space(s);
        RealVector w(space.dim_total);
        for (Index k = 0; k < w.size(); ++k) w(k) = n(rng);
        return space.combination(w);
    };
    double fn = 0, sym = 0, chain = 0;
    for (int t = 0; t < 50; ++t) {
        const BipartiteState& s = states[static_cast<std::size_t>(t) % states.size()];
        std::vector<double> coef(static_cast<std::size_t>(std::uniform_int_distribution<int>(2, 5)(rng)));
        for (double& x : coef) x = n(rng);
        const auto f = [&coef](double x) {
            double y = 0.0;
            for (auto it = coef.rbegin(); it != coef.rend(); ++it) y = y * x + *it;
            return y;
        };
        fn = std::max(fn, is_twin_pair(s, apply_function(random_twin(s), f, s.tolerances().cluster_tol)).residual);
    }
    for (int t = 0; t < 20; ++t) {
        const BipartiteState& s = states[static_cast<std::size_t>(t) % states.size()];
        const std::vector<ObservablePair> vars{random_twin(s), random_twin(s)};
        Polynomial poly;
        for (int k = 0; k < 3; ++k) {
            const unsigned i = std::uniform_int_distribution<unsigned>(0, 3)(rng);
            const unsigned j = std::uniform_int_distribution<unsigned>(0, 3 - i)(rng);
            const double a = n(rng);
            poly.terms.push_back({a, {i, j}});
            poly.terms.push_back({a, {j, i}});
        }
        sym = std::max(sym, is_twin_pair(s, symmetric_polynomial(vars, poly, s)).residual);
        const Dims d = s.dims();
        const Matrix ap = lift(vars[0].plus, d, Side::Plus), am = lift(vars[0].minus, d, Side::Minus);
        const Matrix bp = lift(vars[1].plus, d, Side::Plus), bm = lift(vars[1].minus, d, Side::Minus);
        const Matrix first = (ap * bp + bp * ap) * s.rho();
        for (const Matrix& other : {Matrix((ap * bm + bp * am) * s.rho()), Matrix((bm * ap + am * bp) * s.rho()),
                                    Matrix((bm * am + am * bm) * s.rho())})
            chain = std::max(chain, max_abs(first - other));
    }
    c.bound(fn, 1e-8, "function residual");
    c.bound(sym, 1e-8, "symmetric polynomial residual");
    c.bound(chain, 1e-8, "anticommutator chain residual");
    return c;
}

Criterion criterion9() {
    Criterion c{9, "distant measurement equality, criteria coherence, certainty biconditional"};
    double prob = 0, collapse = 0;
    std::vector<std::pair<BipartiteState, std::vector<ObservablePair>>> cases;
    {
        const BipartiteState s = build_scenario({Scenario::Example1Range10_00, {}});
        std::vector<ObservablePair> pairs = solve_twin_space(s).basis;
        pairs.push_back({fixture::sz_half(), -fixture::sz_half()});
        cases.emplace_back(s, pairs);
    }
    {
        const BipartiteState s = build_scenario({Scenario::Example2Ms1, {}});
        std::vector<ObservablePair> pairs = solve_twin_space(s).basis;
        const Matrix sz = fixture::sz_one();
        pairs.push_back({sz - 0.5 * identity(3), -sz + 0.5 * identity(3)});
        cases.emplace_back(s, pairs);
    }
    for (const auto& [s, pairs] : cases) {
        for (const ObservablePair& p : pairs) {
            const DistantMeasurementReport r = distant_measurement_report(s, p);
            c.require(r.verdict, "distant measurement verdict false");
            for (const MeasurementOutcome& o : r.outcomes) {
                prob = std::max(prob, std::abs(o.probability_plus - o.probability_minus));
                collapse = std::max(collapse, o.collapse_residual);
            }
        }
    }
    c.bound(prob, 1e-9, "probability difference");
    c.bound(collapse, 1e-9, "collapse difference");

    oracle::Rng rng(9009);
    const Tolerances tol{};
    int incoherent = 0, equivalent = 0;
    for (int t = 0; t < 200; ++t) {
        const Dims d{2 + t % 2, 3};
        Matrix rho, e, f;
        if (t % 2 == 0) {
            Matrix bp, bm;
            double b;
            rho = oracle::random_additive_state(d, rng, bp, bm, b);
            const BipartiteState s = BipartiteState::from_matrix(rho, d);
            const ObservablePair pair = *additive_twins(s, bp, bm);
            const CharacteristicTwins ct = characteristic_projector_twins(split_detectable(pair, s), s);
            const CharacteristicPair& cp = ct.pairs[static_cast<std::size_t>(t / 2) % ct.pairs.size()];
            e = lift(cp.full_plus, d, Side::Plus);
            f = lift(cp.full_minus, d, Side::Minus);
        } else {
            rho = oracle::random_state(d.total(), 1 + t % d.total(), rng);
            const Matrix qp = oracle::random_unitary(d.plus, rng).leftCols(1);
            const Matrix qm = oracle::random_unitary(d.minus, rng).leftCols(1 + t % 2);
            e = lift(qp * qp.adjoint(), d, Side::Plus);
            f = lift(qm * qm.adjoint(), d, Side::Minus);
        }
        const CriteriaReport r = event_equivalence(rho, make_event_pair(e, f, tol.residual_tol), tol);
        incoherent += r.coherent() ? 0 : 1;
        equivalent += r.algebraic_pass ? 1 : 0;
    }
    c.require(incoherent == 0, std::to_string(incoherent) + " incoherent event pairs");
    c.require(equivalent > 0 && equivalent < 200, "event sample is one-sided");

    int wrong = 0;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 50; ++t) {
        const Index dim = 4 + t % 3;
        const Matrix v = oracle::random_unitary(dim, rng);
        RealVector eigs(dim);
        for (Index k = 0; k < dim; ++k) eigs(k) = static_cast<double>(k / 2) + 0.3;
        const Matrix a = v * eigs.asDiagonal() * v.adjoint();
        Matrix rho;
        std::optional<double> expected;
        if (t % 2 == 0) {
            const Matrix inner = oracle::random_state(2, 1 + t % 2, rng);
            rho = v.leftCols(2) * inner * v.leftCols(2).adjoint();
            expected = 0.3;
        } else {
            const double w = 0.1 + 0.8 * u(rng);
            rho = w * v.col(0) * v.col(0).adjoint() + (1.0 - w) * v.col(2) * v.col(2).adjoint();
        }
        const CertaintyResult r = certainty_test(rho, a, tol);
        const bool right = r.consistent() && r.value.has_value() == expected.has_value() &&
                           (!expected || std::abs(*r.value - *expected) <= 1e-9);
        wrong += right ? 0 : 1;
    }
    c.require(wrong == 0, std::to_string(wrong) + " certainty cases wrong");
    return c;
}

Criterion criterion10() {
    Criterion c{10, "simplified matrix sparsity, pure Schmidt forms, simultaneous expansions, compatibility"};
    oracle::Rng rng(9010);
    double forbidden = 0, recon = 0, offdiag = 0, comm = 0;
    int found = 0;

    std::vector<BipartiteState> states = example_states();
    std::vector<BipartiteState> pure;
    for (int t = 0; t < 10; ++t) {
        // Components diagonal in shared random bases.
        const Dims d{3, 2 + t % 2};
        const Matrix u = oracle::random_unitary(d.plus, rng), v = oracle::random_unitary(d.minus, rng);
        PureDecomposition dec{d, {}};
        const Index k = 2;
        const Index comps = t < 5 ? 1 : 2;
        for (Index i = 0; i < comps; ++i) {
            const Vector alpha = oracle::random_unit_vector(k, rng);
            Vector phi = Vector::Zero(d.total());
            for (Index a = 0; a < k; ++a) phi += alpha(a) * kron(u.col(a), v.col(a));
            dec.components.push_back({1.0 / static_cast<double>(comps), phi});
        }
        (comps == 1 ? pure : states).push_back(mix(dec));
    }
    for (const BipartiteState& s : pure) states.push_back(s);
    for (const BipartiteState& s : states) {
        const auto ct = find_complete_twins(solve_twin_space(s), s, 11);
        if (!ct) continue;
        ++found;
        forbidden = std::max(forbidden, simplified_matrix(s, ct->bases).max_forbidden);
    }
    c.require(found >= 13, "complete twins found for " + std::to_string(found) + " states");
    for (const BipartiteState& s : pure) {
        const auto ct = find_complete_twins(solve_twin_space(s), s, 13);
        c.require(ct.has_value(), "no complete twins for a pure diagonal state");
        if (ct) recon = std::max(recon, pure_schmidt(s, ct->bases).reconstruction_error);
    }

    const BipartiteState ex1 = build_scenario({Scenario::Example1Range10_00, {}});
    const auto ct = find_complete_twins(solve_twin_space(ex1), ex1, 0);
    c.require(ct.has_value(), "no complete twins for Example 1");
    if (ct) {
        const PureDecomposition dec = scenario_decomposition({Scenario::Example1Range10_00, {}});
        try {
            offdiag = simultaneous_expansion(dec, ct->bases).max_off_diagonal;
            comm = compatibility_report(dec, ct->bases).max_residual;
        } catch (const Error& e) {
            c.require(false, e.what());
        }
    }
    c.bound(forbidden, 1e-8, "forbidden entry");
    c.bound(recon, 1e-9, "pure reconstruction error");
    c.bound(offdiag, 1e-8, "Example 1 off-diagonal");
    c.bound(comm, 1e-9, "commutator residual");
    return c;
}

}  // namespace

int main() {
    const std::vector<std::function<Criterion()>> all{criterion1, criterion2, criterion3, criterion4,
                                                      criterion5, criterion6, criterion7, criterion8,
                                                      criterion9, criterion10};
    int failures = 0;
    for (std::size_t i = 0; i < all.size(); ++i) {
        Criterion c;
        try {
            c = all[i]();
        } catch (const std::exception& e) {
            c.number = static_cast<int>(i + 1);
            c.ok = false;
            c.notes.push_back(std::string("exception: ") + e.what());
        }
        std::printf("criterion %d: %s  %s\n", c.number, c.ok ? "PASS" : "FAIL", c.title.c_str());
        for (const std::string& n : c.notes) std::printf("    %s\n", n.c_str());
        failures += c.ok ? 0 : 1;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(all.size()) - failures, all.size());
    return failures == 0 ? 0 : 1;
}
