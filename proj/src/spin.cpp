#include "twinobs/spin.hpp"

#include "twinobs/error.hpp"

#include <array>
#include <cmath>
#include <cstdlib>

namespace twinobs {

namespace {

void require_spin(int two_j) {
    if (two_j != 1 && two_j != 2) {
        throw Error(ErrorCode::UnsupportedSpin,
                    "spin " + std::to_string(two_j) + "/2 is not supported (only 1/2 and 1)");
    }
}

double m_of(int two_j, Index i) { return 0.5 * two_j - static_cast<double>(i); }

struct ScenarioInfo {
    Scenario id;
    std::string_view name;
    int two_j;
    std::vector<CoupledLabel> components;
};

const std::array<ScenarioInfo, 4>& scenario_table() {
    static const std::array<ScenarioInfo, 4> table{{
        {Scenario::Example1Range10_00, "example1_range10_00", 1, {{2, 0}, {0, 0}}},
        {Scenario::Example1Range10_1m1, "example1_range10_1m1", 1, {{2, 0}, {2, -2}}},
        {Scenario::Example2Ms0, "example2_ms0", 2, {{4, 0}, {2, 0}, {0, 0}}},
        {Scenario::Example2Ms1, "example2_ms1", 2, {{4, 2}, {2, 2}}},
    }};
    return table;
}

const ScenarioInfo& info(Scenario s) {
    for (const auto& e : scenario_table()) {
        if (e.id == s) return e;
    }
    throw Error(ErrorCode::InvalidInput, "unknown scenario");
}

}  // namespace

Matrix spin_z(int two_j) {
    require_spin(two_j);
    const Index d = two_j + 1;
    Matrix out = Matrix::Zero(d, d);
    for (Index i = 0; i < d; ++i) out(i, i) = m_of(two_j, i);
    return out;
}

Matrix spin_lower(int two_j) {
    require_spin(two_j);
    const Index d = two_j + 1;
    const double j = 0.5 * two_j;
    Matrix out = Matrix::Zero(d, d);
    for (Index i = 0; i + 1 < d; ++i) {
        const double m = m_of(two_j, i);
        out(i + 1, i) = std::sqrt(j * (j + 1.0) - m * (m - 1.0));
    }
    return out;
}

Matrix spin_raise(int two_j) { return spin_lower(two_j).adjoint(); }

Matrix total_spin_z(int two_j1, int two_j2) {
    const Dims dims{two_j1 + 1, two_j2 + 1};
    return lift(spin_z(two_j1), dims, Side::Plus) + lift(spin_z(two_j2), dims, Side::Minus);
}

Matrix total_spin_squared(int two_j1, int two_j2) {
    const Dims dims{two_j1 + 1, two_j2 + 1};
    const Matrix sz = total_spin_z(two_j1, two_j2);
    const Matrix lower =
        lift(spin_lower(two_j1), dims, Side::Plus) + lift(spin_lower(two_j2), dims, Side::Minus);
    const Matrix raise = lower.adjoint();
    // S^2 = S- S+ + S_z^2 + S_z
    return lower * raise + sz * sz + sz;
}

Index CoupledBasis::column(int two_s, int two_m) const {
    for (std::size_t k = 0; k < labels.size(); ++k) {
        if (labels[k].two_s == two_s && labels[k].two_m == two_m) return static_cast<Index>(k);
    }
    throw Error(ErrorCode::InvalidInput, "no coupled state |" + std::to_string(two_s) + "/2, " +
                                             std::to_string(two_m) + "/2>");
}

CoupledBasis coupled_basis(int two_j1, int two_j2) {
    require_spin(two_j1);
    require_spin(two_j2);
    const Index d1 = two_j1 + 1;
    const Index d2 = two_j2 + 1;
    const Dims dims{d1, d2};
    const Matrix lower =
        lift(spin_lower(two_j1), dims, Side::Plus) + lift(spin_lower(two_j2), dims, Side::Minus);

    CoupledBasis out;
    out.two_j1 = two_j1;
    out.two_j2 = two_j2;
    std::vector<Vector> columns;
    for (int two_s = two_j1 + two_j2; two_s >= std::abs(two_j1 - two_j2); two_s -= 2) {
        // Highest weight: the vector in the M = S product subspace orthogonal to the
        // states already built there.
        std::vector<Index> sector;
        for (Index i1 = 0; i1 < d1; ++i1)
            for (Index i2 = 0; i2 < d2; ++i2)
                if (std::lround(2.0 * (m_of(two_j1, i1) + m_of(two_j2, i2))) == two_s)
                    sector.push_back(i1 * d2 + i2);
        Matrix existing(static_cast<Index>(sector.size()), 0);
        for (std::size_t k = 0; k < columns.size(); ++k) {
            if (out.labels[k].two_m != two_s) continue;
            existing.conservativeResize(Eigen::NoChange, existing.cols() + 1);
            for (std::size_t r = 0; r < sector.size(); ++r) {
                existing(static_cast<Index>(r), existing.cols() - 1) = columns[k](sector[r]);
            }
        }
        const Matrix complement = kernel_basis(Matrix(existing.adjoint()), 1e-12);
        if (complement.cols() != 1) {
            throw Error(ErrorCode::ConvergenceFailure, "highest-weight sector is not one-dimensional");
        }
        Vector top = Vector::Zero(d1 * d2);
        for (std::size_t r = 0; r < sector.size(); ++r) top(sector[r]) = complement(static_cast<Index>(r), 0);
        // Condon-Shortley: the coefficient with the largest m1 is real positive.
        for (Index i = 0; i < top.size(); ++i) {
            if (std::abs(top(i)) > 1e-12) {
                top *= std::conj(top(i)) / std::abs(top(i));
                break;
            }
        }
        top.normalize();

        Vector current = top;
        for (int two_m = two_s; two_m >= -two_s; two_m -= 2) {
            columns.push_back(current);
            out.labels.push_back({two_s, two_m});
            if (two_m > -two_s) {
                current = lower * current;
                current.normalize();
            }
        }
    }
    out.unitary = Matrix(d1 * d2, static_cast<Index>(columns.size()));
    for (std::size_t k = 0; k < columns.size(); ++k) out.unitary.col(static_cast<Index>(k)) = columns[k];
    return out;
}

std::string_view to_string(Scenario s) { return info(s).name; }

Scenario parse_scenario(std::string_view name) {
    for (const auto& e : scenario_table()) {
        if (e.name == name) return e.id;
    }
    throw Error(ErrorCode::InvalidInput, "unknown scenario '" + std::string(name) + "'");
}

std::vector<Scenario> all_scenarios() {
    std::vector<Scenario> out;
    for (const auto& e : scenario_table()) out.push_back(e.id);
    return out;
}

int SpinScenario::two_j() const { return info(name).two_j; }

Dims SpinScenario::dims() const { return {two_j() + 1, two_j() + 1}; }

std::vector<CoupledLabel> SpinScenario::components() const { return info(name).components; }

PureDecomposition scenario_decomposition(const SpinScenario& s) {
    const auto labels = s.components();
    std::vector<double> w = s.weights;
    if (w.empty()) w.assign(labels.size(), 1.0 / static_cast<double>(labels.size()));
    if (w.size() != labels.size()) {
        throw Error(ErrorCode::WeightError, std::string(to_string(s.name)) + " needs " +
                                                std::to_string(labels.size()) + " weights");
    }
    const CoupledBasis basis = coupled_basis(s.two_j(), s.two_j());
    PureDecomposition dec;
    dec.dims = s.dims();
    for (std::size_t k = 0; k < labels.size(); ++k) {
        dec.components.push_back({w[k], basis.state(labels[k].two_s, labels[k].two_m)});
    }
    return dec;
}

BipartiteState build_scenario(const SpinScenario& s, Tolerances tol) {
    return mix(scenario_decomposition(s), tol);
}

std::vector<ObservablePair> reference_twins(Scenario s) {
    const int two_j = info(s).two_j;
    const Index d = two_j + 1;
    const Matrix one = identity(d);
    const Matrix sz = spin_z(two_j);
    switch (s) {
        case Scenario::Example1Range10_00:
            return {{one, one}, {sz, -sz}};
        case Scenario::Example1Range10_1m1:
            return {{one, one}};
        case Scenario::Example2Ms0:
            return {{one, one}, {sz, -sz}, {sz * sz, sz * sz}};
        case Scenario::Example2Ms1:
            return {{one, one}, {sz - 0.5 * one, -sz + 0.5 * one}, {sz * sz - sz, sz * sz - sz}};
    }
    return {};
}

}  // namespace twinobs
