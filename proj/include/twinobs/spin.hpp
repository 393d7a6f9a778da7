#pragma once

// Spin-1/2 and spin-1 operators, coupled |S, M_S> bases and the two-spin example states.

#include "twinobs/linalg.hpp"
#include "twinobs/state.hpp"
#include "twinobs/twin_solver.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace twinobs {

// Spin quantum numbers are passed doubled (two_j = 1 for spin 1/2). Basis order is m = j, ..., -j.
Matrix spin_z(int two_j);
Matrix spin_raise(int two_j);
Matrix spin_lower(int two_j);

struct CoupledLabel {
    int two_s = 0;
    int two_m = 0;
};

struct CoupledBasis {
    int two_j1 = 0;
    int two_j2 = 0;
    Matrix unitary;                     // columns are |S, M> in the product basis |m1, m2>
    std::vector<CoupledLabel> labels;   // S descending, then M descending

    Index column(int two_s, int two_m) const;  // throws InvalidInput
    Vector state(int two_s, int two_m) const { return unitary.col(column(two_s, two_m)); }
};

/// Ladder construction from highest-weight states; throws UnsupportedSpin unless j1, j2 in {1/2, 1}.
CoupledBasis coupled_basis(int two_j1, int two_j2);

/// S^2 and S_z of the coupled pair in the product basis.
Matrix total_spin_squared(int two_j1, int two_j2);
Matrix total_spin_z(int two_j1, int two_j2);

enum class Scenario { Example1Range10_00, Example1Range10_1m1, Example2Ms0, Example2Ms1 };

std::string_view to_string(Scenario s);
/// Throws InvalidInput for an unknown name.
Scenario parse_scenario(std::string_view name);
std::vector<Scenario> all_scenarios();

struct SpinScenario {
    Scenario name = Scenario::Example1Range10_00;
    std::vector<double> weights;  // empty for equal weights

    int two_j() const;
    Dims dims() const;
    std::vector<CoupledLabel> components() const;
};

PureDecomposition scenario_decomposition(const SpinScenario& s);
BipartiteState build_scenario(const SpinScenario& s, Tolerances tol = {});

/// Spanning pairs of the twin space as listed for each example.
std::vector<ObservablePair> reference_twins(Scenario s);

}  // namespace twinobs
