#pragma once

// Reports behind the CLI subcommands. Every verdict is emitted as
// {check, residual, tolerance, pass}.

#include "twinobs/io.hpp"
#include "twinobs/state.hpp"
#include "twinobs/twin_solver.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace twinobs {

struct Report {
    Json document;
    bool verdict = true;
};

Json check_entry(const std::string& name, double residual, double tolerance);

Report solve_report(const BipartiteState& state, std::optional<Scenario> scenario = std::nullopt);
Report verify_report(const BipartiteState& state, const ObservablePair& pair);
Report analyze_report(const BipartiteState& state, std::uint64_t seed = 0);
Report measure_report(const BipartiteState& state, const ObservablePair& pair);
Report schmidt_report(const BipartiteState& state,
                      const std::optional<PureDecomposition>& decomposition,
                      std::uint64_t seed = 0);

/// Indented key/value rendering; check entries become PASS/FAIL lines.
std::string render_text(const Json& document);

}  // namespace twinobs
