#include "twinobs/cli.hpp"

#include "twinobs/error.hpp"
#include "twinobs/io.hpp"
#include "twinobs/report.hpp"
#include "twinobs/spin.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <istream>
#include <optional>
#include <ostream>

namespace twinobs {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitInput = 2;

struct GlobalFlags {
    std::optional<double> rank_tol;
    std::optional<double> residual_tol;
    std::optional<double> cluster_tol;
    std::uint64_t seed = 0;
    std::string format = "json";
};

void add_flags(CLI::App* app, GlobalFlags& flags) {
    app->add_option("--rank-tol", flags.rank_tol, "relative eigenvalue cutoff for ranges")
        ->check(CLI::NonNegativeNumber);
    app->add_option("--residual-tol", flags.residual_tol, "tolerance for residual checks")
        ->check(CLI::NonNegativeNumber);
    app->add_option("--cluster-tol", flags.cluster_tol, "eigenvalue clustering gap")
        ->check(CLI::NonNegativeNumber);
    app->add_option("--seed", flags.seed, "seed for the complete-twin search");
    app->add_option("--format", flags.format, "output format")
        ->check(CLI::IsMember({"json", "text"}));
}

class Inputs {
public:
    explicit Inputs(std::istream& in) : in_(in) {}

    Json load(const std::string& path) {
        if (path.empty() || path == "-") {
            if (stdin_used_) throw Error(ErrorCode::InvalidInput, "standard input can be read only once");
            stdin_used_ = true;
            return read_json(in_, "<stdin>");
        }
        return read_json_file(path);
    }

    static std::string locus(const std::string& path) {
        return path.empty() || path == "-" ? "<stdin>" : path;
    }

private:
    std::istream& in_;
    bool stdin_used_ = false;
};

struct LoadedState {
    BipartiteState state;
    std::optional<Scenario> scenario;
};

LoadedState load_state(Inputs& inputs, const std::string& path, const GlobalFlags& flags) {
    const std::string locus = Inputs::locus(path);
    const StateDocument doc = parse_state_document(inputs.load(path), locus);
    ToleranceOverride cli;
    cli.rank_tol = flags.rank_tol;
    cli.residual_tol = flags.residual_tol;
    cli.cluster_tol = flags.cluster_tol;
    const Tolerances tol = cli.apply(doc.tolerances.apply(Tolerances{}));
    try {
        return {BipartiteState::from_matrix(doc.rho, doc.dims, tol), doc.scenario};
    } catch (const Error& e) {
        throw Error(e.code(), locus + ": rho: " + e.what());
    }
}

ObservablePair load_pair(Inputs& inputs, const std::string& path, Dims dims) {
    const std::string locus = Inputs::locus(path);
    ObservablePair pair = parse_pair(inputs.load(path), locus);
    if (!(pair.dims() == dims)) {
        throw Error(ErrorCode::DimensionMismatch, locus + ": pair dimensions do not match the state");
    }
    return pair;
}

void emit(const Report& report, const GlobalFlags& flags, std::ostream& out) {
    if (flags.format == "text") {
        out << render_text(report.document);
    } else {
        out << report.document.dump(2) << "\n";
    }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err) {
    CLI::App app{"Twin observables of bipartite quantum states", "twinobs"};
    app.require_subcommand(1);
    GlobalFlags flags;

    std::string state_path;
    std::string pair_path;
    std::string decomposition_path;
    std::string scenario_name;
    std::vector<double> weights;

    CLI::App* solve = app.add_subcommand("solve", "solve for the twin space of a state");
    solve->add_option("state", state_path, "state document (default: stdin)");
    CLI::App* verify = app.add_subcommand("verify", "check a candidate twin pair");
    verify->add_option("state", state_path, "state document ('-' for stdin)")->required();
    verify->add_option("pair", pair_path, "pair document")->required();
    CLI::App* analyze = app.add_subcommand("analyze", "geometry, spectral analysis, complete twins");
    analyze->add_option("state", state_path, "state document (default: stdin)");
    CLI::App* measure = app.add_subcommand("measure", "distant-measurement report for a pair");
    measure->add_option("state", state_path, "state document ('-' for stdin)")->required();
    measure->add_option("pair", pair_path, "pair document")->required();
    CLI::App* schmidt = app.add_subcommand("schmidt", "canonical forms from complete twins");
    schmidt->add_option("state", state_path, "state document (default: stdin)");
    schmidt->add_option("--decomposition", decomposition_path, "pure-state decomposition document");
    CLI::App* example = app.add_subcommand("example", "write the state document of a spin example");
    std::vector<std::string> names;
    for (Scenario s : all_scenarios()) names.emplace_back(to_string(s));
    example->add_option("scenario", scenario_name, "example name")
        ->required()
        ->check(CLI::IsMember(names));
    example->add_option("--weights", weights, "mixture weights (default: equal)");
    for (CLI::App* sub : {solve, verify, analyze, measure, schmidt, example}) add_flags(sub, flags);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        Inputs inputs(in);
        if (example->parsed()) {
            ToleranceOverride cli;
            cli.rank_tol = flags.rank_tol;
            cli.residual_tol = flags.residual_tol;
            cli.cluster_tol = flags.cluster_tol;
            const SpinScenario s{parse_scenario(scenario_name), weights};
            StateDocument doc = make_state_document(build_scenario(s), s.name);
            doc.tolerances = cli;
            out << to_json(doc).dump(2) << "\n";
            return kExitOk;
        }
        const LoadedState loaded = load_state(inputs, state_path, flags);
        const BipartiteState& state = loaded.state;
        Report report;
        if (solve->parsed()) {
            report = solve_report(state, loaded.scenario);
        } else if (verify->parsed()) {
            report = verify_report(state, load_pair(inputs, pair_path, state.dims()));
        } else if (analyze->parsed()) {
            report = analyze_report(state, flags.seed);
        } else if (measure->parsed()) {
            report = measure_report(state, load_pair(inputs, pair_path, state.dims()));
        } else {
            std::optional<PureDecomposition> dec;
            if (!decomposition_path.empty()) {
                const std::string locus = Inputs::locus(decomposition_path);
                dec = parse_decomposition(inputs.load(decomposition_path), locus);
                if (!(dec->dims == state.dims())) {
                    throw Error(ErrorCode::DimensionMismatch,
                                locus + ": dims do not match the state");
                }
            }
            report = schmidt_report(state, dec, flags.seed);
        }
        emit(report, flags, out);
        return report.verdict ? kExitOk : kExitFailed;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    }
}

}  // namespace twinobs
