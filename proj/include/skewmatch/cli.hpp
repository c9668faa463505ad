#ifndef SKEWMATCH_CLI_HPP
#define SKEWMATCH_CLI_HPP

#include <skewmatch/errors.hpp>
#include <skewmatch/graph.hpp>
#include <skewmatch/iep.hpp>
#include <skewmatch/json_io.hpp>
#include <skewmatch/neb.hpp>
#include <skewmatch/skew.hpp>

#include <CLI11.hpp>

#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

namespace skewmatch::cli {

/// Seed used when neither --seed nor this variable is given is 0.
inline constexpr const char* kSeedEnv = "SKEWMATCH_SEED";

namespace detail {

inline std::string read_input(const std::string& path, std::istream& in) {
    if (path.empty() || path == "-") {
        return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    }
    std::ifstream file(path);
    if (!file) {
        throw IoError("cannot open " + path);
    }
    std::ostringstream buffer;
    buffer << file.rdbuf();
    return buffer.str();
}

inline json::Json parse_json(const std::string& text) {
    try {
        return json::Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what(), 0);
    }
}

/// "2,1.5,0.25" -> {2, 1.5, 0.25}.
inline std::vector<double> parse_targets(const std::string& text) {
    std::vector<double> values;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t end = std::min(text.find(',', pos), text.size());
        const std::string item = text.substr(pos, end - pos);
        double value = 0.0;
        const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
        if (item.empty() || ec != std::errc() || ptr != item.data() + item.size()) {
            throw ParseError("bad target value \"" + item + "\"", 0);
        }
        values.push_back(value);
        pos = end + 1;
    }
    return values;
}

struct Options {
    std::string input;
    std::string matrix_path;
    std::string targets;
    Vertex root = 1;
    std::size_t samples = 20;
    std::uint64_t seed = 0;
    double tol = 1e-9;
    SolverConfig solver;
};

inline json::Json error_payload(const std::string& message) {
    return json::Json{{"error", message}};
}

} // namespace detail

/// Runs one command. JSON goes to `out`, diagnostics to `err`. Exit codes:
/// 0 success, 1 domain/validation error, 2 convergence failure, 3 usage,
/// parse or I/O error.
inline int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
               std::ostream& err) {
    CLI::App app{"Matching numbers, NEB trees and skew-symmetric spectral realizations", "skewmatch"};
    app.require_subcommand(1, 1);
    detail::Options opt;

    auto add_input = [&](CLI::App* sub, const std::string& what) {
        sub->add_option("input", opt.input, what + " (file path, '-' or omitted for stdin)");
    };
    auto add_seed = [&](CLI::App* sub) {
        sub->add_option("--seed", opt.seed, "master RNG seed")->envname(kSeedEnv);
    };

    auto* match = app.add_subcommand("match", "maximum matching of a graph");
    add_input(match, "edge list");
    auto* tutte = app.add_subcommand("tutte", "exhaustive Tutte perfect-matching check (n <= 20)");
    add_input(tutte, "edge list");
    auto* neb = app.add_subcommand("neb", "NEB roots of a tree");
    add_input(neb, "edge list of a tree");
    auto* min_non_neb = app.add_subcommand("min-non-neb", "minimal non-NEB subtree for a start vertex");
    add_input(min_non_neb, "edge list of a tree");
    min_non_neb->add_option("--root", opt.root, "start vertex v1")->capture_default_str();
    auto* maxrank = app.add_subcommand("maxrank", "certified and sampled maximum skew rank");
    add_input(maxrank, "edge list");
    maxrank->add_option("--samples", opt.samples, "random evaluations")->capture_default_str();
    add_seed(maxrank);
    auto* eigen = app.add_subcommand("eigen", "spectrum of a skew-symmetric matrix");
    add_input(eigen, "matrix JSON");
    auto* solve_cmd = app.add_subcommand("solve", "realize prescribed positive parts on a graph");
    add_input(solve_cmd, "edge list");
    solve_cmd->add_option("--targets", opt.targets, "comma-separated mu_1 > ... > mu_k > 0")->required();
    solve_cmd->add_option("--epsilon0", opt.solver.epsilon0, "initial perturbation size");
    solve_cmd->add_option("--epsilon-min", opt.solver.epsilon_min, "smallest perturbation size");
    solve_cmd->add_option("--tol", opt.solver.newton_tol, "Newton residual tolerance")->capture_default_str();
    solve_cmd->add_option("--max-iter", opt.solver.newton_max_iter, "Newton iterations per attempt")
        ->capture_default_str();
    add_seed(solve_cmd);
    auto* verify = app.add_subcommand("verify", "check a matrix against a graph and targets");
    add_input(verify, "edge list");
    verify->add_option("--matrix", opt.matrix_path, "matrix JSON or solve output")->required();
    verify->add_option("--targets", opt.targets, "comma-separated mu_1 > ... > mu_k > 0")->required();
    verify->add_option("--tol", opt.tol, "spectrum tolerance")->capture_default_str();
    auto* tree = app.add_subcommand("spanning-tree", "spanning tree containing the canonical maximum matching");
    add_input(tree, "edge list of a connected graph");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n" << app.help();
        out << detail::error_payload(std::string("usage: ") + e.what()).dump() << "\n";
        return 3;
    }

    try {
        json::Json result;
        auto graph = [&] { return parse_graph(detail::read_input(opt.input, in)); };

        if (match->parsed()) {
            const Matching m = maximum_matching(graph());
            result = {{"matching_number", m.size()}, {"matching", json::matching_to_json(m)}};
        } else if (tutte->parsed()) {
            const Graph g = graph();
            const TutteResult t = tutte_has_perfect_matching(g);
            result = {{"has_perfect_matching", t.has_perfect_matching},
                      {"witness", t.witness ? json::Json(*t.witness) : json::Json(nullptr)},
                      {"components", json::components_to_json(connected_components(g))}};
        } else if (neb->parsed()) {
            const NebReport r = neb_report(graph());
            result = {{"neb_roots", r.neb_roots},
                      {"is_neb_somewhere", r.is_neb_somewhere},
                      {"witness", r.witness ? json::Json(*r.witness) : json::Json(nullptr)}};
        } else if (min_non_neb->parsed()) {
            result = json::subtree_to_json(minimal_non_neb_subtree(graph(), opt.root));
        } else if (maxrank->parsed()) {
            const MaxRankResult r = max_skew_rank(graph(), opt.samples, opt.seed);
            result = {{"certified", r.certified}, {"sampled", r.sampled}};
        } else if (eigen->parsed()) {
            const SkewMatrix a = json::matrix_from_json(detail::parse_json(detail::read_input(opt.input, in)));
            const SkewSpectrum s = skew_spectrum(a);
            result = {{"positive_parts", s.positive_parts},
                      {"zero_count", s.zero_count_numeric},
                      {"rank", rank_numeric(a)}};
        } else if (solve_cmd->parsed()) {
            const Graph g = graph();
            opt.solver.seed = opt.seed;
            const SpectralTarget target(detail::parse_targets(opt.targets), g.n());
            const SolverResult r = solve(g, target, opt.solver);
            err << "canonical matching: " << json::matching_to_json(r.matching).dump() << "\n";
            result = json::result_to_json(r);
        } else if (verify->parsed()) {
            const Graph g = graph();
            const json::Json doc = detail::parse_json(detail::read_input(opt.matrix_path, in));
            const SkewMatrix a = json::matrix_from_json(doc.contains("matrix") ? doc.at("matrix") : doc);
            const SpectralTarget target(detail::parse_targets(opt.targets), g.n());
            result = json::report_to_json(verify_solution(g, target, a, opt.tol));
        } else if (tree->parsed()) {
            const Graph g = graph();
            const Matching m = maximum_matching(g);
            const Graph t = spanning_tree_containing(g, m);
            result = {{"edges", json::edges_to_json(t.edges())}, {"matching", json::matching_to_json(m)}};
        }
        out << result.dump() << "\n";
        return 0;
    } catch (const ConvergenceError& e) {
        err << "error: " << e.what() << "\n";
        out << json::Json{{"error", e.what()}, {"trace", e.trace()}}.dump() << "\n";
        return e.exit_code();
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        out << detail::error_payload(e.what()).dump() << "\n";
        return e.exit_code();
    }
}

inline int run(int argc, const char* const* argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cin, std::cout, std::cerr);
}

} // namespace skewmatch::cli

#endif // SKEWMATCH_CLI_HPP
