#ifndef SKEWMATCH_JSON_IO_HPP
#define SKEWMATCH_JSON_IO_HPP

#include <skewmatch/graph.hpp>
#include <skewmatch/iep.hpp>
#include <skewmatch/neb.hpp>
#include <skewmatch/skew.hpp>

#include <json.hpp>

#include <span>
#include <string>
#include <vector>

namespace skewmatch::json {

/// Keys keep insertion order so the output layout is stable.
using Json = nlohmann::ordered_json;

[[nodiscard]] inline Json edges_to_json(std::span<const Edge> edges) {
    Json out = Json::array();
    for (const Edge& e : edges) {
        out.push_back({e.u, e.v});
    }
    return out;
}

[[nodiscard]] inline Json components_to_json(const std::vector<std::vector<Vertex>>& comps) {
    Json out = Json::array();
    for (const auto& c : comps) {
        out.push_back(c);
    }
    return out;
}

[[nodiscard]] inline Json matching_to_json(const Matching& m) {
    return edges_to_json(m.edges());
}

[[nodiscard]] inline Json subtree_to_json(const RootedSubtreeRef& s) {
    return Json{{"path", s.deleted_path}, {"root", s.root}, {"vertices", s.vertices}};
}

/// {n, upper: [[i, j, a_ij], ...]} over the nonzero entries with i < j.
[[nodiscard]] inline Json matrix_to_json(const SkewMatrix& a) {
    Json upper = Json::array();
    for (int i = 1; i <= a.n(); ++i) {
        for (int j = i + 1; j <= a.n(); ++j) {
            if (a(i, j) != 0.0) {
                upper.push_back({i, j, a(i, j)});
            }
        }
    }
    return Json{{"n", a.n()}, {"upper", std::move(upper)}};
}

/// Inverse of matrix_to_json. Lower-triangle entries are reconstructed by
/// negation; a repeated position is an error.
[[nodiscard]] inline SkewMatrix matrix_from_json(const Json& j) {
    try {
        const int n = j.at("n").get<int>();
        SkewMatrix a(n);
        std::vector<Edge> seen;
        for (const auto& entry : j.at("upper")) {
            if (!entry.is_array() || entry.size() != 3) {
                throw DomainError("matrix entry must be [i, j, value]");
            }
            const int r = entry[0].get<int>();
            const int c = entry[1].get<int>();
            if (r >= c) {
                throw DomainError("matrix entries must satisfy i < j");
            }
            seen.push_back({r, c});
            a.set(r, c, entry[2].get<double>());
        }
        std::sort(seen.begin(), seen.end());
        if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
            throw DomainError("matrix entry listed twice");
        }
        return a;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed matrix JSON: ") + e.what(), 0);
    }
}

[[nodiscard]] inline Json result_to_json(const SolverResult& r) {
    return Json{{"matrix", matrix_to_json(r.matrix)},
                {"residual", r.residual},
                {"epsilon_used", r.epsilon_used},
                {"iterations", r.iterations},
                {"trace", r.trace},
                {"restarts", r.restarts},
                {"matching", matching_to_json(r.matching)}};
}

[[nodiscard]] inline Json report_to_json(const VerificationReport& r) {
    return Json{{"passed", r.passed()},
                {"checks",
                 {{"graph_exact", r.graph_exact},
                  {"skew_symmetric", r.skew_symmetric},
                  {"spectrum_match", r.spectrum_match},
                  {"rank_bound", r.rank_bound}}},
                {"residual", r.residual},
                {"nonzero_count", r.nonzero_count},
                {"expected_nonzero", r.expected_nonzero},
                {"max_nonzero", r.max_nonzero}};
}

} // namespace skewmatch::json

#endif // SKEWMATCH_JSON_IO_HPP
