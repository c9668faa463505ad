#ifndef SKEWMATCH_GRAPH_HPP
#define SKEWMATCH_GRAPH_HPP

#include <skewmatch/errors.hpp>

#include <algorithm>
#include <bit>
#include <compare>
#include <cstdint>
#include <deque>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace skewmatch {

/// Vertices are 1-based throughout the public interface.
using Vertex = int;

/// Undirected edge stored with u < v.
struct Edge {
    Vertex u = 0;
    Vertex v = 0;

    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Normalizes the endpoint order.
[[nodiscard]] inline Edge make_edge(Vertex a, Vertex b) noexcept {
    return a < b ? Edge{a, b} : Edge{b, a};
}

/// Undirected simple graph on vertices 1..n. Immutable after construction;
/// equality compares the vertex count and the edge set, so isolated vertices
/// matter.
class Graph {
public:
    /// Endpoints may come in either order; duplicates collapse to one edge.
    Graph(int n, std::vector<Edge> edges) : n_(n) {
        if (n < 1) {
            throw DomainError("graph must have at least one vertex");
        }
        for (Edge& e : edges) {
            if (e.u == e.v) {
                throw DomainError("self-loop at vertex " + std::to_string(e.u));
            }
            e = make_edge(e.u, e.v);
            if (e.u < 1 || e.v > n) {
                throw DomainError("edge {" + std::to_string(e.u) + "," + std::to_string(e.v) +
                                  "} has an endpoint outside 1.." + std::to_string(n));
            }
        }
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
        edges_ = std::move(edges);

        adjacency_.assign(static_cast<std::size_t>(n) + 1, {});
        for (const Edge& e : edges_) {
            adjacency_[e.u].push_back(e.v);
            adjacency_[e.v].push_back(e.u);
        }
        for (auto& list : adjacency_) {
            std::sort(list.begin(), list.end());
        }
    }

    /// Graph on 1..n without edges.
    explicit Graph(int n) : Graph(n, {}) {}

    [[nodiscard]] int n() const noexcept { return n_; }
    [[nodiscard]] std::size_t edge_count() const noexcept { return edges_.size(); }
    [[nodiscard]] const std::vector<Edge>& edges() const noexcept { return edges_; }

    /// Sorted neighbor list of `v`.
    [[nodiscard]] std::span<const Vertex> neighbors(Vertex v) const {
        check_vertex(v);
        return adjacency_[v];
    }

    [[nodiscard]] std::size_t degree(Vertex v) const { return neighbors(v).size(); }

    [[nodiscard]] bool has_edge(Vertex a, Vertex b) const {
        if (a == b || a < 1 || b < 1 || a > n_ || b > n_) {
            return false;
        }
        const auto& list = adjacency_[a];
        return std::binary_search(list.begin(), list.end(), b);
    }

    [[nodiscard]] bool contains_vertex(Vertex v) const noexcept { return v >= 1 && v <= n_; }

    void check_vertex(Vertex v) const {
        if (!contains_vertex(v)) {
            throw DomainError("vertex " + std::to_string(v) + " outside 1.." + std::to_string(n_));
        }
    }

    friend bool operator==(const Graph& a, const Graph& b) {
        return a.n_ == b.n_ && a.edges_ == b.edges_;
    }

private:
    int n_;
    std::vector<Edge> edges_;
    std::vector<std::vector<Vertex>> adjacency_;
};

/// Set of vertex-disjoint edges of a particular graph. Construction through
/// the public constructor validates against the graph.
class Matching {
public:
    Matching() = default;

    Matching(const Graph& g, std::vector<Edge> edges) {
        for (Edge& e : edges) {
            e = make_edge(e.u, e.v);
            if (!g.has_edge(e.u, e.v)) {
                throw DomainError("matching edge {" + std::to_string(e.u) + "," +
                                  std::to_string(e.v) + "} is not an edge of the graph");
            }
        }
        std::sort(edges.begin(), edges.end());
        std::vector<char> covered(static_cast<std::size_t>(g.n()) + 1, 0);
        for (const Edge& e : edges) {
            if (covered[e.u] || covered[e.v]) {
                throw DomainError("matching edges share a vertex");
            }
            covered[e.u] = covered[e.v] = 1;
        }
        edges_ = std::move(edges);
    }

    [[nodiscard]] std::size_t size() const noexcept { return edges_.size(); }
    [[nodiscard]] bool empty() const noexcept { return edges_.empty(); }

    /// Sorted by least endpoint.
    [[nodiscard]] const std::vector<Edge>& edges() const noexcept { return edges_; }

    [[nodiscard]] bool contains(Edge e) const {
        e = make_edge(e.u, e.v);
        return std::binary_search(edges_.begin(), edges_.end(), e);
    }

    friend bool operator==(const Matching&, const Matching&) = default;

private:
    std::vector<Edge> edges_;
};

/// True when `edges` is a valid matching of `g`.
[[nodiscard]] inline bool is_matching_of(const Graph& g, std::span<const Edge> edges) {
    std::vector<char> covered(static_cast<std::size_t>(g.n()) + 1, 0);
    for (const Edge& e : edges) {
        if (!g.has_edge(e.u, e.v) || covered[e.u] || covered[e.v]) {
            return false;
        }
        covered[e.u] = covered[e.v] = 1;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Edge-list text format
// ---------------------------------------------------------------------------

/// Parses "u v" lines with '#' comments and an optional leading "n <count>"
/// header. Without a header n is the largest endpoint.
[[nodiscard]] inline Graph parse_graph(std::string_view text) {
    std::vector<Edge> edges;
    std::optional<long long> header_n;
    long long max_endpoint = 0;
    bool seen_content = false;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t end = std::min(text.find('\n', pos), text.size());
        std::string line(text.substr(pos, end - pos));
        pos = end + 1;
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        std::istringstream in(line);
        std::string first;
        if (!(in >> first)) {
            continue;
        }

        if (first == "n") {
            long long count = 0;
            std::string extra;
            if (seen_content) {
                throw ParseError("header \"n <count>\" must precede the edge list", line_no);
            }
            if (!(in >> count) || (in >> extra) || count < 1) {
                throw ParseError("malformed header, expected \"n <count>\" with count >= 1", line_no);
            }
            header_n = count;
            seen_content = true;
            continue;
        }
        seen_content = true;

        long long u = 0;
        long long v = 0;
        std::string extra;
        std::istringstream pair_in(line);
        if (!(pair_in >> u >> v) || (pair_in >> extra)) {
            throw ParseError("expected \"u v\" with two integers", line_no);
        }
        if (u < 1 || v < 1 || u > INT32_MAX || v > INT32_MAX) {
            throw ParseError("vertex ids must be positive integers", line_no);
        }
        if (u == v) {
            throw ParseError("self-loop at vertex " + std::to_string(u), line_no);
        }
        max_endpoint = std::max({max_endpoint, u, v});
        edges.push_back(make_edge(static_cast<Vertex>(u), static_cast<Vertex>(v)));
    }

    long long n = max_endpoint;
    if (header_n) {
        if (*header_n < max_endpoint) {
            throw ParseError("header count " + std::to_string(*header_n) +
                                 " is below the largest endpoint " + std::to_string(max_endpoint),
                             0);
        }
        n = *header_n;
    }
    if (n < 1) {
        throw ParseError("empty graph: no edges and no \"n <count>\" header", 0);
    }
    if (n > INT32_MAX) {
        throw ParseError("vertex count too large", 0);
    }
    return Graph(static_cast<int>(n), std::move(edges));
}

/// Writes the edge-list text format that parse_graph reads.
[[nodiscard]] inline std::string format_graph(const Graph& g) {
    std::string out = "n " + std::to_string(g.n()) + "\n";
    for (const Edge& e : g.edges()) {
        out += std::to_string(e.u) + " " + std::to_string(e.v) + "\n";
    }
    return out;
}

// ---------------------------------------------------------------------------
// Components
// ---------------------------------------------------------------------------

namespace detail {

/// Components of g restricted to vertices with removed[v] == 0.
inline std::vector<std::vector<Vertex>> components_without(const Graph& g,
                                                           const std::vector<char>& removed) {
    std::vector<std::vector<Vertex>> result;
    std::vector<char> seen(static_cast<std::size_t>(g.n()) + 1, 0);
    std::vector<Vertex> stack;
    for (Vertex start = 1; start <= g.n(); ++start) {
        if (seen[start] || removed[start]) {
            continue;
        }
        std::vector<Vertex> comp;
        seen[start] = 1;
        stack.push_back(start);
        while (!stack.empty()) {
            const Vertex v = stack.back();
            stack.pop_back();
            comp.push_back(v);
            for (Vertex w : g.neighbors(v)) {
                if (!seen[w] && !removed[w]) {
                    seen[w] = 1;
                    stack.push_back(w);
                }
            }
        }
        std::sort(comp.begin(), comp.end());
        result.push_back(std::move(comp));
    }
    return result;
}

} // namespace detail

/// Partition of 1..n into connected sets, each sorted, ordered by least vertex.
[[nodiscard]] inline std::vector<std::vector<Vertex>> connected_components(const Graph& g) {
    return detail::components_without(g, std::vector<char>(static_cast<std::size_t>(g.n()) + 1, 0));
}

[[nodiscard]] inline bool is_connected(const Graph& g) {
    return connected_components(g).size() == 1;
}

[[nodiscard]] inline bool is_tree(const Graph& g) {
    return g.edge_count() + 1 == static_cast<std::size_t>(g.n()) && is_connected(g);
}

/// Number of odd-cardinality components of G - S.
[[nodiscard]] inline std::size_t odd_components_after_deletion(const Graph& g,
                                                               std::span<const Vertex> deleted) {
    std::vector<char> removed(static_cast<std::size_t>(g.n()) + 1, 0);
    for (Vertex v : deleted) {
        g.check_vertex(v);
        removed[v] = 1;
    }
    const auto comps = detail::components_without(g, removed);
    return static_cast<std::size_t>(std::count_if(
        comps.begin(), comps.end(), [](const auto& c) { return c.size() % 2 == 1; }));
}

// ---------------------------------------------------------------------------
// Tutte certificate
// ---------------------------------------------------------------------------

struct TutteResult {
    bool has_perfect_matching = false;
    /// Set S with more than |S| odd components in G - S; present iff false.
    std::optional<std::vector<Vertex>> witness;
};

/// Largest order the exhaustive Tutte scan accepts.
inline constexpr int kTutteMaxVertices = 20;

/// Scans every S in increasing bitmask order and reports the first violator.
[[nodiscard]] inline TutteResult tutte_has_perfect_matching(const Graph& g) {
    if (g.n() > kTutteMaxVertices) {
        throw DomainError("Tutte scan is exponential; limited to n <= " +
                          std::to_string(kTutteMaxVertices));
    }
    const int n = g.n();
    std::vector<Vertex> subset;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        subset.clear();
        for (int i = 0; i < n; ++i) {
            if (mask & (1u << i)) {
                subset.push_back(i + 1);
            }
        }
        if (odd_components_after_deletion(g, subset) > subset.size()) {
            return {false, subset};
        }
    }
    return {true, std::nullopt};
}

// ---------------------------------------------------------------------------
// Maximum matching
// ---------------------------------------------------------------------------

namespace detail {

/// Edmonds' augmenting-path search with blossom contraction, O(n^3).
/// Roots are tried in ascending order and neighbors scanned ascending, so the
/// result is a fixed function of the graph.
class BlossomMatcher {
public:
    explicit BlossomMatcher(const Graph& g)
        : g_(g), n_(g.n()), mate_(n_, -1), parent_(n_), base_(n_), used_(n_), blossom_(n_) {
        adj_.resize(n_);
        for (Vertex v = 1; v <= n_; ++v) {
            for (Vertex w : g.neighbors(v)) {
                adj_[v - 1].push_back(w - 1);
            }
        }
    }

    std::vector<int> run() {
        for (int root = 0; root < n_; ++root) {
            if (mate_[root] != -1) {
                continue;
            }
            int v = find_augmenting_path(root);
            while (v != -1) {
                const int pv = parent_[v];
                const int next = mate_[pv];
                mate_[v] = pv;
                mate_[pv] = v;
                v = next;
            }
        }
        return mate_;
    }

private:
    int lca(int a, int b) {
        std::vector<char> on_path(n_, 0);
        for (;;) {
            a = base_[a];
            on_path[a] = 1;
            if (mate_[a] == -1) {
                break;
            }
            a = parent_[mate_[a]];
        }
        for (;;) {
            b = base_[b];
            if (on_path[b]) {
                return b;
            }
            b = parent_[mate_[b]];
        }
    }

    void mark_path(int v, int b, int child) {
        while (base_[v] != b) {
            blossom_[base_[v]] = blossom_[base_[mate_[v]]] = 1;
            parent_[v] = child;
            child = mate_[v];
            v = parent_[mate_[v]];
        }
    }

    int find_augmenting_path(int root) {
        std::fill(used_.begin(), used_.end(), 0);
        std::fill(parent_.begin(), parent_.end(), -1);
        std::iota(base_.begin(), base_.end(), 0);
        used_[root] = 1;
        std::deque<int> queue{root};
        while (!queue.empty()) {
            const int v = queue.front();
            queue.pop_front();
            for (int to : adj_[v]) {
                if (base_[v] == base_[to] || mate_[v] == to) {
                    continue;
                }
                if (to == root || (mate_[to] != -1 && parent_[mate_[to]] != -1)) {
                    const int cur = lca(v, to);
                    std::fill(blossom_.begin(), blossom_.end(), 0);
                    mark_path(v, cur, to);
                    mark_path(to, cur, v);
                    for (int i = 0; i < n_; ++i) {
                        if (blossom_[base_[i]]) {
                            base_[i] = cur;
                            if (!used_[i]) {
                                used_[i] = 1;
                                queue.push_back(i);
                            }
                        }
                    }
                } else if (parent_[to] == -1) {
                    parent_[to] = v;
                    if (mate_[to] == -1) {
                        return to;
                    }
                    used_[mate_[to]] = 1;
                    queue.push_back(mate_[to]);
                }
            }
        }
        return -1;
    }

    const Graph& g_;
    int n_;
    std::vector<std::vector<int>> adj_;
    std::vector<int> mate_;
    std::vector<int> parent_;
    std::vector<int> base_;
    std::vector<char> used_;
    std::vector<char> blossom_;
};

} // namespace detail

/// Canonical maximum-cardinality matching of a general graph.
[[nodiscard]] inline Matching maximum_matching(const Graph& g) {
    const auto mate = detail::BlossomMatcher(g).run();
    std::vector<Edge> edges;
    for (int v = 0; v < g.n(); ++v) {
        if (mate[v] > v) {
            edges.push_back({v + 1, mate[v] + 1});
        }
    }
    return Matching(g, std::move(edges));
}

/// Exact matching number by exhaustive search with a counting bound. Meant as
/// an oracle for small graphs (n <= 64 hard limit, practical up to ~14 dense).
[[nodiscard]] inline std::size_t brute_force_matching_number(const Graph& g) {
    const int n = g.n();
    if (n > 64) {
        throw DomainError("brute-force matching limited to n <= 64");
    }
    std::vector<std::uint64_t> adj(n, 0);
    for (const Edge& e : g.edges()) {
        adj[e.u - 1] |= std::uint64_t{1} << (e.v - 1);
        adj[e.v - 1] |= std::uint64_t{1} << (e.u - 1);
    }
    const std::size_t upper = static_cast<std::size_t>(n) / 2;
    std::size_t best = 0;

    // `decided` holds vertices already matched or skipped; scan the lowest
    // undecided vertex and either leave it exposed or match it upward.
    std::function<void(std::uint64_t, int, std::size_t)> search =
        [&](std::uint64_t decided, int from, std::size_t count) {
            if (best == upper) {
                return;
            }
            int v = from;
            while (v < n && (decided >> v & 1)) {
                ++v;
            }
            const int undecided = n - std::popcount(decided);
            if (count + static_cast<std::size_t>(undecided) / 2 <= best) {
                return;
            }
            if (v >= n) {
                best = std::max(best, count);
                return;
            }
            const std::uint64_t vbit = std::uint64_t{1} << v;
            std::uint64_t options = adj[v] & ~decided;
            while (options) {
                const int w = std::countr_zero(options);
                options &= options - 1;
                search(decided | vbit | (std::uint64_t{1} << w), v + 1, count + 1);
            }
            search(decided | vbit, v + 1, count);
        };
    search(0, 0, 0);
    return best;
}

// ---------------------------------------------------------------------------
// Spanning tree through a matching
// ---------------------------------------------------------------------------

namespace detail {

/// Edges of the first cycle met by an ascending-order DFS, or empty if the
/// graph is a forest.
inline std::vector<Edge> first_cycle(int n, const std::vector<std::vector<Vertex>>& adj) {
    std::vector<Vertex> parent(static_cast<std::size_t>(n) + 1, 0);
    std::vector<int> state(static_cast<std::size_t>(n) + 1, 0);  // 0 new, 1 open, 2 done
    std::vector<std::pair<Vertex, std::size_t>> stack;
    for (Vertex root = 1; root <= n; ++root) {
        if (state[root]) {
            continue;
        }
        state[root] = 1;
        stack.push_back({root, 0});
        while (!stack.empty()) {
            auto& [v, next] = stack.back();
            if (next == adj[v].size()) {
                state[v] = 2;
                stack.pop_back();
                continue;
            }
            const Vertex w = adj[v][next++];
            if (w == parent[v]) {
                continue;
            }
            if (state[w] == 1) {
                // Back edge v-w closes the cycle w -> ... -> v -> w.
                std::vector<Edge> cycle{make_edge(v, w)};
                for (Vertex x = v; x != w; x = parent[x]) {
                    cycle.push_back(make_edge(x, parent[x]));
                }
                return cycle;
            }
            if (state[w] == 0) {
                parent[w] = v;
                state[w] = 1;
                stack.push_back({w, 0});
            }
        }
    }
    return {};
}

} // namespace detail

/// Breaks cycles one at a time, each time deleting the smallest edge of the
/// cycle that is not in the matching, until a spanning tree remains.
[[nodiscard]] inline Graph spanning_tree_containing(const Graph& g, const Matching& m) {
    if (!is_connected(g)) {
        throw DomainError("spanning tree requires a connected graph");
    }
    if (!is_matching_of(g, m.edges())) {
        throw DomainError("given edges are not a matching of the graph");
    }
    std::vector<std::vector<Vertex>> adj(static_cast<std::size_t>(g.n()) + 1);
    for (Vertex v = 1; v <= g.n(); ++v) {
        adj[v].assign(g.neighbors(v).begin(), g.neighbors(v).end());
    }
    std::vector<Edge> kept = g.edges();
    while (kept.size() + 1 > static_cast<std::size_t>(g.n())) {
        auto cycle = detail::first_cycle(g.n(), adj);
        std::sort(cycle.begin(), cycle.end());
        const auto victim = std::find_if(cycle.begin(), cycle.end(),
                                         [&](const Edge& e) { return !m.contains(e); });
        // A cycle has at least three edges; a matching covers at most half.
        const Edge e = *victim;
        std::erase(adj[e.u], e.v);
        std::erase(adj[e.v], e.u);
        std::erase(kept, e);
    }
    return Graph(g.n(), std::move(kept));
}

// ---------------------------------------------------------------------------
// Relabeling
// ---------------------------------------------------------------------------

/// Bijection on 1..n that puts the j-th matching edge at {2j-1, 2j}.
struct VertexRelabeling {
    /// perm[old] = new; index 0 unused.
    std::vector<Vertex> perm;
    /// inverse[new] = old; index 0 unused.
    std::vector<Vertex> inverse;
    /// Matching in relabeled coordinates: {2j-1, 2j} for j = 1..k.
    std::vector<Edge> image_matching;

    [[nodiscard]] int n() const noexcept { return static_cast<int>(perm.size()) - 1; }
    [[nodiscard]] Vertex to_new(Vertex old) const { return perm.at(old); }
    [[nodiscard]] Vertex to_old(Vertex fresh) const { return inverse.at(fresh); }

    [[nodiscard]] Graph apply(const Graph& g) const {
        std::vector<Edge> edges;
        edges.reserve(g.edge_count());
        for (const Edge& e : g.edges()) {
            edges.push_back(make_edge(perm[e.u], perm[e.v]));
        }
        return Graph(g.n(), std::move(edges));
    }

    [[nodiscard]] Graph apply_inverse(const Graph& g) const {
        std::vector<Edge> edges;
        edges.reserve(g.edge_count());
        for (const Edge& e : g.edges()) {
            edges.push_back(make_edge(inverse[e.u], inverse[e.v]));
        }
        return Graph(g.n(), std::move(edges));
    }

    [[nodiscard]] bool is_identity() const {
        for (std::size_t v = 1; v < perm.size(); ++v) {
            if (perm[v] != static_cast<Vertex>(v)) {
                return false;
            }
        }
        return true;
    }
};

/// Matched vertices go first, edge by edge in order of least endpoint (smaller
/// endpoint first); unmatched vertices follow in ascending order.
[[nodiscard]] inline VertexRelabeling relabel_for_matching(const Graph& g, const Matching& m) {
    if (!is_matching_of(g, m.edges())) {
        throw DomainError("given edges are not a matching of the graph");
    }
    const auto size = static_cast<std::size_t>(g.n()) + 1;
    VertexRelabeling r{std::vector<Vertex>(size, 0), std::vector<Vertex>(size, 0), {}};
    Vertex next = 1;
    for (const Edge& e : m.edges()) {
        r.perm[e.u] = next;
        r.perm[e.v] = next + 1;
        r.image_matching.push_back({next, next + 1});
        next += 2;
    }
    for (Vertex v = 1; v <= g.n(); ++v) {
        if (r.perm[v] == 0) {
            r.perm[v] = next++;
        }
    }
    for (Vertex v = 1; v <= g.n(); ++v) {
        r.inverse[r.perm[v]] = v;
    }
    return r;
}

} // namespace skewmatch

#endif // SKEWMATCH_GRAPH_HPP
