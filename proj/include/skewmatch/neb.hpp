#ifndef SKEWMATCH_NEB_HPP
#define SKEWMATCH_NEB_HPP

#include <skewmatch/graph.hpp>

#include <algorithm>
#include <optional>
#include <span>
#include <vector>

namespace skewmatch {

/// The subtree T_{v_k}(v_1, ..., v_{k-1}): delete v_1, keep the component of
/// v_2, delete v_2 there, keep the component of v_3, and so on up to v_k.
struct RootedSubtreeRef {
    Graph tree;
    std::vector<Vertex> deleted_path;
    Vertex root = 0;
    /// Original labels of the subtree's vertices, ascending.
    std::vector<Vertex> vertices;

    /// Position of original vertex `v` in `vertices`, 1-based.
    [[nodiscard]] Vertex local(Vertex v) const {
        const auto it = std::lower_bound(vertices.begin(), vertices.end(), v);
        if (it == vertices.end() || *it != v) {
            throw DomainError("vertex " + std::to_string(v) + " is not in the subtree");
        }
        return static_cast<Vertex>(it - vertices.begin()) + 1;
    }

    /// Original label of local vertex `i` (1-based).
    [[nodiscard]] Vertex original(Vertex i) const { return vertices.at(static_cast<std::size_t>(i) - 1); }

    /// Induced subtree relabeled to 1..|vertices| in ascending original order.
    [[nodiscard]] Graph as_graph() const {
        std::vector<Edge> edges;
        for (const Edge& e : tree.edges()) {
            if (std::binary_search(vertices.begin(), vertices.end(), e.u) &&
                std::binary_search(vertices.begin(), vertices.end(), e.v)) {
                edges.push_back({local(e.u), local(e.v)});
            }
        }
        return Graph(static_cast<int>(vertices.size()), std::move(edges));
    }
};

struct NebReport {
    bool is_neb_somewhere = false;
    std::vector<Vertex> neb_roots;
    /// Vertex whose deletion leaves at least two odd components; set exactly
    /// when no root exists.
    std::optional<Vertex> witness;
};

namespace detail {

inline void require_tree(const Graph& t) {
    if (!is_tree(t)) {
        throw DomainError("input is not a tree (needs to be connected with n-1 edges)");
    }
}

/// Per-call memo over branches. A branch is the directed edge parent -> v and
/// stands for the component of T - parent containing v; parent 0 is the whole
/// tree rooted at v. Each branch is solved once no matter how many roots ask.
class NebScratch {
public:
    explicit NebScratch(const Graph& t) : t_(t), offset_(static_cast<std::size_t>(t.n()) + 2, 0) {
        for (Vertex v = 1; v <= t.n(); ++v) {
            offset_[v + 1] = offset_[v] + t.degree(v) + 1;
        }
        size_.assign(offset_[t.n() + 1], 0);
        neb_.assign(offset_[t.n() + 1], kUnknown);
    }

    /// Vertex count of the branch parent -> v.
    int size(Vertex parent, Vertex v) {
        solve(parent, v);
        return size_[slot(parent, v)];
    }

    /// Whether the branch parent -> v is NEB at v.
    bool neb(Vertex parent, Vertex v) {
        solve(parent, v);
        return neb_[slot(parent, v)] == kYes;
    }

    /// Odd components left after deleting v from the branch parent -> v.
    int odd_children(Vertex parent, Vertex v) {
        int odd = 0;
        for (Vertex c : t_.neighbors(v)) {
            if (c != parent && size(v, c) % 2 == 1) {
                ++odd;
            }
        }
        return odd;
    }

private:
    static constexpr signed char kUnknown = -1;
    static constexpr signed char kNo = 0;
    static constexpr signed char kYes = 1;

    std::size_t slot(Vertex parent, Vertex v) const {
        const auto nbrs = t_.neighbors(v);
        if (parent == 0) {
            return offset_[v] + nbrs.size();
        }
        return offset_[v] + static_cast<std::size_t>(
                                std::lower_bound(nbrs.begin(), nbrs.end(), parent) - nbrs.begin());
    }

    void solve(Vertex parent, Vertex v) {
        const std::size_t s = slot(parent, v);
        if (neb_[s] != kUnknown) {
            return;
        }
        int total = 1;
        int odd = 0;
        bool children_neb = true;
        for (Vertex c : t_.neighbors(v)) {
            if (c == parent) {
                continue;
            }
            const int cs = size(v, c);
            total += cs;
            odd += cs % 2;
            children_neb = children_neb && neb(v, c);
        }
        // Condition (i): one odd component for even order, none for odd order.
        const bool parity_ok = (total % 2 == 0) ? odd == 1 : odd == 0;
        size_[s] = total;
        neb_[s] = (parity_ok && children_neb) ? kYes : kNo;
    }

    const Graph& t_;
    std::vector<std::size_t> offset_;
    std::vector<int> size_;
    std::vector<signed char> neb_;
};

/// Smallest-first descent from v_1 until every child branch is NEB.
inline RootedSubtreeRef descend_to_minimal(const Graph& t, NebScratch& scratch, Vertex v1) {
    std::vector<Vertex> path;
    Vertex parent = 0;
    Vertex root = v1;
    for (;;) {
        std::optional<Vertex> next;
        for (Vertex c : t.neighbors(root)) {
            if (c != parent && !scratch.neb(root, c)) {
                next = c;
                break;
            }
        }
        if (!next) {
            break;
        }
        path.push_back(root);
        parent = root;
        root = *next;
    }
    std::vector<char> removed(static_cast<std::size_t>(t.n()) + 1, 0);
    for (Vertex v : path) {
        removed[v] = 1;
    }
    std::vector<Vertex> vertices;
    for (auto& comp : components_without(t, removed)) {
        if (std::binary_search(comp.begin(), comp.end(), root)) {
            vertices = std::move(comp);
            break;
        }
    }
    return RootedSubtreeRef{t, std::move(path), root, std::move(vertices)};
}

} // namespace detail

/// Whether tree `t` is NEB at `w` under the recursive definition.
[[nodiscard]] inline bool neb_at(const Graph& t, Vertex w) {
    detail::require_tree(t);
    t.check_vertex(w);
    detail::NebScratch scratch(t);
    return scratch.neb(0, w);
}

/// All NEB roots of `t`; when there are none, a vertex whose deletion leaves
/// two or more odd components, found at the bottom of the minimal non-NEB
/// subtree for v_1 = 1.
[[nodiscard]] inline NebReport neb_report(const Graph& t) {
    detail::require_tree(t);
    detail::NebScratch scratch(t);
    NebReport report;
    for (Vertex w = 1; w <= t.n(); ++w) {
        if (scratch.neb(0, w)) {
            report.neb_roots.push_back(w);
        }
    }
    report.is_neb_somewhere = !report.neb_roots.empty();
    if (!report.is_neb_somewhere) {
        report.witness = detail::descend_to_minimal(t, scratch, 1).root;
    }
    return report;
}

/// T_{anchor}(path...). Each path step must move to a neighbor that is still
/// inside the current subtree; the anchor must be such a neighbor of the last
/// path vertex. An empty path returns the whole tree.
[[nodiscard]] inline RootedSubtreeRef subtree_after_path(const Graph& t, std::span<const Vertex> path,
                                                         Vertex anchor) {
    detail::require_tree(t);
    t.check_vertex(anchor);
    std::vector<char> removed(static_cast<std::size_t>(t.n()) + 1, 0);
    std::vector<Vertex> current;  // vertices of the current subtree
    for (Vertex v = 1; v <= t.n(); ++v) {
        current.push_back(v);
    }

    std::vector<Vertex> steps(path.begin(), path.end());
    steps.push_back(anchor);
    for (std::size_t i = 0; i + 1 < steps.size(); ++i) {
        const Vertex from = steps[i];
        const Vertex to = steps[i + 1];
        t.check_vertex(from);
        if (!std::binary_search(current.begin(), current.end(), from)) {
            throw DomainError("path vertex " + std::to_string(from) + " is not in the current subtree");
        }
        if (!t.has_edge(from, to) || removed[to]) {
            throw DomainError("invalid path step " + std::to_string(from) + " -> " +
                              std::to_string(to) + ": not a neighbor inside the current subtree");
        }
        removed[from] = 1;
        for (auto& comp : detail::components_without(t, removed)) {
            if (std::binary_search(comp.begin(), comp.end(), to)) {
                current = std::move(comp);
                break;
            }
        }
    }
    return RootedSubtreeRef{t, std::vector<Vertex>(path.begin(), path.end()), anchor,
                            std::move(current)};
}

/// A minimal non-NEB subtree with respect to `v1`, reached by always stepping
/// into the smallest neighbor whose branch is not NEB.
[[nodiscard]] inline RootedSubtreeRef minimal_non_neb_subtree(const Graph& t, Vertex v1) {
    detail::require_tree(t);
    t.check_vertex(v1);
    detail::NebScratch scratch(t);
    if (scratch.neb(0, v1)) {
        throw DomainError("no non-NEB witness: tree is NEB at vertex " + std::to_string(v1));
    }
    return detail::descend_to_minimal(t, scratch, v1);
}

} // namespace skewmatch

#endif // SKEWMATCH_NEB_HPP
