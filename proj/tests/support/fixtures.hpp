#ifndef SKEWMATCH_TESTS_FIXTURES_HPP
#define SKEWMATCH_TESTS_FIXTURES_HPP

// Named graphs, random generators and oracles shared by the unit and
// acceptance suites. Nothing here calls into the code paths it is used to
// check: trees come from Pruefer decoding, positive parts for finite
// differences come from the real symmetric matrix -A^2.

#include <skewmatch/graph.hpp>
#include <skewmatch/skew.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace skewmatch::testing {

inline Graph make_graph(int n, std::vector<std::pair<int, int>> pairs) {
    std::vector<Edge> edges;
    for (auto [u, v] : pairs) {
        edges.push_back(make_edge(u, v));
    }
    return Graph(n, std::move(edges));
}

inline Graph path_graph(int n) {
    std::vector<Edge> edges;
    for (int v = 1; v < n; ++v) {
        edges.push_back({v, v + 1});
    }
    return Graph(n, std::move(edges));
}

inline Graph cycle_graph(int n) {
    auto edges = path_graph(n).edges();
    edges.push_back({1, n});
    return Graph(n, std::move(edges));
}

inline Graph complete_graph(int n) {
    std::vector<Edge> edges;
    for (int u = 1; u <= n; ++u) {
        for (int v = u + 1; v <= n; ++v) {
            edges.push_back({u, v});
        }
    }
    return Graph(n, std::move(edges));
}

/// Star with center 1 and leaves 2..leaves+1.
inline Graph star_graph(int leaves) {
    std::vector<Edge> edges;
    for (int v = 2; v <= leaves + 1; ++v) {
        edges.push_back({1, v});
    }
    return Graph(leaves + 1, std::move(edges));
}

/// Parts {1..n} and {n+1..2n}.
inline Graph complete_bipartite(int n) {
    std::vector<Edge> edges;
    for (int u = 1; u <= n; ++u) {
        for (int v = n + 1; v <= 2 * n; ++v) {
            edges.push_back({u, v});
        }
    }
    return Graph(2 * n, std::move(edges));
}

/// Six vertices, seven edges, matching number two; {1,2},{3,4} is a maximum
/// matching and vertices 5, 6 only see 2 and 4.
inline Graph example_graph_6() {
    return make_graph(6, {{1, 2}, {2, 3}, {2, 5}, {3, 4}, {4, 6}, {4, 5}, {2, 4}});
}

/// 4 - 2 - 1 - 6 with 2 - 3 - 5.
inline Graph branching_tree_6() {
    return make_graph(6, {{1, 2}, {2, 3}, {2, 4}, {3, 5}, {1, 6}});
}

/// Path 7-6-1-2-3 with two three-vertex legs 4-8-9 and 5-10-11 hanging off 3.
inline Graph two_leg_tree_11() {
    return make_graph(11, {{1, 2}, {1, 6}, {6, 7}, {2, 3}, {3, 4}, {4, 8}, {8, 9}, {3, 5}, {5, 10}, {10, 11}});
}

/// A = x y^T - y x^T with x = all ones, y = (1,..,1,2,..,2) on K_{n,n}.
inline SkewMatrix bipartite_rank_two_matrix(int n) {
    SkewMatrix a(2 * n);
    for (int i = 1; i <= 2 * n; ++i) {
        for (int j = i + 1; j <= 2 * n; ++j) {
            const double yi = i <= n ? 1.0 : 2.0;
            const double yj = j <= n ? 1.0 : 2.0;
            a.set(i, j, yj - yi);
        }
    }
    return a;
}

// ---------------------------------------------------------------------------
// Trees from Pruefer sequences
// ---------------------------------------------------------------------------

/// Labeled tree on 1..n for a sequence of n-2 labels in 1..n.
inline Graph prufer_decode(const std::vector<int>& seq, int n) {
    if (n == 1) {
        return Graph(1);
    }
    std::vector<int> degree(static_cast<std::size_t>(n) + 1, 1);
    for (int v : seq) {
        ++degree[v];
    }
    std::vector<Edge> edges;
    for (int v : seq) {
        int leaf = 1;
        while (degree[leaf] != 1) {
            ++leaf;
        }
        edges.push_back(make_edge(leaf, v));
        --degree[leaf];
        --degree[v];
    }
    int u = 0;
    for (int v = 1; v <= n; ++v) {
        if (degree[v] == 1) {
            if (u == 0) {
                u = v;
            } else {
                edges.push_back(make_edge(u, v));
            }
        }
    }
    return Graph(n, std::move(edges));
}

/// Calls fn on every labeled tree of order n (n^(n-2) of them).
inline void for_each_labeled_tree(int n, const std::function<void(const Graph&)>& fn) {
    if (n <= 2) {
        fn(n == 1 ? Graph(1) : make_graph(2, {{1, 2}}));
        return;
    }
    std::vector<int> seq(static_cast<std::size_t>(n) - 2, 1);
    for (;;) {
        fn(prufer_decode(seq, n));
        std::size_t i = 0;
        while (i < seq.size() && seq[i] == n) {
            seq[i++] = 1;
        }
        if (i == seq.size()) {
            return;
        }
        ++seq[i];
    }
}

inline Graph random_tree(int n, std::mt19937_64& rng) {
    if (n <= 2) {
        return n == 1 ? Graph(1) : make_graph(2, {{1, 2}});
    }
    std::uniform_int_distribution<int> label(1, n);
    std::vector<int> seq(static_cast<std::size_t>(n) - 2);
    for (int& v : seq) {
        v = label(rng);
    }
    return prufer_decode(seq, n);
}

/// Erdos-Renyi G(n, p).
inline Graph random_graph(int n, double p, std::mt19937_64& rng) {
    std::bernoulli_distribution coin(p);
    std::vector<Edge> edges;
    for (int u = 1; u <= n; ++u) {
        for (int v = u + 1; v <= n; ++v) {
            if (coin(rng)) {
                edges.push_back({u, v});
            }
        }
    }
    return Graph(n, std::move(edges));
}

/// Random tree plus independent extra edges with probability p.
inline Graph random_connected_graph(int n, double p, std::mt19937_64& rng) {
    auto edges = random_tree(n, rng).edges();
    const auto extra = random_graph(n, p, rng).edges();
    edges.insert(edges.end(), extra.begin(), extra.end());
    return Graph(n, std::move(edges));
}

/// Dense skew matrix with entries uniform in [-scale, scale].
inline SkewMatrix random_skew(int n, double scale, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> entry(-scale, scale);
    SkewMatrix a(n);
    for (int i = 1; i <= n; ++i) {
        for (int j = i + 1; j <= n; ++j) {
            a.set(i, j, entry(rng));
        }
    }
    return a;
}

// ---------------------------------------------------------------------------
// Spectral oracles
// ---------------------------------------------------------------------------

/// Positive parts, descending, from the eigenvalues mu^2 of -A^2 (each twice).
inline std::vector<double> positive_parts_via_square(const Eigen::MatrixXd& a) {
    const Eigen::MatrixXd sq = -(a * a);
    const Eigen::MatrixXd sym = 0.5 * (sq + sq.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd ev = solver.eigenvalues();  // ascending, pairs
    std::vector<double> mu;
    const auto n = ev.size();
    for (Eigen::Index j = 0; j < n / 2; ++j) {
        const double pair_mean = 0.5 * (ev(n - 1 - 2 * j) + ev(n - 2 - 2 * j));
        mu.push_back(std::sqrt(std::max(0.0, pair_mean)));
    }
    return mu;
}

/// Central difference of mu_j along E_rs - E_sr (1-based r, s, j).
inline double fd_positive_part_derivative(const SkewMatrix& a, std::size_t j, int r, int s, double h) {
    Eigen::MatrixXd plus = a.dense();
    Eigen::MatrixXd minus = a.dense();
    plus(r - 1, s - 1) += h;
    plus(s - 1, r - 1) -= h;
    minus(r - 1, s - 1) -= h;
    minus(s - 1, r - 1) += h;
    return (positive_parts_via_square(plus)[j - 1] - positive_parts_via_square(minus)[j - 1]) / (2.0 * h);
}

/// Smallest separation among the positive parts and between the smallest
/// one and zero.
inline double min_spectral_gap(const std::vector<double>& mu) {
    double gap = mu.empty() ? 0.0 : mu.back();
    for (std::size_t j = 0; j + 1 < mu.size(); ++j) {
        gap = std::min(gap, mu[j] - mu[j + 1]);
    }
    return gap;
}

/// k distinct values in [lo, hi], descending, pairwise at least min_gap apart.
inline std::vector<double> random_targets(std::size_t k, double lo, double hi, double min_gap,
                                          std::mt19937_64& rng) {
    std::uniform_real_distribution<double> draw(lo, hi);
    for (;;) {
        std::vector<double> mu(k);
        for (double& v : mu) {
            v = draw(rng);
        }
        std::sort(mu.begin(), mu.end(), std::greater<>());
        bool ok = true;
        for (std::size_t j = 0; j + 1 < k; ++j) {
            ok = ok && mu[j] - mu[j + 1] >= min_gap;
        }
        if (ok) {
            return mu;
        }
    }
}

} // namespace skewmatch::testing

#endif // SKEWMATCH_TESTS_FIXTURES_HPP
