#include <skewmatch/skew.hpp>

#include "support/fixtures.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <random>

using namespace skewmatch;
namespace fx = skewmatch::testing;

namespace {

std::vector<Edge> edges_of(std::initializer_list<std::pair<int, int>> pairs) {
    std::vector<Edge> out;
    for (auto [u, v] : pairs) {
        out.push_back(make_edge(u, v));
    }
    return out;
}

SkewPattern pattern_of(const Graph& g) {
    return build_pattern(g, maximum_matching(g));
}

SkewMatrix rotation(double a) {
    SkewMatrix m(2);
    m.set(1, 2, a);
    return m;
}

} // namespace

TEST(SkewMatrix, SetKeepsSkewSymmetry) {
    SkewMatrix a(3);
    a.set(1, 3, 2.5);
    a.set(3, 2, -1.0);
    EXPECT_EQ(a(3, 1), -2.5);
    EXPECT_EQ(a(2, 3), 1.0);
    EXPECT_EQ(a.graph(), fx::make_graph(3, {{1, 3}, {2, 3}}));
    EXPECT_THROW(a.set(2, 2, 1.0), DomainError);
    EXPECT_THROW(a.set(0, 2, 1.0), DomainError);
    Eigen::MatrixXd not_skew = Eigen::MatrixXd::Identity(2, 2);
    EXPECT_THROW((void)SkewMatrix::from_dense(not_skew), DomainError);
}

TEST(BuildPattern, ExampleGraphLayout) {
    const SkewPattern p = pattern_of(fx::example_graph_6());
    EXPECT_EQ(p.n, 6);
    EXPECT_EQ(p.k, 2u);
    EXPECT_EQ(p.m, 5u);
    EXPECT_EQ(p.x_positions, edges_of({{1, 2}, {3, 4}}));
    EXPECT_EQ(p.y_positions, edges_of({{2, 3}, {2, 4}, {2, 5}, {4, 5}, {4, 6}}));
    EXPECT_TRUE(p.relabeling.is_identity());
}

TEST(BuildPattern, DisjointEdgesHaveNoFreeVariables) {
    const Graph g = fx::make_graph(7, {{1, 5}, {2, 6}, {3, 4}});
    const SkewPattern p = pattern_of(g);
    EXPECT_EQ(p.k, 3u);
    EXPECT_EQ(p.m, 0u);
}

TEST(BuildPattern, RejectsNonMaximumMatching) {
    const Graph p4 = fx::path_graph(4);
    EXPECT_THROW((void)build_pattern(p4, Matching(p4, edges_of({{1, 2}}))), DomainError);
    EXPECT_THROW((void)build_pattern(p4, Matching(p4, edges_of({{2, 3}}))), DomainError);
}

TEST(BuildPattern, TrailingBlockIsEmptyOnRandomGraphs) {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 100; ++trial) {
        const Graph g = fx::random_graph(2 + trial % 9, 0.35, rng);
        const SkewPattern p = pattern_of(g);
        EXPECT_EQ(p.k + p.m, g.edge_count());
        for (const Edge& e : p.y_positions) {
            EXPECT_LE(e.u, static_cast<Vertex>(2 * p.k));
        }
    }
}

TEST(EvaluatePattern, Examples) {
    const SkewPattern p = pattern_of(fx::example_graph_6());
    const SkewMatrix zero = evaluate_pattern(p, std::vector<double>(2, 0.0), std::vector<double>(5, 0.0));
    EXPECT_EQ(zero, SkewMatrix(6));

    const std::vector<double> mu{2.0, 1.0};
    const SkewMatrix block = evaluate_pattern(p, mu, std::vector<double>(5, 0.0));
    EXPECT_EQ(block(1, 2), 2.0);
    EXPECT_EQ(block(3, 4), 1.0);
    EXPECT_EQ(block.graph(), fx::make_graph(6, {{1, 2}, {3, 4}}));

    const SkewMatrix ones = evaluate_pattern(p, std::vector<double>(2, 1.0), std::vector<double>(5, 1.0));
    EXPECT_EQ(ones.graph(), fx::example_graph_6());

    EXPECT_THROW((void)evaluate_pattern(p, mu, std::vector<double>(4, 0.0)), DomainError);
}

TEST(SkewEigen, TwoByTwo) {
    const SkewMatrix a = rotation(1.0);
    const SkewEigen e = skew_eigen(a, 1);
    ASSERT_EQ(e.spectrum.positive_parts.size(), 1u);
    EXPECT_NEAR(e.spectrum.positive_parts[0], 1.0, 1e-15);
    const Eigen::VectorXcd& v = e.vectors[0];
    Eigen::VectorXcd expected(2);
    expected << std::complex<double>(0, 1) / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
    EXPECT_NEAR(std::abs(expected.dot(v)), 1.0, 1e-14);  // same up to phase
    EXPECT_NEAR(v(0).imag(), 0.0, 1e-15);
    EXPECT_GT(v(0).real(), 0.0);
    const Eigen::VectorXcd residual = a.dense().cast<std::complex<double>>() * v - std::complex<double>(0, 1) * v;
    EXPECT_LT(residual.norm(), 1e-14);
}

TEST(SkewEigen, BlockDiagonalSpectrum) {
    const SkewPattern p = pattern_of(fx::make_graph(6, {{1, 2}, {3, 4}}));
    const SkewSpectrum s = skew_spectrum(evaluate_pattern(p, std::vector<double>{2.0, 1.0}, {}));
    ASSERT_EQ(s.positive_parts.size(), 3u);
    EXPECT_NEAR(s.positive_parts[0], 2.0, 1e-15);
    EXPECT_NEAR(s.positive_parts[1], 1.0, 1e-15);
    EXPECT_NEAR(s.positive_parts[2], 0.0, 1e-15);
    EXPECT_EQ(s.zero_count_numeric, 2u);
    EXPECT_EQ(s.nonzero_count(), 4u);
}

TEST(SkewEigen, RankTwoBipartiteMatrix) {
    const SkewSpectrum s = skew_spectrum(fx::bipartite_rank_two_matrix(2));
    ASSERT_EQ(s.positive_parts.size(), 2u);
    EXPECT_NEAR(s.positive_parts[0], 2.0, 1e-14);
    EXPECT_NEAR(s.positive_parts[1], 0.0, 1e-14);
    EXPECT_EQ(fx::bipartite_rank_two_matrix(2).graph(), fx::complete_bipartite(2));
}

TEST(SkewEigen, ZeroMatrixHasNoNonzeroPart) {
    const SkewSpectrum s = skew_spectrum(SkewMatrix(5));
    EXPECT_EQ(s.positive_parts, (std::vector<double>{0.0, 0.0}));
    EXPECT_EQ(s.zero_count_numeric, 5u);
}

TEST(SkewEigen, EnergyIdentityAndEigenpairs) {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 1 + trial % 10;
        const SkewMatrix a = fx::random_skew(n, 1.5, rng);
        const SkewEigen e = skew_eigen(a, static_cast<std::size_t>(n / 2));
        double energy = 0.0;
        for (double mu : e.spectrum.positive_parts) {
            energy += 2.0 * mu * mu;
        }
        const double frob = a.dense().squaredNorm();
        EXPECT_NEAR(energy, frob, 1e-10 * std::max(1.0, frob));

        const auto oracle = fx::positive_parts_via_square(a.dense());
        for (std::size_t j = 0; j < oracle.size(); ++j) {
            EXPECT_NEAR(e.spectrum.positive_parts[j], oracle[j], 1e-7);
            EXPECT_NEAR(e.vectors[j].norm(), 1.0, 1e-12);
            const Eigen::VectorXcd r = a.dense().cast<std::complex<double>>() * e.vectors[j] -
                                       std::complex<double>(0, e.spectrum.positive_parts[j]) * e.vectors[j];
            EXPECT_LT(r.norm(), 1e-12);
        }
        EXPECT_EQ(e.spectrum.zero_count_numeric % 2, static_cast<std::size_t>(n % 2));
        EXPECT_EQ(rank_numeric(a), e.spectrum.nonzero_count());
    }
}

TEST(RankNumeric, Examples) {
    EXPECT_EQ(rank_numeric(SkewMatrix(4)), 0u);
    EXPECT_EQ(rank_numeric(fx::bipartite_rank_two_matrix(3)), 2u);

    std::mt19937_64 rng(1);
    const Graph g = fx::example_graph_6();
    const SkewMatrix a = random_evaluation(g, rng);
    EXPECT_EQ(a.graph(), g);
    EXPECT_EQ(rank_numeric(a), 4u);
    EXPECT_EQ(rank_exact_rational(a), 4u);
    EXPECT_THROW((void)rank_numeric(a, 0.0), DomainError);
}

TEST(RankExact, Examples) {
    SkewMatrix block(4);
    block.set(1, 2, 1.0);
    EXPECT_EQ(rank_exact_rational(block), 2u);
    EXPECT_EQ(rank_exact_rational(fx::bipartite_rank_two_matrix(2)), 2u);
    EXPECT_EQ(rank_exact_rational(SkewMatrix(3)), 0u);

    using Q = Rational;
    const std::vector<std::vector<Q>> fractions{{Q(1, 3), Q(1, 2)}, {Q(2, 3), Q(1)}};
    EXPECT_EQ(rank_exact_rational(fractions), 1u);
    const std::vector<std::vector<Q>> full{{Q(1, 3), Q(1, 2)}, {Q(2, 3), Q(1, 7)}};
    EXPECT_EQ(rank_exact_rational(full), 2u);
}

TEST(RankExact, ExactRationalOfDouble) {
    EXPECT_EQ(exact_rational(0.5), Rational(1, 2));
    EXPECT_EQ(exact_rational(-3.0), Rational(-3));
    EXPECT_EQ(exact_rational(0.1) * Rational(BigInt(1) << 55), Rational(BigInt(3602879701896397)));
    EXPECT_THROW((void)exact_rational(std::nan("")), DomainError);
}

TEST(RankExact, AgreesWithNumericOnSignPatterns) {
    std::mt19937_64 rng(77);
    std::bernoulli_distribution coin(0.5);
    for (int trial = 0; trial < 150; ++trial) {
        const Graph g = fx::random_graph(2 + trial % 9, 0.4, rng);
        SkewMatrix a(g.n());
        for (const Edge& e : g.edges()) {
            a.set(e.u, e.v, coin(rng) ? 1.0 : -1.0);
        }
        EXPECT_EQ(rank_exact_rational(a), rank_numeric(a)) << format_graph(g);
    }
}

TEST(MaxSkewRank, Examples) {
    const auto empty = max_skew_rank(Graph(4));
    EXPECT_EQ(empty.certified, 0u);
    EXPECT_EQ(empty.sampled, 0u);

    const auto ex = max_skew_rank(fx::example_graph_6());
    EXPECT_EQ(ex.certified, 4u);
    EXPECT_EQ(ex.sampled, 4u);

    const auto p5 = max_skew_rank(fx::path_graph(5));
    EXPECT_EQ(p5.certified, 4u);
    EXPECT_EQ(p5.sampled, 4u);
}

TEST(MaxSkewRank, SeededSamplesAreReproducible) {
    const Graph g = fx::complete_graph(5);
    std::mt19937_64 a = detail::sample_rng(9, 3);
    std::mt19937_64 b = detail::sample_rng(9, 3);
    EXPECT_EQ(random_evaluation(g, a), random_evaluation(g, b));
    std::mt19937_64 c = detail::sample_rng(9, 4);
    std::mt19937_64 d = detail::sample_rng(9, 3);
    EXPECT_FALSE(random_evaluation(g, c) == random_evaluation(g, d));
}

TEST(EigenvalueDerivative, TwoByTwoExamples) {
    const SkewMatrix a = rotation(1.0);
    Eigen::VectorXcd v(2);
    v << std::complex<double>(0, 1) / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
    EXPECT_NEAR(eigenvalue_derivative(a, v, 1, 2), 1.0, 1e-15);
    EXPECT_NEAR(eigenvalue_derivative(a, v, 2, 1), -1.0, 1e-15);
    EXPECT_THROW((void)eigenvalue_derivative(a, 2.0 * v, 1, 2), DomainError);
    EXPECT_THROW((void)eigenvalue_derivative(a, v, 1, 1), DomainError);
    EXPECT_THROW((void)eigenvalue_derivative(a, v, 1, 3), DomainError);
}

TEST(EigenvalueDerivative, MatchesFiniteDifferences) {
    std::mt19937_64 rng(123);
    int instances = 0;
    while (instances < 40) {
        const int n = 2 + static_cast<int>(rng() % 7);
        const SkewMatrix a = fx::random_skew(n, 2.0, rng);
        const SkewEigen e = skew_eigen(a, static_cast<std::size_t>(n / 2));
        if (fx::min_spectral_gap(e.spectrum.positive_parts) <= 0.1) {
            continue;
        }
        ++instances;
        for (std::size_t j = 1; j <= e.vectors.size(); ++j) {
            for (int r = 1; r <= n; ++r) {
                for (int s = r + 1; s <= n; ++s) {
                    const double analytic = eigenvalue_derivative(a, e.vectors[j - 1], r, s);
                    const double fd = fx::fd_positive_part_derivative(a, j, r, s, 1e-6);
                    EXPECT_NEAR(analytic, fd, 1e-6 * std::max(1.0, std::abs(fd)));
                }
            }
        }
    }
}

TEST(JacobianX, IdentityAtBlockDiagonalSeed) {
    const SkewPattern p = pattern_of(fx::example_graph_6());
    const Eigen::MatrixXd j = jacobian_x(p, std::vector<double>{2.0, 1.0}, std::vector<double>(5, 0.0));
    EXPECT_LT((j - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(JacobianX, SingleEdge) {
    const SkewPattern p = pattern_of(fx::path_graph(2));
    const Eigen::MatrixXd j = jacobian_x(p, std::vector<double>{3.0}, {});
    ASSERT_EQ(j.rows(), 1);
    EXPECT_NEAR(j(0, 0), 1.0, 1e-14);
}

TEST(JacobianX, NearSeedAgreesWithFiniteDifferences) {
    const Graph g = fx::example_graph_6();
    const SkewPattern p = pattern_of(g);
    const std::vector<double> x{2.0, 1.0};
    for (double eps : {1e-1, 1e-2, 1e-3}) {
        const std::vector<double> y{eps, -eps, eps, eps, -eps};
        const Eigen::MatrixXd jac = jacobian_x(p, x, y);
        for (std::size_t l = 0; l < p.k; ++l) {
            const double h = 1e-6;
            auto plus = x;
            auto minus = x;
            plus[l] += h;
            minus[l] -= h;
            const auto mp = fx::positive_parts_via_square(evaluate_pattern(p, plus, y).dense());
            const auto mm = fx::positive_parts_via_square(evaluate_pattern(p, minus, y).dense());
            for (std::size_t j = 0; j < p.k; ++j) {
                const double fd = (mp[j] - mm[j]) / (2 * h);
                EXPECT_NEAR(jac(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l)), fd, 1e-6);
            }
        }
        // Off the seed the Jacobian drifts from the identity by O(eps).
        EXPECT_LT((jac - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff(), 10 * eps);
    }
}

TEST(JacobianX, ClusteredSpectrumIsRejected) {
    const SkewPattern p = pattern_of(fx::make_graph(4, {{1, 2}, {3, 4}}));
    EXPECT_THROW((void)jacobian_x(p, std::vector<double>{1.0, 1.0}, {}), DomainError);
    EXPECT_THROW((void)jacobian_x(p, std::vector<double>{1.0, 0.0}, {}), DomainError);
}
