#ifndef SKEWMATCH_IEP_HPP
#define SKEWMATCH_IEP_HPP

#include <skewmatch/graph.hpp>
#include <skewmatch/skew.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace skewmatch {

/// Prescribed positive parts mu_1 > ... > mu_k > 0 for an order-n matrix;
/// the remaining n - 2k eigenvalues are zero.
class SpectralTarget {
public:
    /// Consecutive values must differ by at least 1e-10 relative.
    SpectralTarget(std::vector<double> mu, int n) : mu_(std::move(mu)), n_(n) {
        if (n < 1) {
            throw DomainError("matrix order must be positive");
        }
        if (2 * mu_.size() > static_cast<std::size_t>(n)) {
            throw DomainError("too many targets: 2k must not exceed n");
        }
        for (std::size_t j = 0; j < mu_.size(); ++j) {
            if (!std::isfinite(mu_[j]) || !(mu_[j] > 0.0)) {
                throw DomainError("targets must be finite and positive");
            }
            if (j > 0 && !(mu_[j - 1] - mu_[j] >= kMinRelGap * mu_[j - 1])) {
                throw DomainError("targets must be strictly decreasing and distinct");
            }
        }
    }

    static constexpr double kMinRelGap = 1e-10;

    [[nodiscard]] const std::vector<double>& mu() const noexcept { return mu_; }
    [[nodiscard]] std::size_t k() const noexcept { return mu_.size(); }
    [[nodiscard]] int n() const noexcept { return n_; }
    [[nodiscard]] std::size_t zero_multiplicity() const noexcept {
        return static_cast<std::size_t>(n_) - 2 * mu_.size();
    }

private:
    std::vector<double> mu_;
    int n_;
};

/// Unset epsilon bounds default to 0.05 * mu_k and 1e-8 * mu_k.
struct SolverConfig {
    std::optional<double> epsilon0;
    std::optional<double> epsilon_min;
    double newton_tol = 1e-9;
    int newton_max_iter = 50;
    double gap_tol = kGapRelTol;
    std::uint64_t seed = 0;
};

struct SolverResult {
    /// In the caller's vertex labels.
    SkewMatrix matrix{1};
    /// max_j |mu_j(matrix) - target_j|.
    double residual = 0.0;
    double epsilon_used = 0.0;
    /// Newton steps of the successful attempt.
    int iterations = 0;
    /// Residual before each Newton step, across every attempt.
    std::vector<double> trace;
    /// Epsilon of each attempt, in order.
    std::vector<double> restarts;
    /// The maximum matching the pattern was built on, in the caller's labels.
    Matching matching;
};

namespace detail {

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double worst = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        worst = std::max(worst, std::abs(a[j] - b[j]));
    }
    return worst;
}

inline std::vector<double> top_positive_parts(const SkewMatrix& a, std::size_t k) {
    auto mu = skew_spectrum(a).positive_parts;
    mu.resize(k);
    return mu;
}

/// True when Newton on x converges with y = epsilon * signs; x and y keep
/// the last iterate.
inline bool newton_attempt(const SkewPattern& pattern, const SpectralTarget& target,
                           const SolverConfig& cfg, double epsilon, std::span<const double> signs,
                           std::vector<double>& x, std::vector<double>& y, int& iterations,
                           std::vector<double>& trace) {
    const auto& mu = target.mu();
    const double step_cap = 0.5 * mu.back();
    x = mu;
    y.resize(pattern.m);
    for (std::size_t l = 0; l < pattern.m; ++l) {
        y[l] = epsilon * signs[l];
    }
    iterations = 0;
    for (;;) {
        const auto f = top_positive_parts(evaluate_pattern(pattern, x, y), pattern.k);
        const double residual = max_abs_diff(f, mu);
        trace.push_back(residual);
        if (!std::isfinite(residual)) {
            return false;
        }
        if (residual <= cfg.newton_tol) {
            return true;
        }
        if (iterations >= cfg.newton_max_iter) {
            return false;
        }

        Eigen::MatrixXd jac;
        try {
            jac = jacobian_x(pattern, x, y, cfg.gap_tol);
        } catch (const DomainError&) {
            return false;
        }
        const Eigen::FullPivLU<Eigen::MatrixXd> lu(jac);
        if (!lu.isInvertible()) {
            return false;
        }
        Eigen::VectorXd rhs(static_cast<Eigen::Index>(pattern.k));
        for (std::size_t j = 0; j < pattern.k; ++j) {
            rhs(static_cast<Eigen::Index>(j)) = mu[j] - f[j];
        }
        Eigen::VectorXd dx = lu.solve(rhs);
        const double largest = dx.cwiseAbs().maxCoeff();
        if (largest > step_cap) {
            dx *= step_cap / largest;
        }
        for (std::size_t j = 0; j < pattern.k; ++j) {
            x[j] += dx(static_cast<Eigen::Index>(j));
            // Matched entries must stay visibly nonzero for graph(A) = G.
            if (!(std::abs(x[j]) >= epsilon)) {
                return false;
            }
        }
        ++iterations;
    }
}

} // namespace detail

/// Block-diagonal start point: x = mu, y = 0, in relabeled coordinates.
[[nodiscard]] inline SkewMatrix seed_matrix(const SkewPattern& p, const SpectralTarget& target) {
    if (p.k != target.k()) {
        throw DomainError("pattern has " + std::to_string(p.k) + " matching variables but target has " +
                          std::to_string(target.k()) + " values");
    }
    return evaluate_pattern(p, target.mu(), std::vector<double>(p.m, 0.0));
}

/// Real skew-symmetric A with graph exactly `g` and positive parts `target`
/// (plus n - 2k zeros). Newton corrects the matching entries while the other
/// edges hold a fixed perturbation of size epsilon; epsilon halves after
/// every failed attempt until it drops below epsilon_min.
[[nodiscard]] inline SolverResult solve(const Graph& g, const SpectralTarget& target,
                                        const SolverConfig& cfg = {}) {
    if (target.n() != g.n()) {
        throw DomainError("target order " + std::to_string(target.n()) + " differs from graph order " +
                          std::to_string(g.n()));
    }
    const Matching matching = maximum_matching(g);
    if (matching.size() != target.k()) {
        throw DomainError("target size " + std::to_string(target.k()) +
                          " must equal the matching number " + std::to_string(matching.size()));
    }
    if (!(cfg.newton_tol > 0.0) || !(cfg.gap_tol > 0.0) || cfg.newton_max_iter < 1) {
        throw DomainError("solver tolerances and iteration cap must be positive");
    }

    const SkewPattern pattern = build_pattern(g, matching);
    SolverResult result;
    result.matching = matching;

    if (pattern.m == 0) {
        // Disjoint edges: the block-diagonal seed is exact.
        result.matrix = seed_matrix(pattern, target).permuted(pattern.relabeling.inverse);
        return result;
    }

    const double mu_k = target.mu().back();
    const double eps0 = cfg.epsilon0.value_or(0.05 * mu_k);
    const double eps_min = cfg.epsilon_min.value_or(1e-8 * mu_k);
    if (!(eps0 > 0.0) || !(eps_min > 0.0) || !(eps_min < eps0)) {
        throw DomainError("need 0 < epsilon_min < epsilon0");
    }

    std::mt19937_64 rng(cfg.seed);
    std::vector<double> signs(pattern.m);
    for (double& s : signs) {
        s = (rng() >> 63) ? -1.0 : 1.0;
    }

    std::vector<double> x;
    std::vector<double> y;
    for (double eps = eps0; eps >= eps_min; eps *= 0.5) {
        result.restarts.push_back(eps);
        int iterations = 0;
        if (detail::newton_attempt(pattern, target, cfg, eps, signs, x, y, iterations, result.trace)) {
            result.matrix = evaluate_pattern(pattern, x, y).permuted(pattern.relabeling.inverse);
            result.residual =
                detail::max_abs_diff(detail::top_positive_parts(result.matrix, target.k()), target.mu());
            result.epsilon_used = eps;
            result.iterations = iterations;
            return result;
        }
    }
    throw ConvergenceError("no convergence before epsilon fell below " + std::to_string(eps_min),
                           std::move(result.trace));
}

// ---------------------------------------------------------------------------
// Verification
// ---------------------------------------------------------------------------

struct VerificationReport {
    bool graph_exact = false;
    bool skew_symmetric = false;
    bool spectrum_match = false;
    bool rank_bound = false;
    /// Largest deviation of the top k positive parts from the target.
    double residual = 0.0;
    std::size_t nonzero_count = 0;
    std::size_t expected_nonzero = 0;
    /// 2 * match(G).
    std::size_t max_nonzero = 0;

    [[nodiscard]] bool passed() const noexcept {
        return graph_exact && skew_symmetric && spectrum_match && rank_bound;
    }
};

/// Independent re-check of a claimed realization. Failures are recorded in
/// the report, never thrown.
[[nodiscard]] inline VerificationReport verify_solution(const Graph& g, const SpectralTarget& target,
                                                        const SkewMatrix& a, double tol) {
    VerificationReport r;
    r.expected_nonzero = 2 * target.k();
    r.max_nonzero = 2 * maximum_matching(g).size();

    const auto& dense = a.dense();
    r.skew_symmetric = (dense + dense.transpose()).cwiseAbs().maxCoeff() == 0.0;
    r.graph_exact = a.n() == g.n() && a.graph() == g;

    const SkewSpectrum spectrum = skew_spectrum(a);
    const auto& mu = spectrum.positive_parts;
    r.nonzero_count = spectrum.nonzero_count();
    bool spectrum_ok = a.n() == target.n() && mu.size() >= target.k();
    if (spectrum_ok) {
        r.residual = detail::max_abs_diff(std::span(mu).first(target.k()), target.mu());
        spectrum_ok = r.residual <= tol;
        for (std::size_t j = target.k(); j < mu.size(); ++j) {
            spectrum_ok = spectrum_ok && mu[j] <= spectrum.threshold;
        }
    } else {
        r.residual = std::numeric_limits<double>::infinity();
    }
    r.spectrum_match = spectrum_ok;
    r.rank_bound = r.nonzero_count == r.expected_nonzero && r.nonzero_count <= r.max_nonzero;
    return r;
}

struct ConverseCheck {
    /// Numerically nonzero eigenvalues of A (both signs).
    std::size_t nonzero_count = 0;
    /// 2 * match(G).
    std::size_t bound = 0;
    /// A has 2 floor(n/2) distinct nonzero eigenvalues.
    bool full_distinct_spectrum = false;
    /// nonzero_count <= bound, and a full distinct spectrum comes with
    /// match(G) = floor(n/2).
    bool consistent = false;
};

/// Relates a matrix with graph `g` back to the matching number of `g`.
[[nodiscard]] inline ConverseCheck converse_certificate(const Graph& g, const SkewMatrix& a) {
    if (a.n() != g.n() || !(a.graph() == g)) {
        throw DomainError("matrix graph differs from the given graph");
    }
    ConverseCheck c;
    const std::size_t match = maximum_matching(g).size();
    const std::size_t half = static_cast<std::size_t>(g.n()) / 2;
    c.bound = 2 * match;
    c.nonzero_count = rank_numeric(a);

    const auto spectrum = skew_spectrum(a);
    const auto& mu = spectrum.positive_parts;
    bool distinct = c.nonzero_count == 2 * half && spectrum.nonzero_count() == 2 * half;
    for (std::size_t j = 0; distinct && j + 1 < mu.size(); ++j) {
        distinct = mu[j] - mu[j + 1] > SpectralTarget::kMinRelGap * mu[j];
    }
    c.full_distinct_spectrum = distinct;
    c.consistent = c.nonzero_count <= c.bound && (!distinct || match == half);
    return c;
}

} // namespace skewmatch

#endif // SKEWMATCH_IEP_HPP
