#ifndef SKEWMATCH_SKEW_HPP
#define SKEWMATCH_SKEW_HPP

#include <skewmatch/graph.hpp>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace skewmatch {

/// A positive part mu counts as nonzero when mu > kZeroRelTol * max(1, mu_1).
inline constexpr double kZeroRelTol = 1e-8;
/// Default relative tolerance of rank_numeric.
inline constexpr double kRankRelTol = 1e-10;
/// Minimum relative gap between consecutive positive parts for jacobian_x.
inline constexpr double kGapRelTol = 1e-6;

[[nodiscard]] inline double zero_threshold(double mu_max) noexcept {
    return kZeroRelTol * std::max(1.0, mu_max);
}

/// Dense real skew-symmetric matrix. Writes go through set(), which keeps
/// a_ji = -a_ij exactly. Indices are 1-based like graph vertices.
class SkewMatrix {
public:
    explicit SkewMatrix(int n) : a_(Eigen::MatrixXd::Zero(check_order(n), n)) {}

    /// Throws unless `dense` is square and exactly skew-symmetric.
    static SkewMatrix from_dense(const Eigen::MatrixXd& dense) {
        if (dense.rows() != dense.cols()) {
            throw DomainError("matrix is not square");
        }
        SkewMatrix m(static_cast<int>(dense.rows()));
        for (Eigen::Index i = 0; i < dense.rows(); ++i) {
            for (Eigen::Index j = i; j < dense.cols(); ++j) {
                if (dense(i, j) != -dense(j, i)) {
                    throw DomainError("matrix is not skew-symmetric at (" + std::to_string(i + 1) +
                                      "," + std::to_string(j + 1) + ")");
                }
            }
        }
        m.a_ = dense;
        return m;
    }

    [[nodiscard]] int n() const noexcept { return static_cast<int>(a_.rows()); }

    [[nodiscard]] double operator()(int i, int j) const {
        check_index(i);
        check_index(j);
        return a_(i - 1, j - 1);
    }

    /// Sets a_ij = value and a_ji = -value.
    void set(int i, int j, double value) {
        check_index(i);
        check_index(j);
        if (i == j) {
            if (value != 0.0) {
                throw DomainError("diagonal of a skew-symmetric matrix is zero");
            }
            return;
        }
        a_(i - 1, j - 1) = value;
        a_(j - 1, i - 1) = -value;
    }

    [[nodiscard]] const Eigen::MatrixXd& dense() const noexcept { return a_; }

    /// Edges {i, j} with a_ij != 0.
    [[nodiscard]] Graph graph() const {
        std::vector<Edge> edges;
        for (int i = 0; i < n(); ++i) {
            for (int j = i + 1; j < n(); ++j) {
                if (a_(i, j) != 0.0) {
                    edges.push_back({i + 1, j + 1});
                }
            }
        }
        return Graph(n(), std::move(edges));
    }

    /// Entry (perm[i], perm[j]) of the result is entry (i, j) of this matrix;
    /// `perm` is 1-based with index 0 unused.
    [[nodiscard]] SkewMatrix permuted(std::span<const Vertex> perm) const {
        if (perm.size() != static_cast<std::size_t>(n()) + 1) {
            throw DomainError("permutation size does not match matrix order");
        }
        SkewMatrix out(n());
        for (int i = 1; i <= n(); ++i) {
            for (int j = 1; j <= n(); ++j) {
                out.a_(perm[i] - 1, perm[j] - 1) = a_(i - 1, j - 1);
            }
        }
        return out;
    }

    friend bool operator==(const SkewMatrix& a, const SkewMatrix& b) {
        return a.n() == b.n() && a.a_ == b.a_;
    }

private:
    static int check_order(int n) {
        if (n < 1) {
            throw DomainError("matrix order must be positive");
        }
        return n;
    }

    void check_index(int i) const {
        if (i < 1 || i > n()) {
            throw DomainError("index " + std::to_string(i) + " outside 1.." + std::to_string(n()));
        }
    }

    Eigen::MatrixXd a_;
};

// ---------------------------------------------------------------------------
// Pattern M(x, y)
// ---------------------------------------------------------------------------

/// Symbolic skew pattern over a graph relabeled so the maximum matching is
/// {1,2}, {3,4}, ..., {2k-1,2k}. x_j sits at (2j-1, 2j); y_l at the l-th
/// non-matching edge in lexicographic order. Positions are relabeled coords.
struct SkewPattern {
    int n = 0;
    std::size_t k = 0;
    std::size_t m = 0;
    std::vector<Edge> x_positions;
    std::vector<Edge> y_positions;
    Graph source_graph{1};
    VertexRelabeling relabeling;
};

/// Requires `matching` to be a maximum matching of `g`.
[[nodiscard]] inline SkewPattern build_pattern(const Graph& g, const Matching& matching) {
    if (!is_matching_of(g, matching.edges())) {
        throw DomainError("given edges are not a matching of the graph");
    }
    if (matching.size() != maximum_matching(g).size()) {
        throw DomainError("matching is not maximum; the trailing zero block would contain an edge");
    }
    SkewPattern p;
    p.n = g.n();
    p.k = matching.size();
    p.source_graph = g;
    p.relabeling = relabel_for_matching(g, matching);
    p.x_positions = p.relabeling.image_matching;

    const Graph relabeled = p.relabeling.apply(g);
    const auto boundary = static_cast<Vertex>(2 * p.k);
    for (const Edge& e : relabeled.edges()) {
        if (e.v == e.u + 1 && e.u % 2 == 1 && e.v <= boundary) {
            continue;  // x position
        }
        if (e.u > boundary) {
            throw DomainError("matching is not maximum; the trailing zero block would contain an edge");
        }
        p.y_positions.push_back(e);
    }
    p.m = p.y_positions.size();
    return p;
}

/// Real evaluation in relabeled coordinates.
[[nodiscard]] inline SkewMatrix evaluate_pattern(const SkewPattern& p, std::span<const double> x,
                                                 std::span<const double> y) {
    if (x.size() != p.k || y.size() != p.m) {
        throw DomainError("evaluation expects " + std::to_string(p.k) + " x values and " +
                          std::to_string(p.m) + " y values");
    }
    SkewMatrix a(p.n);
    for (std::size_t j = 0; j < p.k; ++j) {
        a.set(p.x_positions[j].u, p.x_positions[j].v, x[j]);
    }
    for (std::size_t l = 0; l < p.m; ++l) {
        a.set(p.y_positions[l].u, p.y_positions[l].v, y[l]);
    }
    return a;
}

// ---------------------------------------------------------------------------
// Spectra
// ---------------------------------------------------------------------------

struct SkewSpectrum {
    /// mu_1 >= ... >= mu_floor(n/2) >= 0; the spectrum is {+-i mu_j}, plus 0 for odd n.
    std::vector<double> positive_parts;
    /// Eigenvalues (full spectrum, both signs) at or below the zero threshold.
    std::size_t zero_count_numeric = 0;
    double threshold = 0.0;

    /// Number of nonzero eigenvalues, counting both signs.
    [[nodiscard]] std::size_t nonzero_count() const noexcept {
        return 2 * static_cast<std::size_t>(std::count_if(
                       positive_parts.begin(), positive_parts.end(),
                       [this](double mu) { return mu > threshold; }));
    }
};

struct SkewEigen {
    SkewSpectrum spectrum;
    /// Unit v_j with A v_j = i mu_j v_j, largest-magnitude entry real positive.
    std::vector<Eigen::VectorXcd> vectors;
};

/// Eigen-decomposition through the Hermitian matrix -iA, whose eigenvalue mu
/// corresponds to the eigenvalue i*mu of A with the same eigenvector.
[[nodiscard]] inline SkewEigen skew_eigen(const SkewMatrix& a, std::size_t vectors = 0) {
    const int n = a.n();
    const std::size_t half = static_cast<std::size_t>(n) / 2;
    if (vectors > half) {
        throw DomainError("at most floor(n/2) eigenvectors exist for positive parts");
    }
    const Eigen::MatrixXcd hermitian = a.dense().cast<std::complex<double>>() * std::complex<double>(0.0, -1.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(
        hermitian, vectors > 0 ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);

    const Eigen::VectorXd& ev = solver.eigenvalues();  // ascending
    SkewEigen out;
    auto& mu = out.spectrum.positive_parts;
    for (std::size_t j = 0; j < half; ++j) {
        // Pair the j-th largest with the j-th smallest.
        mu.push_back(0.5 * (ev(n - 1 - static_cast<Eigen::Index>(j)) - ev(static_cast<Eigen::Index>(j))));
    }
    out.spectrum.threshold = zero_threshold(mu.empty() ? 0.0 : mu.front());
    out.spectrum.zero_count_numeric = static_cast<std::size_t>(n % 2);
    for (double value : mu) {
        if (value <= out.spectrum.threshold) {
            out.spectrum.zero_count_numeric += 2;
        }
    }

    for (std::size_t j = 0; j < vectors; ++j) {
        Eigen::VectorXcd v = solver.eigenvectors().col(n - 1 - static_cast<Eigen::Index>(j));
        v.normalize();
        Eigen::Index pivot = 0;
        v.cwiseAbs().maxCoeff(&pivot);
        v *= std::conj(v(pivot)) / std::abs(v(pivot));
        v(pivot) = std::abs(v(pivot));
        out.vectors.push_back(std::move(v));
    }
    return out;
}

[[nodiscard]] inline SkewSpectrum skew_spectrum(const SkewMatrix& a) {
    return skew_eigen(a).spectrum;
}

/// Number of singular values above tol * n * sigma_max.
[[nodiscard]] inline std::size_t rank_numeric(const SkewMatrix& a, double tol = kRankRelTol) {
    if (!(tol > 0.0)) {
        throw DomainError("rank tolerance must be positive");
    }
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(a.dense());
    const Eigen::VectorXd& sigma = svd.singularValues();
    if (sigma.size() == 0 || sigma(0) == 0.0) {
        return 0;
    }
    const double cut = tol * a.n() * sigma(0);
    return static_cast<std::size_t>((sigma.array() > cut).count());
}

// ---------------------------------------------------------------------------
// Exact rank
// ---------------------------------------------------------------------------

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Rank by fraction-free (Bareiss) elimination with row pivoting. Every
/// division is exact, so any integral domain type works.
template <typename Integer>
[[nodiscard]] std::size_t bareiss_rank(std::vector<std::vector<Integer>> rows) {
    const std::size_t row_count = rows.size();
    const std::size_t col_count = row_count == 0 ? 0 : rows.front().size();
    std::size_t rank = 0;
    Integer previous = 1;
    for (std::size_t col = 0; col < col_count && rank < row_count; ++col) {
        std::size_t pivot = rank;
        while (pivot < row_count && rows[pivot][col] == 0) {
            ++pivot;
        }
        if (pivot == row_count) {
            continue;
        }
        std::swap(rows[pivot], rows[rank]);
        const Integer& p = rows[rank][col];
        for (std::size_t i = rank + 1; i < row_count; ++i) {
            for (std::size_t j = col + 1; j < col_count; ++j) {
                rows[i][j] = (rows[i][j] * p - rows[i][col] * rows[rank][j]) / previous;
            }
            rows[i][col] = 0;
        }
        previous = p;
        ++rank;
    }
    return rank;
}

/// Exact rank of a rational matrix: rows are cleared of denominators first.
[[nodiscard]] inline std::size_t rank_exact_rational(const std::vector<std::vector<Rational>>& rows) {
    std::vector<std::vector<BigInt>> integral;
    integral.reserve(rows.size());
    for (const auto& row : rows) {
        BigInt scale = 1;
        for (const Rational& q : row) {
            scale = boost::multiprecision::lcm(scale, BigInt(boost::multiprecision::denominator(q)));
        }
        std::vector<BigInt> out;
        out.reserve(row.size());
        for (const Rational& q : row) {
            out.push_back(boost::multiprecision::numerator(q) * (scale / boost::multiprecision::denominator(q)));
        }
        integral.push_back(std::move(out));
    }
    return bareiss_rank(std::move(integral));
}

/// The exact rational value of a finite double.
[[nodiscard]] inline Rational exact_rational(double value) {
    if (!std::isfinite(value)) {
        throw DomainError("non-finite matrix entry has no rational value");
    }
    if (value == 0.0) {
        return Rational(0);
    }
    int exponent = 0;
    const double fraction = std::frexp(value, &exponent);  // value = fraction * 2^exponent
    const auto mantissa = static_cast<std::int64_t>(std::ldexp(fraction, 53));
    exponent -= 53;
    Rational q(mantissa);
    if (exponent > 0) {
        q *= Rational(BigInt(1) << exponent);
    } else if (exponent < 0) {
        q /= Rational(BigInt(1) << -exponent);
    }
    return q;
}

/// Exact rank of a double-valued skew matrix, each entry read as the rational
/// it represents exactly.
[[nodiscard]] inline std::size_t rank_exact_rational(const SkewMatrix& a) {
    std::vector<std::vector<Rational>> rows(static_cast<std::size_t>(a.n()));
    for (int i = 1; i <= a.n(); ++i) {
        for (int j = 1; j <= a.n(); ++j) {
            rows[i - 1].push_back(exact_rational(a(i, j)));
        }
    }
    return rank_exact_rational(rows);
}

// ---------------------------------------------------------------------------
// Maximum skew rank
// ---------------------------------------------------------------------------

namespace detail {

/// Uniform double in [0, 1) from the top 53 bits.
inline double unit_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Generator for sample `index` of a run keyed by `seed`.
inline std::mt19937_64 sample_rng(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    return std::mt19937_64(seq);
}

} // namespace detail

/// Matrix with graph exactly `g`: magnitudes uniform in [1, 2], random signs.
[[nodiscard]] inline SkewMatrix random_evaluation(const Graph& g, std::mt19937_64& rng) {
    SkewMatrix a(g.n());
    for (const Edge& e : g.edges()) {
        const double magnitude = 1.0 + detail::unit_uniform(rng);
        a.set(e.u, e.v, (rng() >> 63) ? -magnitude : magnitude);
    }
    return a;
}

struct MaxRankResult {
    /// 2 * match(G).
    std::size_t certified = 0;
    /// Largest numeric rank over the random samples.
    std::size_t sampled = 0;
};

[[nodiscard]] inline MaxRankResult max_skew_rank(const Graph& g, std::size_t samples = 20,
                                                 std::uint64_t seed = 0) {
    MaxRankResult out;
    out.certified = 2 * maximum_matching(g).size();
    for (std::size_t s = 0; s < samples; ++s) {
        auto rng = detail::sample_rng(seed, s);
        out.sampled = std::max(out.sampled, rank_numeric(random_evaluation(g, rng)));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Eigenvalue derivatives
// ---------------------------------------------------------------------------

/// d mu_j / dt of A + t(E_rs - E_sr) at t = 0, which is 2 Im(conj(v_r) v_s)
/// for a unit eigenvector v of the eigenvalue i mu_j. r, s are 1-based.
[[nodiscard]] inline double eigenvalue_derivative(const SkewMatrix& a, const Eigen::VectorXcd& v,
                                                  int r, int s) {
    if (v.size() != a.n()) {
        throw DomainError("eigenvector length does not match matrix order");
    }
    if (r == s || r < 1 || s < 1 || r > a.n() || s > a.n()) {
        throw DomainError("derivative position must be two distinct indices in range");
    }
    if (std::abs(v.norm() - 1.0) > 1e-8) {
        throw DomainError("eigenvector is not unit length");
    }
    return 2.0 * (std::conj(v(r - 1)) * v(s - 1)).imag();
}

/// J(j, l) = d mu_j / d x_l at M(x, y). Throws when mu_1..mu_k are not
/// simple, nonzero and separated by at least gap_tol relative.
[[nodiscard]] inline Eigen::MatrixXd jacobian_x(const SkewPattern& p, std::span<const double> x,
                                                std::span<const double> y, double gap_tol = kGapRelTol) {
    const SkewMatrix a = evaluate_pattern(p, x, y);
    const auto k = static_cast<Eigen::Index>(p.k);
    Eigen::MatrixXd jac(k, k);
    if (k == 0) {
        return jac;
    }
    const SkewEigen eig = skew_eigen(a, p.k);
    const auto& mu = eig.spectrum.positive_parts;
    for (std::size_t j = 0; j < p.k; ++j) {
        const double below = j + 1 < mu.size() ? mu[j + 1] : 0.0;
        if (!(mu[j] > eig.spectrum.threshold) || mu[j] - below <= gap_tol * mu[j]) {
            throw DomainError("Jacobian unreliable: positive parts clustered or vanishing near index " +
                              std::to_string(j + 1));
        }
    }
    for (Eigen::Index j = 0; j < k; ++j) {
        for (Eigen::Index l = 0; l < k; ++l) {
            const Edge pos = p.x_positions[static_cast<std::size_t>(l)];
            jac(j, l) = eigenvalue_derivative(a, eig.vectors[static_cast<std::size_t>(j)], pos.u, pos.v);
        }
    }
    return jac;
}

} // namespace skewmatch

#endif // SKEWMATCH_SKEW_HPP
