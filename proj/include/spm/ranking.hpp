#pragma once

// Spectral node ranking on a link matrix L.
//
//  * gradient       dominant eigenvector of A = LᵀL (or H = LLᵀ) by Rayleigh-
//                   quotient ascent on the unit sphere. Each step maximizes the
//                   quotient exactly over span{x, r}, r the residual, so the
//                   step length comes in closed form and there is nothing to tune.
//  * hits_pm_norm   power method on αA + ((1-α)/n)·11ᵀ with L2 renormalization.
//  * pagerank_norm  power method on αS + ((1-α)/n)·11ᵀ, S the column-stochastic
//                   normalization of L, with L2 renormalization.
//
// Reported scores follow a convention: `squared` (components of the unit
// eigenvector squared, summing to 1), `raw` (the unit eigenvector itself) or
// `l1` (non-negative, rescaled to sum 1).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <iterator>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <fmt/format.h>

#include "spm/error.hpp"
#include "spm/matrix.hpp"
#include "spm/procnet.hpp"

namespace spm {

enum class Algorithm { gradient, hits_pm_norm, pagerank_norm };
enum class MatrixKind { authority, hub, stochastic };
enum class Convention { squared, raw, l1 };

inline constexpr std::size_t kMaxIterations = 100000;
inline constexpr double kDefaultTolerance = 1e-12;
inline constexpr double kStepTolerance = 1e-12;

inline std::string_view to_string(Algorithm a) {
    switch (a) {
        case Algorithm::gradient: return "gradient";
        case Algorithm::hits_pm_norm: return "hits_pm_norm";
        case Algorithm::pagerank_norm: return "pagerank_norm";
    }
    return "?";
}

inline std::string_view to_string(MatrixKind k) {
    switch (k) {
        case MatrixKind::authority: return "authority";
        case MatrixKind::hub: return "hub";
        case MatrixKind::stochastic: return "stochastic";
    }
    return "?";
}

inline std::string_view to_string(Convention c) {
    switch (c) {
        case Convention::squared: return "squared";
        case Convention::raw: return "raw";
        case Convention::l1: return "l1";
    }
    return "?";
}

inline Algorithm parse_algorithm(std::string_view s) {
    if (s == "gradient") return Algorithm::gradient;
    if (s == "hits_pm_norm" || s == "hits") return Algorithm::hits_pm_norm;
    if (s == "pagerank_norm" || s == "pagerank") return Algorithm::pagerank_norm;
    throw DomainError(fmt::format("unknown algorithm '{}'", s));
}

inline MatrixKind parse_kind(std::string_view s) {
    if (s == "authority") return MatrixKind::authority;
    if (s == "hub") return MatrixKind::hub;
    if (s == "stochastic") return MatrixKind::stochastic;
    throw DomainError(fmt::format("unknown matrix kind '{}'", s));
}

inline Convention parse_convention(std::string_view s) {
    if (s == "squared") return Convention::squared;
    if (s == "raw") return Convention::raw;
    if (s == "l1") return Convention::l1;
    throw DomainError(fmt::format("unknown convention '{}'", s));
}

/// Symmetric matrix, checked on construction.
class SymmetricMatrix {
public:
    static constexpr double kSymmetryTolerance = 1e-12;

    explicit SymmetricMatrix(Matrix m) : m_(std::move(m)) {
        if (!m_.square()) throw DomainError("matrix is not square");
        const double scale = std::max(1.0, m_.frobenius_norm());
        if (!m_.is_symmetric(kSymmetryTolerance * scale)) throw DomainError("matrix is not symmetric");
        for (std::size_t i = 0; i < m_.rows(); ++i) {
            for (std::size_t j = i + 1; j < m_.cols(); ++j) {
                const double avg = 0.5 * (m_(i, j) + m_(j, i));
                m_(i, j) = avg;
                m_(j, i) = avg;
            }
        }
    }

    [[nodiscard]] const Matrix& matrix() const noexcept { return m_; }
    [[nodiscard]] std::size_t size() const noexcept { return m_.rows(); }
    double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

private:
    Matrix m_;
};

inline SymmetricMatrix authority_matrix(const Matrix& L) {
    if (!L.square()) throw DomainError("link matrix must be square");
    return SymmetricMatrix(L.transpose() * L);
}

inline SymmetricMatrix hub_matrix(const Matrix& L) {
    if (!L.square()) throw DomainError("link matrix must be square");
    return SymmetricMatrix(L * L.transpose());
}

struct EigenResult {
    std::vector<double> vector;  // unit length, largest-magnitude component positive
    double eigenvalue = 0.0;
    std::size_t iterations = 0;
    double residual = 0.0;       // ‖Mx − λx‖
};

namespace detail {

// All-ones direction with a small deterministic tilt so the start is not
// exactly orthogonal to a dominant eigenvector of sign-mixed matrices.
inline std::vector<double> start_vector(std::size_t n) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double golden = 0.6180339887498949 * static_cast<double>(i);
        x[i] = 1.0 + 0.1 * (golden - std::floor(golden));
    }
    normalize(std::span<double>(x));
    return x;
}

inline void fix_sign(std::vector<double>& v) {
    std::size_t arg = 0;
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (std::abs(v[i]) > std::abs(v[arg])) arg = i;
    }
    if (!v.empty() && v[arg] < 0.0) {
        for (double& c : v) c = -c;
    }
}

inline double residual_norm(const Matrix& m, std::span<const double> x, double& rayleigh) {
    const auto mx = m * x;
    rayleigh = dot(std::span<const double>(mx), x);
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = mx[i] - rayleigh * x[i];
        s += r * r;
    }
    return std::sqrt(s);
}

// Power method with L2 renormalization. Stops when the iterate moves less than
// kStepTolerance or the residual drops to `tol`.
inline EigenResult power_iteration(const Matrix& m, double tol) {
    const std::size_t n = m.rows();
    std::vector<double> x(n, 1.0 / std::sqrt(static_cast<double>(n)));
    std::vector<double> y(n);
    double rayleigh = 0.0;
    for (std::size_t it = 1; it <= kMaxIterations; ++it) {
        m.multiply(x, y);
        if (normalize(std::span<double>(y)) == 0.0) throw ConvergenceError("power iteration hit the null space", 0.0);
        double change = 0.0;
        for (std::size_t i = 0; i < n; ++i) change += (y[i] - x[i]) * (y[i] - x[i]);
        x.swap(y);
        const double res = residual_norm(m, x, rayleigh);
        if (std::sqrt(change) <= kStepTolerance || res <= tol) {
            fix_sign(x);
            return {std::move(x), rayleigh, it, res};
        }
    }
    throw ConvergenceError(fmt::format("power iteration exceeded {} iterations", kMaxIterations),
                           residual_norm(m, x, rayleigh));
}

}  // namespace detail

/// Dominant eigenpair of a symmetric positive semidefinite matrix by
/// Rayleigh-quotient ascent with exact line search.
///
/// At unit x with quotient ρ and residual r = Sx − ρx (orthogonal to x), the
/// quotient restricted to span{x, d}, d = r/‖r‖, is the 2×2 symmetric form
/// [[ρ, ‖r‖], [‖r‖, dᵀSd]]. Its top eigenvector gives the maximizing step
/// x ← (x + t·d)/√(1 + t²) with t = (μ − ρ)/‖r‖, μ the larger 2×2 eigenvalue.
inline EigenResult grad_dominant_eigvec(const SymmetricMatrix& sym, double tol = kDefaultTolerance) {
    if (!(tol > 0.0)) throw DomainError(fmt::format("tolerance must be > 0, got {}", tol));
    const Matrix& S = sym.matrix();
    const std::size_t n = S.rows();
    if (n == 0) throw DomainError("empty matrix");

    std::vector<double> x = detail::start_vector(n);
    std::vector<double> sx(n), d(n), sd(n);
    double rho = 0.0;
    double beta = 0.0;
    for (std::size_t it = 0; it <= kMaxIterations; ++it) {
        S.multiply(x, sx);
        rho = dot(std::span<const double>(sx), std::span<const double>(x));
        for (std::size_t i = 0; i < n; ++i) d[i] = sx[i] - rho * x[i];
        beta = normalize(std::span<double>(d));
        if (beta <= tol) {
            detail::fix_sign(x);
            return {std::move(x), rho, it, beta};
        }
        if (it == kMaxIterations) break;

        S.multiply(d, sd);
        const double gamma = dot(std::span<const double>(sd), std::span<const double>(d));
        const double half = 0.5 * (rho - gamma);
        const double root = std::hypot(half, beta);
        const double lift = half > 0.0 ? beta * beta / (root + half) : root - half;  // μ − ρ, cancellation-free
        const double t = lift / beta;
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        double change = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double next = c * (x[i] + t * d[i]);
            change += (next - x[i]) * (next - x[i]);
            x[i] = next;
        }
        normalize(std::span<double>(x));
        if (std::sqrt(change) <= kStepTolerance) {
            const double res = detail::residual_norm(S, x, rho);
            detail::fix_sign(x);
            return {std::move(x), rho, it + 1, res};
        }
    }
    throw ConvergenceError(fmt::format("gradient ascent exceeded {} iterations", kMaxIterations), beta);
}

struct RankingResult {
    Algorithm algorithm = Algorithm::gradient;
    MatrixKind kind = MatrixKind::authority;
    std::optional<double> alpha;
    Convention convention = Convention::squared;
    std::vector<std::string> labels;
    std::vector<double> unit_vector;  // converged eigenvector, unit 2-norm
    std::vector<double> scores;       // unit_vector under `convention`
    double eigenvalue = 0.0;
    std::size_t iterations = 0;
    double residual = 0.0;
};

inline std::vector<double> apply_convention(std::span<const double> unit, Convention c) {
    std::vector<double> out(unit.begin(), unit.end());
    switch (c) {
        case Convention::raw: break;
        case Convention::squared:
            for (double& v : out) v *= v;
            break;
        case Convention::l1: {
            double s = 0.0;
            for (double& v : out) {
                v = std::abs(v);
                s += v;
            }
            if (s > 0.0) {
                for (double& v : out) v /= s;
            }
            break;
        }
    }
    return out;
}

inline void set_convention(RankingResult& r, Convention c) {
    r.convention = c;
    r.scores = apply_convention(r.unit_vector, c);
}

namespace detail {

inline std::vector<std::string> default_labels(std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(fmt::format("x{}", i + 1));
    return out;
}

inline Matrix teleport(const Matrix& m, double alpha) {
    const std::size_t n = m.rows();
    Matrix out = alpha * m;
    const double jump = (1.0 - alpha) / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) out(i, j) += jump;
    }
    return out;
}

inline RankingResult make_result(Algorithm a, MatrixKind k, std::optional<double> alpha, Convention c,
                                 std::vector<std::string> labels, EigenResult e) {
    RankingResult r;
    r.algorithm = a;
    r.kind = k;
    r.alpha = alpha;
    r.labels = std::move(labels);
    r.unit_vector = std::move(e.vector);
    r.eigenvalue = e.eigenvalue;
    r.iterations = e.iterations;
    r.residual = e.residual;
    set_convention(r, c);
    return r;
}

}  // namespace detail

inline RankingResult gradient_rank(const Matrix& L, MatrixKind kind, double tol = kDefaultTolerance,
                                   std::vector<std::string> labels = {}) {
    if (kind == MatrixKind::stochastic) throw DomainError("gradient ranking needs an authority or hub matrix");
    const auto S = kind == MatrixKind::authority ? authority_matrix(L) : hub_matrix(L);
    if (labels.empty()) labels = detail::default_labels(L.rows());
    return detail::make_result(Algorithm::gradient, kind, std::nullopt, Convention::squared, std::move(labels),
                               grad_dominant_eigvec(S, tol));
}

inline RankingResult hits_pm_norm(const Matrix& L, double alpha, MatrixKind kind, double tol = kDefaultTolerance,
                                  std::vector<std::string> labels = {}) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError(fmt::format("alpha must lie in (0, 1], got {}", alpha));
    if (kind == MatrixKind::stochastic) throw DomainError("HITS needs an authority or hub matrix");
    const auto S = kind == MatrixKind::authority ? authority_matrix(L) : hub_matrix(L);
    if (labels.empty()) labels = detail::default_labels(L.rows());
    return detail::make_result(Algorithm::hits_pm_norm, kind, alpha, Convention::squared, std::move(labels),
                               detail::power_iteration(detail::teleport(S.matrix(), alpha), tol));
}

/// Column-stochastic normalization of L; all-zero columns become uniform.
inline Matrix column_stochastic(const Matrix& L) {
    if (!L.square()) throw DomainError("link matrix must be square");
    const std::size_t n = L.rows();
    Matrix S(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double col = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (L(i, j) < 0.0) throw DomainError("link weights must be non-negative");
            col += L(i, j);
        }
        for (std::size_t i = 0; i < n; ++i) S(i, j) = col > 0.0 ? L(i, j) / col : 1.0 / static_cast<double>(n);
    }
    return S;
}

inline RankingResult pagerank_norm(const Matrix& L, double alpha, double tol = kDefaultTolerance,
                                   std::vector<std::string> labels = {}) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError(fmt::format("alpha must lie in (0, 1), got {}", alpha));
    if (labels.empty()) labels = detail::default_labels(L.rows());
    return detail::make_result(Algorithm::pagerank_norm, MatrixKind::stochastic, alpha, Convention::squared,
                               std::move(labels), detail::power_iteration(detail::teleport(column_stochastic(L), alpha), tol));
}

struct RankOptions {
    Algorithm algorithm = Algorithm::gradient;
    MatrixKind kind = MatrixKind::authority;
    double alpha = 0.8;
    Convention convention = Convention::squared;
    double tol = kDefaultTolerance;
};

inline RankingResult rank(const LinkMatrix& lm, const RankOptions& opt) {
    RankingResult r;
    switch (opt.algorithm) {
        case Algorithm::gradient: r = gradient_rank(lm.L, opt.kind, opt.tol, lm.labels); break;
        case Algorithm::hits_pm_norm: r = hits_pm_norm(lm.L, opt.alpha, opt.kind, opt.tol, lm.labels); break;
        case Algorithm::pagerank_norm: r = pagerank_norm(lm.L, opt.alpha, opt.tol, lm.labels); break;
    }
    set_convention(r, opt.convention);
    return r;
}

struct DispersionStats {
    double shannon_entropy = 0.0;
    double participation_ratio = 0.0;
    double max_score = 0.0;
};

/// Statistics of the squared-component distribution (l1 scores are used as-is).
inline DispersionStats dispersion(const RankingResult& r) {
    std::vector<double> p = r.convention == Convention::raw ? apply_convention(r.scores, Convention::squared) : r.scores;
    double total = 0.0;
    for (double v : p) total += v;
    DispersionStats st;
    if (total <= 0.0) return st;
    double sum_sq = 0.0;
    for (double& v : p) {
        v /= total;
        if (v > 0.0) st.shannon_entropy -= v * std::log(v);
        sum_sq += v * v;
    }
    st.participation_ratio = 1.0 / sum_sq;
    st.max_score = r.scores.empty() ? 0.0 : *std::max_element(r.scores.begin(), r.scores.end());
    return st;
}

struct RankedNodes {
    RankingResult result;
    std::vector<std::pair<std::string, double>> top;  // descending, ties by label
    DispersionStats stats;
};

/// Order of all nodes by score, descending; ties by label.
inline std::vector<std::pair<std::string, double>> ordered_scores(const RankingResult& r) {
    std::vector<std::pair<std::string, double>> out;
    for (std::size_t i = 0; i < r.scores.size(); ++i) out.emplace_back(r.labels[i], r.scores[i]);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    return out;
}

inline RankedNodes rank_nodes(const LinkMatrix& lm, const RankOptions& opt, std::size_t k) {
    if (k == 0) throw DomainError("k must be >= 1");
    RankedNodes out{rank(lm, opt), {}, {}};
    out.top = ordered_scores(out.result);
    if (out.top.size() > k) out.top.resize(k);
    out.stats = dispersion(out.result);
    return out;
}

inline RankedNodes rank_nodes(const ProcessNetwork& net, const RankOptions& opt, std::size_t k) {
    return rank_nodes(link_matrix(net), opt, k);
}

struct TopKComparison {
    std::set<std::string> common;
    std::set<std::string> only_a;
    std::set<std::string> only_b;
    double jaccard = 0.0;
};

inline TopKComparison compare_topk(std::span<const std::string> a, std::span<const std::string> b, std::size_t k) {
    if (k == 0 || k > a.size() || k > b.size()) {
        throw DomainError(fmt::format("k = {} must lie in [1, min({}, {})]", k, a.size(), b.size()));
    }
    const std::set<std::string> sa(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(k));
    const std::set<std::string> sb(b.begin(), b.begin() + static_cast<std::ptrdiff_t>(k));
    TopKComparison c;
    std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::inserter(c.common, c.common.end()));
    std::set_difference(sa.begin(), sa.end(), sb.begin(), sb.end(), std::inserter(c.only_a, c.only_a.end()));
    std::set_difference(sb.begin(), sb.end(), sa.begin(), sa.end(), std::inserter(c.only_b, c.only_b.end()));
    const std::size_t uni = c.common.size() + c.only_a.size() + c.only_b.size();
    c.jaccard = uni == 0 ? 1.0 : static_cast<double>(c.common.size()) / static_cast<double>(uni);
    return c;
}

}  // namespace spm
