#pragma once

// Shared fixtures and independent oracles for the unit and acceptance suites.
// Nothing here calls into the solvers under test.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "spm/spm.hpp"

namespace spm::testing {

// ---------------------------------------------------------------------------
// Linear algebra oracles

/// Plain power iteration on a dense symmetric matrix, written independently
/// of the library (own storage, own loop, own stopping rule).
struct OracleEigen {
    std::vector<double> vector;
    double value = 0.0;
};

inline OracleEigen oracle_power(const std::vector<std::vector<double>>& m, int max_iter = 200000) {
    const std::size_t n = m.size();
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = 1.0 + 0.01 * static_cast<double>((i * 7) % 5);
    double nx = 0.0;
    for (double v : x) nx += v * v;
    for (double& v : x) v /= std::sqrt(nx);
    double lambda = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = 0.0;
            for (std::size_t j = 0; j < n; ++j) y[i] += m[i][j] * x[j];
        }
        double ny = 0.0;
        for (double v : y) ny += v * v;
        ny = std::sqrt(ny);
        if (ny == 0.0) break;
        double diff = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            y[i] /= ny;
            diff = std::max(diff, std::abs(y[i] - x[i]));
        }
        lambda = ny;
        std::swap(x, y);
        if (diff < 1e-15) break;
    }
    return {x, lambda};
}

/// Cyclic Jacobi rotations: all eigenvalues of a symmetric matrix, descending.
inline std::vector<double> jacobi_eigenvalues(std::vector<std::vector<double>> a) {
    const std::size_t n = a.size();
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += a[i][j] * a[i][j];
        if (off < 1e-30) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::abs(a[p][q]) < 1e-300) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = a[i][i];
    std::sort(ev.rbegin(), ev.rend());
    return ev;
}

inline std::vector<std::vector<double>> to_nested(const Matrix& m) {
    std::vector<std::vector<double>> out(m.rows(), std::vector<double>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
    return out;
}

/// Textbook product Lᵀ·L, element by element.
inline std::vector<std::vector<double>> gram(const Matrix& L) {
    const std::size_t n = L.cols();
    std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < L.rows(); ++k) a[i][j] += L(k, i) * L(k, j);
    return a;
}

inline double abs_cosine(const std::vector<double>& a, const std::vector<double>& b) {
    double ab = 0.0, aa = 0.0, bb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ab += a[i] * b[i];
        aa += a[i] * a[i];
        bb += b[i] * b[i];
    }
    return std::abs(ab) / std::sqrt(aa * bb);
}

/// Random PSD matrix BᵀB with B of shape (m × n), entries uniform in [-1, 1].
inline Matrix random_psd(std::mt19937_64& rng, std::size_t n) {
    std::uniform_int_distribution<std::size_t> rows(1, n + 3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const std::size_t m = rows(rng);
    Matrix B(m, n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) B(i, j) = u(rng);
    return B.transpose() * B;
}

/// Random non-negative link matrix with roughly `density` non-zero entries.
inline Matrix random_link_matrix(std::mt19937_64& rng, std::size_t n, double density = 0.4) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> w(1, 9);
    Matrix L(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (u(rng) < density) L(i, j) = w(rng);
    if (L.sum() == 0.0) L(0, n > 1 ? 1 : 0) = 1.0;
    return L;
}

// ---------------------------------------------------------------------------
// Transcribed ranking tables (top-10 node labels per cycle)

// The second authority column lists "PR_k3" at rank 1; no PR role exists and
// RP_k3 is the only reading consistent with the text, so it is corrected here.
inline const std::vector<std::string>& authority_top10(int cycle) {
    static const std::vector<std::vector<std::string>> cols{
        {"RP_k3", "LP_s27", "RP_s11", "LP_s23", "RP_s15", "BV_s23", "RP_s14", "LP_k3", "P_k3", "RP_s17"},
        {"RP_k3", "RP_s15", "LP_k3", "LP_s27", "RP_s11", "LP_s23", "LP_s21", "RP_s14", "SV_s14", "P_k1"},
        {"RP_s11", "RP_k3", "LP_k3", "LP_s27", "RP_s15", "LP_s21", "LP_s22", "SV_k3", "BV_s12", "P_k3"},
    };
    return cols.at(static_cast<std::size_t>(cycle - 1));
}

inline const std::vector<std::string>& hub_top10(int cycle) {
    static const std::vector<std::vector<std::string>> cols{
        {"RP_s11", "P_k3", "LP_s21", "RP_k3", "LP_k3", "LP_s27", "SV_s14", "LP_s22", "RP_s15", "RP_s17"},
        {"RP_s11", "LP_k3", "RP_s14", "RP_k3", "LP_s27", "P_k3", "LP_s22", "LP_s21", "RP_s15", "SV_s14"},
        {"RP_k3", "RP_s11", "LP_k3", "LP_s27", "P_k3", "LP_s21", "LP_s23", "RP_s14", "BV_k3", "SV_k3"},
    };
    return cols.at(static_cast<std::size_t>(cycle - 1));
}

// ---------------------------------------------------------------------------
// Event fixtures

inline const Timestamp kOrigin = parse_timestamp("2024/08/15/10:00:00");

inline Timestamp at(double seconds) { return Timestamp{kOrigin.micros + std::llround(seconds * 1e6)}; }

inline DetectionSample sample(double t, Rect box, std::string track = "1", std::string cls = "worker-right",
                              std::string camera = "cam1") {
    return {std::move(camera), at(t), std::move(cls), std::move(track), box};
}

inline ZoneSpec zone(std::string id, Rect box, std::string camera = "cam1") {
    return {std::move(id), std::move(camera), box, "s"};
}

inline EventRecord single(std::string location, std::string entity, std::string property, Timestamp t) {
    return {{{std::move(location), {{std::move(entity), std::move(property)}}}}, t};
}

/// Three scripted production cycles, anchored on the worker starting at k1.
/// Cycle times are 510 s, 504 s and 638 s. The first two cycles circulate
/// over many nodes; the third piles repeated work onto one station.
inline EventLog three_cycle_log() {
    EventLog log{"cell", {}};
    const auto push = [&](double t, const std::string& loc, const std::string& ent, const std::string& prop) {
        log.records.push_back(single(loc, ent, prop, at(t)));
    };
    const std::vector<std::pair<std::string, std::string>> tour{
        {"s11", "worker-right"}, {"s21", "worker-left"}, {"s14", "worker-right"}, {"k2", "big-AGV"},
        {"s23", "worker-left"},  {"s15", "worker-right"}, {"k3", "small-AGV"}, {"s27", "worker-left"},
        {"s12", "big-AGV"},     {"s22", "worker-left"}};
    const auto entity_of = [](const std::string& prop) {
        if (prop == "worker-right") return std::string("W1");
        if (prop == "worker-left") return std::string("W2");
        if (prop == "big-AGV") return std::string("V1");
        return std::string("V2");
    };

    // Cycle 1: two passes over the tour with a few detours, anchors at 0 and 510.
    double t = 0.0;
    push(t, "k1", "W1", "worker-right");
    for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t i = 0; i < tour.size(); ++i) {
            t += 20.0;
            push(t, tour[i].first, entity_of(tour[i].second), tour[i].second);
            if ((i + static_cast<std::size_t>(pass)) % 3 == 0) {
                t += 4.0;
                const auto& d = tour[(i * 3 + 1) % tour.size()];
                push(t, d.first, entity_of(d.second), d.second);
            }
        }
    }
    // Cycle 2 starts at 510 s and runs 504 s.
    t = 510.0;
    push(t, "k1", "W1", "worker-right");
    for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t i = 0; i < tour.size(); ++i) {
            const auto& s = tour[(i * 7 + static_cast<std::size_t>(pass) * 3) % tour.size()];
            t += 21.0;
            push(t, s.first, entity_of(s.second), s.second);
            if (i % 4 == 1) {
                t += 3.0;
                const auto& d = tour[(i + 5) % tour.size()];
                push(t, d.first, entity_of(d.second), d.second);
            }
        }
    }
    // Cycle 3 starts at 1014 s and its last record lands at 1014 + 638 s.
    t = 1014.0;
    push(t, "k1", "W1", "worker-right");
    for (int i = 0; i < 24; ++i) {
        t += 25.0;
        push(t, "k3", "W1", "worker-right");
        if (i % 8 == 7) {
            t += 1.0;
            push(t, "s11", "W2", "worker-left");
        }
    }
    push(1014.0 + 638.0, "s27", "W2", "worker-left");
    return log;
}

inline std::map<std::string, std::string> cell_roles() {
    return {{"worker-right", "RP"}, {"worker-left", "LP"}, {"big-AGV", "BV"}, {"small-AGV", "SV"}, {"person", "P"}};
}

}  // namespace spm::testing
