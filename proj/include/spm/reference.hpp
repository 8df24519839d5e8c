#pragma once

// The two small weighted networks used to compare the ranking algorithms:
// three nodes (two strongly self-looped and weakly coupled, one isolated
// self-loop) and the same with a fourth node bridging into the third.

#include <string>
#include <vector>

#include "spm/matrix.hpp"
#include "spm/ranking.hpp"

namespace spm::reference {

inline Matrix link_matrix_3() {
    return Matrix{{1.01, 0.01, 0.00},  //
                  {0.01, 1.00, 0.00},
                  {0.00, 0.00, 0.90}};
}

inline Matrix link_matrix_4() {
    return Matrix{{1.01, 0.01, 0.00, 0.01},  //
                  {0.01, 1.00, 0.00, 0.02},
                  {0.00, 0.00, 0.90, 1.00},
                  {0.01, 0.01, 0.02, 0.05}};
}

struct ScoreColumn {
    std::string name;
    std::vector<double> scores;  // squared convention
};

/// Gradient, HITS_PM_Norm (α = 0.8, 0.3) and PageRank_Norm (α = 0.8) scores of L.
inline std::vector<ScoreColumn> score_table(const Matrix& L) {
    return {
        {"gradient", gradient_rank(L, MatrixKind::authority).scores},
        {"hits_pm_norm(0.8)", hits_pm_norm(L, 0.8, MatrixKind::authority).scores},
        {"hits_pm_norm(0.3)", hits_pm_norm(L, 0.3, MatrixKind::authority).scores},
        {"pagerank_norm(0.8)", pagerank_norm(L, 0.8).scores},
    };
}

}  // namespace spm::reference
