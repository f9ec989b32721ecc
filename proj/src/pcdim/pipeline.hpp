#pragma once

#include <cstddef>

#include "pcdim/jacobi.hpp"
#include "pcdim/matrix.hpp"

namespace pcdim {

// Entry (j, i) is the i-th sample score of observation j.
struct ScoreMatrix {
  Matrix scores;  // n x M
};

// Entry (j, k) is R_j(k), k = 0..M.
struct ResidualLengths {
  Matrix table;  // n x (M+1)
  std::size_t d = 0;
};

// Scores via the Gram route: score(j, i) = sqrt(mu_i) * a_ji where (mu_i, a_i)
// is the i-th Gram eigenpair. Requires mu_M > 1e-12 * mu_1.
ScoreMatrix pc_scores(const EigenSystem& E, std::size_t M);

// R_j(k) = (G_jj - sum_{i<k} score(j,i)^2) / d; tiny negatives clamp to 0.
ResidualLengths residual_lengths(const Matrix& G, const ScoreMatrix& W, std::size_t d,
                                 std::size_t M);

// gram -> eigen -> scores -> residuals in one call.
struct GramPipeline {
  Matrix G;
  EigenSystem eigen;
  ScoreMatrix scores;
  ResidualLengths residuals;
};

GramPipeline run_gram_pipeline(const DataMatrix& X, std::size_t M);

}  // namespace pcdim
