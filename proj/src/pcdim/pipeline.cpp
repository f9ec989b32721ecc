#include "pcdim/pipeline.hpp"

#include <cmath>

namespace pcdim {

ScoreMatrix pc_scores(const EigenSystem& E, std::size_t M) {
  const std::size_t n = E.eigenvalues.size();
  require(M < n, Status::InvalidArgument, "M must be below n");
  if (M > 0) {
    require(E.eigenvalues[M - 1] > 1e-12 * E.eigenvalues[0], Status::RankDeficient,
            "requested components exceed numerical rank");
  }
  ScoreMatrix W;
  W.scores = Matrix(n, M);
  for (std::size_t i = 0; i < M; ++i) {
    const double root = std::sqrt(E.eigenvalues[i]);
    for (std::size_t j = 0; j < n; ++j) W.scores(j, i) = root * E.eigenvectors(j, i);
  }
  return W;
}

ResidualLengths residual_lengths(const Matrix& G, const ScoreMatrix& W, std::size_t d,
                                 std::size_t M) {
  const std::size_t n = G.rows();
  require(M < n, Status::InvalidArgument, "M must be below n");
  require(W.scores.cols() >= M, Status::InvalidArgument, "score matrix narrower than M");
  ResidualLengths R;
  R.d = d;
  R.table = Matrix(n, M + 1);
  const double dd = static_cast<double>(d);
  for (std::size_t j = 0; j < n; ++j) {
    double remaining = G(j, j);
    R.table(j, 0) = remaining / dd;
    for (std::size_t k = 1; k <= M; ++k) {
      const double w = W.scores(j, k - 1);
      remaining -= w * w;
      double value = remaining / dd;
      if (value < 0.0) {
        require(value >= -1e-10, Status::RankDeficient, "residual below roundoff band");
        value = 0.0;
      }
      R.table(j, k) = value;
    }
  }
  return R;
}

GramPipeline run_gram_pipeline(const DataMatrix& X, std::size_t M) {
  GramPipeline P;
  P.G = gram(X);
  P.eigen = gram_eigen(P.G);
  P.scores = pc_scores(P.eigen, M);
  P.residuals = residual_lengths(P.G, P.scores, X.d(), M);
  return P;
}

}  // namespace pcdim
