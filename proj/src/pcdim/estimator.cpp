#include "pcdim/estimator.hpp"

#include <algorithm>
#include <atomic>

#include "pcdim/threading.hpp"

namespace {

bool is_degenerate_code(pcdim::Status s) {
  return s == pcdim::Status::ZeroVariance || s == pcdim::Status::DegenerateVariance;
}

}  // namespace

namespace pcdim {

PValueSequence pvalue_sequence(const ResidualLengths& R, SkewTestKind kind) {
  const std::size_t n = R.table.rows();
  require(R.table.cols() >= 1, Status::InvalidArgument, "empty residual table");
  const std::size_t M = R.table.cols() - 1;
  const std::size_t floor = kind == SkewTestKind::DAgostino ? 8 : 10;
  require(n >= floor, Status::TooFewObservations,
          "test needs at least " + std::to_string(floor) + " observations");

  PValueSequence P;
  P.kind = kind;
  P.M = M;
  P.p.assign(M + 1, 0.5);
  P.skewness.assign(M + 1, 0.0);
  P.statistic.assign(M + 1, 0.0);
  P.degenerate.assign(M + 1, 0);
  std::atomic<bool> warn{false};

  parallel_for(M + 1, [&](std::size_t k) {
    std::vector<double> col(n);
    for (std::size_t j = 0; j < n; ++j) col[j] = R.table(j, k);
    try {
      TestResult t = kind == SkewTestKind::DAgostino ? dagostino_test_right(col)
                                                     : triples_test_right(col);
      P.p[k] = t.p_right;
      P.statistic[k] = t.statistic;
      if (t.degenerate) P.degenerate[k] = 1;
      if (t.small_sample_warning) warn.store(true, std::memory_order_relaxed);
    } catch (const Error& e) {
      if (!is_degenerate_code(e.code())) throw;
      P.p[k] = 0.5;
      P.degenerate[k] = 1;
    }
    try {
      P.skewness[k] = sample_skewness(col);
    } catch (const Error& e) {
      if (!is_degenerate_code(e.code())) throw;
      P.skewness[k] = 0.0;
      P.degenerate[k] = 1;
    }
  });
  P.small_sample_warning = warn.load();
  return P;
}

Estimate estimate_m(const PValueSequence& P, double alpha) {
  require(alpha > 0.0 && alpha < 1.0, Status::InvalidArgument, "alpha must lie in (0,1)");
  require(P.p.size() == P.M + 1, Status::InvalidArgument, "inconsistent p-value sequence");
  Estimate E;
  E.alpha = alpha;
  E.pvalues = P;
  E.m_hat = P.M;
  E.saturated = true;
  for (std::size_t k = 0; k <= P.M; ++k) {
    if (P.p[k] > alpha) {
      E.m_hat = k;
      E.saturated = false;
      break;
    }
  }
  return E;
}

Estimate estimate_from_data(const DataMatrix& X, const EstimatorConfig& cfg) {
  DataMatrix W = X;
  if (cfg.center) W = center_columns(W);
  if (cfg.standardize) W = standardize_columns(W);
  const std::size_t n = W.n(), d = W.d();
  std::size_t M = cfg.m_max;
  if (M == kAutoM) M = std::min({n - 2, d, std::size_t{30}});
  const std::size_t cap = cfg.center ? n - 2 : n - 1;
  require(M <= cap, Status::InvalidArgument,
          "m_max must not exceed " + std::to_string(cap) + " for n = " + std::to_string(n));

  GramPipeline pipe = run_gram_pipeline(W, M);
  PValueSequence P = pvalue_sequence(pipe.residuals, cfg.kind);
  Estimate E = estimate_m(P, cfg.alpha);
  E.n = n;
  E.d = d;
  E.sample_eigenvalues.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    E.sample_eigenvalues[i] = pipe.eigen.eigenvalues[i] / static_cast<double>(n);
  return E;
}

std::vector<Estimate> alpha_sweep(const PValueSequence& P, const std::vector<double>& alphas) {
  std::vector<Estimate> out;
  out.reserve(alphas.size());
  for (double a : alphas) out.push_back(estimate_m(P, a));
  return out;
}

}  // namespace pcdim
