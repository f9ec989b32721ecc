#pragma once

#include <cstdint>
#include <vector>

#include "pcdim/pipeline.hpp"
#include "pcdim/skew.hpp"

namespace pcdim {

enum class SkewTestKind { Triples, DAgostino };

// Sentinel for "pick the default hypothesis ceiling": min(n - 2, d, 30).
inline constexpr std::size_t kAutoM = static_cast<std::size_t>(-1);

// One-sided p-values p_k for H_0: column k of the residual table is not
// right-skewed, k = 0..M, plus per-column diagnostics.
struct PValueSequence {
  std::vector<double> p;
  SkewTestKind kind = SkewTestKind::DAgostino;
  std::size_t M = 0;
  std::vector<double> skewness;           // b1 of column k; 0 when degenerate
  std::vector<double> statistic;          // test statistic per column
  std::vector<std::uint8_t> degenerate;   // column had (near) zero variance
  bool small_sample_warning = false;
};

struct Estimate {
  std::size_t m_hat = 0;
  double alpha = 0.1;
  bool saturated = false;   // no p_k exceeded alpha up to M
  PValueSequence pvalues;
  std::vector<double> sample_eigenvalues;  // scree data, filled by estimate_from_data
  std::size_t n = 0;
  std::size_t d = 0;
};

struct EstimatorConfig {
  double alpha = 0.1;
  SkewTestKind kind = SkewTestKind::DAgostino;
  std::size_t m_max = kAutoM;
  bool center = false;
  bool standardize = false;
};

PValueSequence pvalue_sequence(const ResidualLengths& R, SkewTestKind kind);

// m_hat = min{k : p_k > alpha}; if none qualifies, m_hat = M and saturated.
Estimate estimate_m(const PValueSequence& P, double alpha);

Estimate estimate_from_data(const DataMatrix& X, const EstimatorConfig& cfg);

// One Estimate per alpha, reusing a single p-value sequence.
std::vector<Estimate> alpha_sweep(const PValueSequence& P, const std::vector<double>& alphas);

}  // namespace pcdim
