#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pcdim/baselines.hpp"
#include "pcdim/estimator.hpp"
#include "pcdim/rng.hpp"

namespace pcdim {

enum class Distribution { StandardNormal, StudentT3 };

// Population eigenvalues: m spikes sigma_i^2 d with sigma_i^2 = s^2 (1 + g(m-i)),
// then a tail tau_beta i^(-beta) normalized so the tail mean is exactly 1.
struct EigenModel {
  std::vector<double> lambdas;
  std::size_t m = 0;
  double s = 0.0, g = 0.0, beta = 0.0;
  double tau_beta = 1.0;
};

// Standardized component scores; z(j, i) is component i of observation j.
struct ScorePanel {
  Matrix z;
  Distribution distribution = Distribution::StandardNormal;
  std::uint64_t seed = 0;
  std::uint32_t replicate = 0;
};

struct EstimatorSet {
  bool dagostino = true;
  bool triples = false;
  bool bai_ng = false;
  bool kritchman_nadler = false;
};

struct SimSpec {
  std::size_t d = 10000, n = 100, m = 0;
  double s = 0.2, g = 1.0, beta = 0.0;
  Distribution distribution = Distribution::StandardNormal;
  std::uint64_t seed = 1;
  std::size_t replicates = 1;
  double alpha = 0.1;
  double kn_alpha = 0.05;
  EstimatorSet estimators;
  std::size_t M = kAutoM;
};

inline constexpr std::size_t kNotRun = static_cast<std::size_t>(-1);

struct ReplicateRecord {
  std::size_t index = 0;
  bool failed = false;
  std::string error;
  std::size_t m_dagostino = kNotRun;
  std::size_t m_triples = kNotRun;
  std::size_t m_bai_ng = kNotRun;
  std::size_t m_kritchman_nadler = kNotRun;
  std::vector<double> p_dagostino;  // length M+1 when run
  std::vector<double> p_triples;
  std::vector<double> skewness;     // b1 of residual columns 0..M
};

struct MethodSummary {
  std::string method;
  double mean = 0.0;
  double stderr_of_mean = 0.0;
  std::vector<std::size_t> histogram;  // index = m_hat, over successful replicates
};

struct SimSummary {
  SimSpec spec;
  std::size_t resolved_M = 0;
  std::vector<ReplicateRecord> replicates;
  std::vector<MethodSummary> methods;
  std::size_t failure_count = 0;
};

struct TrueResiduals {
  ResidualLengths tilde;  // population-eigenvector residual lengths
  Matrix a;               // sample-minus-true gap per (observation, order)
};

struct GramLimitReport {
  double max_deviation = 0.0;          // over all entries of S_D minus its limit
  double max_offdiag_deviation = 0.0;
  std::vector<double> studentized_diag;
  double tau2 = 0.0;
  double upsilon_D = 0.0;  // diagonal-deviation scale
  double upsilon_O = 0.0;  // off-diagonal-deviation scale
};

struct RotationReport {
  double max_residual = 0.0;              // What1^T vs W1^T R S, sign-aligned
  std::vector<double> column_residuals;   // per spike column
  double noise_second_moment = 0.0;       // mean of mu_k/d over k in (m, n]
  double tau2 = 0.0;
};

EigenModel eigen_model(std::size_t d, std::size_t m, double s, double g, double beta);

ScorePanel sample_scores(const SimSpec& spec, std::uint32_t replicate_index);

DataMatrix synth_data(const EigenModel& model, const ScorePanel& Z);

// Deterministic orthogonal matrix for the small-dimension rotated mode.
Matrix random_orthogonal(std::size_t d, std::uint64_t seed);

// Same data expressed in rotated coordinates; d < 200 only. The Gram matrix
// is unchanged, which the invariance tests rely on.
DataMatrix synth_data_rotated(const EigenModel& model, const ScorePanel& Z, std::uint64_t seed);

TrueResiduals true_residuals(const EigenModel& model, const ScorePanel& Z, std::size_t M);

SimSummary run_replicates(const SimSpec& spec);

GramLimitReport gram_limit_check(const EigenModel& model, const ScorePanel& Z);

RotationReport score_rotation_check(const EigenModel& model, const ScorePanel& Z);

}  // namespace pcdim
