#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "pcdim/common.hpp"
#include "pcdim/estimator.hpp"
#include "vendor/doctest.h"

using namespace pcdim;

namespace {

PValueSequence sequence_of(const std::vector<double>& p) {
  PValueSequence P;
  P.p = p;
  P.M = p.size() - 1;
  P.skewness.assign(p.size(), 0.0);
  P.statistic.assign(p.size(), 0.0);
  P.degenerate.assign(p.size(), 0);
  return P;
}

ResidualLengths single_column(const std::vector<double>& values) {
  ResidualLengths R;
  R.d = 1000;
  R.table = Matrix(values.size(), 1);
  for (std::size_t j = 0; j < values.size(); ++j) R.table(j, 0) = values[j];
  return R;
}

void check_invariants(const Estimate& est) {
  if (!est.saturated) {
    CHECK(est.pvalues.p[est.m_hat] > est.alpha);
    for (std::size_t k = 0; k < est.m_hat; ++k) CHECK(est.pvalues.p[k] <= est.alpha);
  } else {
    CHECK(est.m_hat == est.pvalues.M);
    for (double p : est.pvalues.p) CHECK(p <= est.alpha);
  }
}

}  // namespace

TEST_CASE("estimate_m walks to the first acceptable order") {
  const Estimate est = estimate_m(sequence_of({0.001, 0.02, 0.8, 0.9}), 0.1);
  CHECK(est.m_hat == 2);
  CHECK_FALSE(est.saturated);
  check_invariants(est);
}

TEST_CASE("estimate_m accepts the global null immediately") {
  const Estimate est = estimate_m(sequence_of({0.5, 0.01, 0.02, 0.03}), 0.1);
  CHECK(est.m_hat == 0);
  CHECK_FALSE(est.saturated);
}

TEST_CASE("estimate_m saturates when nothing is acceptable") {
  const Estimate est = estimate_m(sequence_of({0.01, 0.02, 0.05, 0.1}), 0.1);
  CHECK(est.saturated);
  CHECK(est.m_hat == 3);
  check_invariants(est);
}

TEST_CASE("estimate_m validates alpha") {
  const PValueSequence P = sequence_of({0.5, 0.5});
  CHECK_THROWS_AS(estimate_m(P, 0.0), Error);
  CHECK_THROWS_AS(estimate_m(P, 1.0), Error);
  CHECK_THROWS_AS(estimate_m(P, -0.2), Error);
}

TEST_CASE("m_hat never decreases as alpha grows") {
  oracles::Rng rng(51);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> p(8);
    for (double& v : p) v = rng.uniform();
    const PValueSequence P = sequence_of(p);
    std::size_t prev = estimate_m(P, 0.01).m_hat;
    for (double alpha = 0.05; alpha < 1.0; alpha += 0.05) {
      const std::size_t cur = estimate_m(P, alpha).m_hat;
      CHECK(cur >= prev);
      prev = cur;
    }
  }
}

TEST_CASE("alpha_sweep is constant across a sharp transition") {
  const PValueSequence P = sequence_of({0.001, 0.003, 0.95, 0.99});
  const std::vector<double> alphas = {0.05, 0.1, 0.3, 0.5, 0.7, 0.9};
  const std::vector<Estimate> sweep = alpha_sweep(P, alphas);
  CHECK(sweep.size() == alphas.size());
  for (const Estimate& est : sweep) {
    CHECK(est.m_hat == 2);
    CHECK_FALSE(est.saturated);
  }
}

TEST_CASE("alpha_sweep reports saturation for every alpha") {
  const PValueSequence P = sequence_of({0.001, 0.002, 0.003});
  for (const Estimate& est : alpha_sweep(P, {0.1, 0.5, 0.9})) {
    CHECK(est.saturated);
    CHECK(est.m_hat == 2);
  }
}

TEST_CASE("pvalue_sequence flags a right-skewed column") {
  oracles::Rng rng(52);
  std::vector<double> col(100);
  for (double& v : col) {
    const double z = rng.normal();
    v = z * z;
  }
  for (SkewTestKind kind : {SkewTestKind::DAgostino, SkewTestKind::Triples}) {
    const PValueSequence P = pvalue_sequence(single_column(col), kind);
    CHECK(P.p.size() == 1);
    CHECK(P.kind == kind);
    CHECK(P.p[0] < 0.05);
    CHECK(P.skewness[0] > 0.0);
    CHECK_FALSE(P.degenerate[0]);
  }
}

TEST_CASE("pvalue_sequence downgrades a degenerate column to one half") {
  const PValueSequence P =
      pvalue_sequence(single_column(std::vector<double>(50, 3.25)), SkewTestKind::DAgostino);
  CHECK(P.p[0] == 0.5);
  CHECK(P.degenerate[0] == 1);
}

TEST_CASE("pvalue_sequence enforces the test floors") {
  CHECK_THROWS_AS(
      pvalue_sequence(single_column({1, 2, 3, 4, 5, 6, 7}), SkewTestKind::DAgostino), Error);
  CHECK_THROWS_AS(
      pvalue_sequence(single_column({1, 2, 3, 4, 5, 6, 7, 8, 9}), SkewTestKind::Triples), Error);
}

TEST_CASE("pvalue_sequence warns on small triples samples") {
  oracles::Rng rng(53);
  std::vector<double> col(15);
  for (double& v : col) v = rng.normal() + 5.0;
  CHECK(pvalue_sequence(single_column(col), SkewTestKind::Triples).small_sample_warning);
}

TEST_CASE("estimate_from_data end to end on pure noise") {
  oracles::Rng rng(54);
  const DataMatrix X = make_data(oracles::random_matrix(30, 200, rng));
  EstimatorConfig cfg;
  const Estimate est = estimate_from_data(X, cfg);
  CHECK(est.n == 30);
  CHECK(est.d == 200);
  CHECK(est.pvalues.M == 28);
  CHECK(est.pvalues.p.size() == 29);
  CHECK(est.sample_eigenvalues.size() == 30);
  CHECK(std::is_sorted(est.sample_eigenvalues.rbegin(), est.sample_eigenvalues.rend()));
  check_invariants(est);
}

TEST_CASE("the estimate is invariant to positive rescaling") {
  oracles::Rng rng(55);
  Matrix values = oracles::random_matrix(25, 150, rng);
  Matrix scaled = values;
  for (std::size_t i = 0; i < 25; ++i)
    for (std::size_t j = 0; j < 150; ++j) scaled(i, j) *= 5.25;
  EstimatorConfig cfg;
  const Estimate a = estimate_from_data(make_data(values), cfg);
  const Estimate b = estimate_from_data(make_data(scaled), cfg);
  CHECK(a.m_hat == b.m_hat);
  REQUIRE(a.pvalues.p.size() == b.pvalues.p.size());
  for (std::size_t k = 0; k < a.pvalues.p.size(); ++k)
    CHECK(std::fabs(a.pvalues.p[k] - b.pvalues.p[k]) <= 1e-10);
}

TEST_CASE("a repeated-row matrix surfaces rank deficiency") {
  Matrix values(12, 40);
  for (std::size_t i = 0; i < 12; ++i)
    for (std::size_t j = 0; j < 40; ++j) values(i, j) = std::sin(static_cast<double>(j));
  EstimatorConfig cfg;
  try {
    estimate_from_data(make_data(values), cfg);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Status::RankDeficient);
  }
}

TEST_CASE("centering tightens the order cap") {
  oracles::Rng rng(56);
  const DataMatrix X = make_data(oracles::random_matrix(10, 15, rng));
  EstimatorConfig cfg;
  cfg.m_max = 9;
  CHECK_NOTHROW(estimate_from_data(X, cfg));
  cfg.center = true;
  CHECK_THROWS_AS(estimate_from_data(X, cfg), Error);
  cfg.m_max = 8;
  CHECK_NOTHROW(estimate_from_data(X, cfg));
}
