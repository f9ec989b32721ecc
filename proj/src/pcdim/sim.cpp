#include "pcdim/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pcdim/threading.hpp"

namespace pcdim {

namespace {

double kahan_sum(const std::vector<double>& v) {
  double sum = 0.0, carry = 0.0;
  for (double x : v) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  return sum;
}

double tail_mean(const EigenModel& model) {
  const std::size_t d = model.lambdas.size();
  std::vector<double> tail(model.lambdas.begin() + static_cast<std::ptrdiff_t>(model.m),
                           model.lambdas.end());
  return kahan_sum(tail) / static_cast<double>(d - model.m);
}

}  // namespace

EigenModel eigen_model(std::size_t d, std::size_t m, double s, double g, double beta) {
  require(d > m, Status::InvalidArgument, "need d > m");
  require(s > 0.0, Status::InvalidArgument, "signal scale s must be positive");
  require(m < 2 || g > 0.0, Status::InvalidArgument, "need g > 0 once two spikes are present");
  require(beta >= 0.0 && beta < 0.5, Status::InvalidArgument, "beta must lie in [0, 0.5)");

  EigenModel model;
  model.m = m;
  model.s = s;
  model.g = g;
  model.beta = beta;
  model.lambdas.resize(d);
  const double dd = static_cast<double>(d);
  for (std::size_t i = 1; i <= m; ++i)
    model.lambdas[i - 1] = s * s * (1.0 + g * static_cast<double>(m - i)) * dd;

  std::vector<double> weights(d - m);
  for (std::size_t i = m + 1; i <= d; ++i)
    weights[i - m - 1] = std::pow(static_cast<double>(i), -beta);
  model.tau_beta = static_cast<double>(d - m) / kahan_sum(weights);
  for (std::size_t i = 0; i < d - m; ++i) model.lambdas[m + i] = model.tau_beta * weights[i];

  if (m >= 1) {
    require(model.lambdas[m - 1] > model.lambdas[m], Status::SpikeBelowNoise,
            "weakest spike does not exceed the leading tail eigenvalue");
  }
  return model;
}

ScorePanel sample_scores(const SimSpec& spec, std::uint32_t replicate_index) {
  ScorePanel panel;
  panel.distribution = spec.distribution;
  panel.seed = spec.seed;
  panel.replicate = replicate_index;
  panel.z = Matrix(spec.n, spec.d);
  const PhiloxStream stream(spec.seed, replicate_index, StreamTag::Scores);
  const std::size_t d = spec.d;
  const bool normal = spec.distribution == Distribution::StandardNormal;
  parallel_for(spec.n, [&](std::size_t j) {
    double* row = panel.z.row_ptr(j);
    const std::uint64_t base = static_cast<std::uint64_t>(j) * d;
    for (std::size_t i = 0; i < d; ++i)
      row[i] = normal ? stream.normal(base + i) : stream.scaled_t3(base + i);
  });
  return panel;
}

DataMatrix synth_data(const EigenModel& model, const ScorePanel& Z) {
  const std::size_t n = Z.z.rows(), d = Z.z.cols();
  require(d == model.lambdas.size(), Status::InvalidArgument,
          "panel width does not match the eigenvalue vector");
  std::vector<double> root(d);
  for (std::size_t i = 0; i < d; ++i) root[i] = std::sqrt(model.lambdas[i]);
  Matrix X(n, d);
  parallel_for(n, [&](std::size_t j) {
    const double* zr = Z.z.row_ptr(j);
    double* xr = X.row_ptr(j);
    for (std::size_t i = 0; i < d; ++i) xr[i] = root[i] * zr[i];
  });
  return make_data(std::move(X));
}

Matrix random_orthogonal(std::size_t d, std::uint64_t seed) {
  require(d >= 1 && d < 200, Status::InvalidArgument,
          "rotated mode is restricted to d < 200");
  const PhiloxStream stream(seed, 0, StreamTag::Rotation);
  Matrix Q(d, d);
  for (std::size_t c = 0; c < d; ++c)
    for (std::size_t r = 0; r < d; ++r)
      Q(r, c) = stream.normal(static_cast<std::uint64_t>(c) * d + r);
  for (std::size_t c = 0; c < d; ++c) {
    for (std::size_t prev = 0; prev < c; ++prev) {
      double dot = 0.0;
      for (std::size_t r = 0; r < d; ++r) dot += Q(r, c) * Q(r, prev);
      for (std::size_t r = 0; r < d; ++r) Q(r, c) -= dot * Q(r, prev);
    }
    double norm2 = 0.0;
    for (std::size_t r = 0; r < d; ++r) norm2 += Q(r, c) * Q(r, c);
    require(norm2 > 1e-16, Status::NonConvergence, "orthogonalization collapsed");
    const double inv = 1.0 / std::sqrt(norm2);
    for (std::size_t r = 0; r < d; ++r) Q(r, c) *= inv;
  }
  return Q;
}

DataMatrix synth_data_rotated(const EigenModel& model, const ScorePanel& Z,
                              std::uint64_t seed) {
  DataMatrix X = synth_data(model, Z);
  const std::size_t n = X.n(), d = X.d();
  const Matrix Q = random_orthogonal(d, seed);
  Matrix R(n, d);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t l = 0; l < d; ++l) {
      double acc = 0.0;
      for (std::size_t i = 0; i < d; ++i) acc += X.values(j, i) * Q(l, i);
      R(j, l) = acc;
    }
  return make_data(std::move(R));
}

TrueResiduals true_residuals(const EigenModel& model, const ScorePanel& Z, std::size_t M) {
  const std::size_t n = Z.z.rows(), d = Z.z.cols();
  require(d == model.lambdas.size(), Status::InvalidArgument,
          "panel width does not match the eigenvalue vector");
  require(M < d && M < n, Status::InvalidArgument, "M must be below both n and d");

  TrueResiduals out;
  out.tilde.d = d;
  out.tilde.table = Matrix(n, M + 1);
  const double dd = static_cast<double>(d);
  for (std::size_t j = 0; j < n; ++j) {
    const double* zr = Z.z.row_ptr(j);
    std::vector<double> terms(d);
    for (std::size_t i = 0; i < d; ++i) terms[i] = model.lambdas[i] * zr[i] * zr[i];
    double remaining = kahan_sum(terms);
    out.tilde.table(j, 0) = remaining / dd;
    for (std::size_t k = 1; k <= M; ++k) {
      remaining -= terms[k - 1];
      out.tilde.table(j, k) = remaining / dd;
    }
  }

  const GramPipeline pipe = run_gram_pipeline(synth_data(model, Z), M);
  out.a = Matrix(n, M + 1);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k <= M; ++k)
      out.a(j, k) = pipe.residuals.table(j, k) - out.tilde.table(j, k);
  return out;
}

namespace {

std::vector<double> skewness_row(const ResidualLengths& R) {
  const std::size_t n = R.table.rows(), cols = R.table.cols();
  std::vector<double> out(cols, std::numeric_limits<double>::quiet_NaN());
  std::vector<double> col(n);
  for (std::size_t k = 0; k < cols; ++k) {
    for (std::size_t j = 0; j < n; ++j) col[j] = R.table(j, k);
    try {
      out[k] = sample_skewness(col);
    } catch (const Error&) {
    }
  }
  return out;
}

void summarize_method(SimSummary& summary, const char* name,
                      std::size_t ReplicateRecord::*field) {
  std::vector<double> values;
  for (const ReplicateRecord& rec : summary.replicates) {
    if (rec.failed || rec.*field == kNotRun) continue;
    values.push_back(static_cast<double>(rec.*field));
  }
  if (values.empty()) return;
  MethodSummary ms;
  ms.method = name;
  ms.histogram.assign(summary.resolved_M + 1, 0);
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  ms.mean = mean;
  ms.stderr_of_mean =
      values.size() > 1
          ? std::sqrt(ss / static_cast<double>(values.size() - 1) /
                      static_cast<double>(values.size()))
          : 0.0;
  for (const ReplicateRecord& rec : summary.replicates) {
    if (rec.failed || rec.*field == kNotRun) continue;
    ms.histogram[rec.*field] += 1;
  }
  summary.methods.push_back(std::move(ms));
}

}  // namespace

SimSummary run_replicates(const SimSpec& spec) {
  require(spec.replicates >= 1, Status::InvalidArgument, "need at least one replicate");
  require(spec.m < spec.n, Status::InvalidArgument, "need m < n");
  require(spec.alpha > 0.0 && spec.alpha < 1.0, Status::InvalidArgument,
          "alpha must lie in (0,1)");

  SimSummary summary;
  summary.spec = spec;
  std::size_t M = spec.M;
  if (M == kAutoM) M = std::min({spec.n - 2, spec.d, std::size_t{30}});
  require(M <= spec.n - 1, Status::InvalidArgument, "M must be below n");
  summary.resolved_M = M;

  const EigenModel model =
      spec.m > 0 ? eigen_model(spec.d, spec.m, spec.s, spec.g, spec.beta)
                 : eigen_model(spec.d, 0, spec.s > 0.0 ? spec.s : 1.0, spec.g, spec.beta);

  summary.replicates.resize(spec.replicates);
  parallel_for(spec.replicates, [&](std::size_t r) {
    ReplicateRecord& rec = summary.replicates[r];
    rec.index = r;
    try {
      const ScorePanel Z = sample_scores(spec, static_cast<std::uint32_t>(r));
      const DataMatrix X = synth_data(model, Z);
      const GramPipeline pipe = run_gram_pipeline(X, M);
      rec.skewness = skewness_row(pipe.residuals);
      if (spec.estimators.dagostino) {
        const PValueSequence P = pvalue_sequence(pipe.residuals, SkewTestKind::DAgostino);
        rec.p_dagostino = P.p;
        rec.m_dagostino = estimate_m(P, spec.alpha).m_hat;
      }
      if (spec.estimators.triples) {
        const PValueSequence P = pvalue_sequence(pipe.residuals, SkewTestKind::Triples);
        rec.p_triples = P.p;
        rec.m_triples = estimate_m(P, spec.alpha).m_hat;
      }
      if (spec.estimators.bai_ng) rec.m_bai_ng = bai_ng(pipe.residuals, M).m_hat;
      if (spec.estimators.kritchman_nadler) {
        std::vector<double> lambda(spec.n);
        for (std::size_t i = 0; i < spec.n; ++i)
          lambda[i] = pipe.eigen.eigenvalues[i] / static_cast<double>(spec.n);
        rec.m_kritchman_nadler = kritchman_nadler(lambda, spec.d, spec.kn_alpha, M).m_hat;
      }
    } catch (const std::exception& e) {
      rec.failed = true;
      rec.error = e.what();
    }
  });

  for (const ReplicateRecord& rec : summary.replicates)
    if (rec.failed) ++summary.failure_count;
  summarize_method(summary, "dagostino", &ReplicateRecord::m_dagostino);
  summarize_method(summary, "triples", &ReplicateRecord::m_triples);
  summarize_method(summary, "bai_ng", &ReplicateRecord::m_bai_ng);
  summarize_method(summary, "kritchman_nadler", &ReplicateRecord::m_kritchman_nadler);
  return summary;
}

GramLimitReport gram_limit_check(const EigenModel& model, const ScorePanel& Z) {
  const std::size_t n = Z.z.rows(), d = Z.z.cols(), m = model.m;
  require(d == model.lambdas.size(), Status::InvalidArgument,
          "panel width does not match the eigenvalue vector");
  require(m < n, Status::InvalidArgument, "need m < n");

  const DataMatrix X = synth_data(model, Z);
  const Matrix G = gram(X);
  const double dd = static_cast<double>(d);

  GramLimitReport report;
  report.tau2 = tail_mean(model);

  double var_z2 = 2.0;
  if (Z.distribution == Distribution::StudentT3) {
    double s1 = 0.0, s2 = 0.0;
    const std::size_t count = n * d;
    for (std::size_t j = 0; j < n; ++j) {
      const double* zr = Z.z.row_ptr(j);
      for (std::size_t i = 0; i < d; ++i) {
        const double q = zr[i] * zr[i];
        s1 += q;
        s2 += q * q;
      }
    }
    const double mq = s1 / static_cast<double>(count);
    var_z2 = s2 / static_cast<double>(count) - mq * mq;
  }
  double tail2 = 0.0;
  for (std::size_t i = m; i < d; ++i) tail2 += model.lambdas[i] * model.lambdas[i];
  report.upsilon_D = std::sqrt(tail2 * var_z2 / dd);
  report.upsilon_O = std::sqrt(tail2 / dd);

  // Spike part of the limit: sum_i sigma_i^2 z_ij z_ik with sigma_i^2 = lambda_i/d.
  report.studentized_diag.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = j; k < n; ++k) {
      double limit = 0.0;
      for (std::size_t i = 0; i < m; ++i)
        limit += (model.lambdas[i] / dd) * Z.z(j, i) * Z.z(k, i);
      if (j == k) limit += report.tau2;
      const double dev = std::fabs(G(j, k) / dd - limit);
      report.max_deviation = std::max(report.max_deviation, dev);
      if (j != k) report.max_offdiag_deviation = std::max(report.max_offdiag_deviation, dev);
      if (j == k)
        report.studentized_diag[j] =
            std::sqrt(dd) * (G(j, j) / dd - limit) / report.upsilon_D;
    }
  }
  return report;
}

RotationReport score_rotation_check(const EigenModel& model, const ScorePanel& Z) {
  const std::size_t n = Z.z.rows(), d = Z.z.cols(), m = model.m;
  require(m >= 1, Status::InvalidArgument, "needs at least one spike");
  require(m < n, Status::InvalidArgument, "need m < n");
  require(d == model.lambdas.size(), Status::InvalidArgument,
          "panel width does not match the eigenvalue vector");

  const DataMatrix X = synth_data(model, Z);
  const Matrix G = gram(X);
  const EigenSystem eig = gram_eigen(G);
  const double dd = static_cast<double>(d);

  Matrix what1(n, m);  // estimated spike scores over sqrt(d)
  for (std::size_t k = 0; k < m; ++k) {
    const double root = std::sqrt(eig.eigenvalues[k]);
    for (std::size_t j = 0; j < n; ++j) what1(j, k) = root * eig.eigenvectors(j, k) / std::sqrt(dd);
  }

  Matrix w1(m, n);  // population spike scores, sigma_i z_ij
  for (std::size_t i = 0; i < m; ++i) {
    const double sigma = std::sqrt(model.lambdas[i] / dd);
    for (std::size_t j = 0; j < n; ++j) w1(i, j) = sigma * Z.z(j, i);
  }

  Matrix B(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t l = i; l < m; ++l) {
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) acc += w1(i, j) * w1(l, j);
      B(i, l) = acc;
      B(l, i) = acc;
    }
  const EigenSystem eb = sym_eigen(B);
  require(eb.eigenvalues[m - 1] > 0.0, Status::RankDeficient,
          "population spike block is rank deficient");

  RotationReport report;
  report.tau2 = tail_mean(model);
  Matrix pred(n, m);  // W1^T R S
  for (std::size_t k = 0; k < m; ++k) {
    const double rho = std::sqrt(1.0 + report.tau2 / eb.eigenvalues[k]);
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t i = 0; i < m; ++i) acc += w1(i, j) * eb.eigenvectors(i, k);
      pred(j, k) = acc * rho;
    }
  }
  report.column_residuals.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    double dot = 0.0;
    for (std::size_t j = 0; j < n; ++j) dot += pred(j, k) * what1(j, k);
    const double sign = dot < 0.0 ? -1.0 : 1.0;
    double worst = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      worst = std::max(worst, std::fabs(what1(j, k) - sign * pred(j, k)));
    report.column_residuals[k] = worst;
    report.max_residual = std::max(report.max_residual, worst);
  }

  double acc = 0.0;
  for (std::size_t k = m; k < n; ++k) acc += eig.eigenvalues[k] / dd;
  report.noise_second_moment = acc / static_cast<double>(n - m);
  return report;
}

}  // namespace pcdim
