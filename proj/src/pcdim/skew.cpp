#include "pcdim/skew.hpp"

#include <cmath>
#include <cstdint>

#include "pcdim/common.hpp"
#include "pcdim/normal.hpp"

namespace pcdim {

namespace {

inline int sign_of(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

struct TripleSums {
  std::int64_t total = 0;
  std::int64_t square_total = 0;
  std::vector<std::int64_t> g1;  // per-index kernel sums
  std::vector<std::int64_t> g2;  // per-pair kernel sums, row-major upper triangle
};

// One pass over all triples accumulating the integer kernel; the kernel value
// lies in {-3,-1,0,1,3} so all sums are exact.
TripleSums triple_sums(const std::vector<double>& y) {
  const std::size_t n = y.size();
  TripleSums S;
  S.g1.assign(n, 0);
  S.g2.assign(n * n, 0);
  for (std::size_t i = 0; i + 2 < n; ++i) {
    for (std::size_t j = i + 1; j + 1 < n; ++j) {
      const double yij = y[i] + y[j];
      for (std::size_t k = j + 1; k < n; ++k) {
        const int f = sign_of(yij - 2.0 * y[k]) + sign_of(y[i] + y[k] - 2.0 * y[j]) +
                      sign_of(y[j] + y[k] - 2.0 * y[i]);
        S.total += f;
        S.square_total += static_cast<std::int64_t>(f) * f;
        S.g1[i] += f;
        S.g1[j] += f;
        S.g1[k] += f;
        S.g2[i * n + j] += f;
        S.g2[i * n + k] += f;
        S.g2[j * n + k] += f;
      }
    }
  }
  return S;
}

}  // namespace

double sample_skewness(const std::vector<double>& y) {
  const std::size_t n = y.size();
  require(n >= 3, Status::TooFewObservations, "skewness needs n >= 3");
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(n);
  double m2 = 0.0, m3 = 0.0;
  for (double v : y) {
    const double c = v - mean;
    m2 += c * c;
    m3 += c * c * c;
  }
  m2 /= static_cast<double>(n);
  m3 /= static_cast<double>(n);
  require(m2 > 1e-300, Status::ZeroVariance, "zero variance sample");
  return m3 / (m2 * std::sqrt(m2));
}

double triples_u(const std::vector<double>& y) {
  const std::size_t n = y.size();
  require(n >= 3, Status::TooFewObservations, "triples kernel needs n >= 3");
  require(n <= 2000, Status::InvalidArgument, "triples enumeration refused above n = 2000");
  const TripleSums S = triple_sums(y);
  const double triples = static_cast<double>(n) * (n - 1) * (n - 2) / 6.0;
  return static_cast<double>(S.total) / (3.0 * triples);
}

TestResult triples_test_right(const std::vector<double>& y) {
  const std::size_t n = y.size();
  require(n >= 10, Status::TooFewObservations, "triples test needs n >= 10");
  require(n <= 2000, Status::InvalidArgument, "triples enumeration refused above n = 2000");
  const TripleSums S = triple_sums(y);
  const double nn = static_cast<double>(n);
  const double c_n3 = nn * (nn - 1.0) * (nn - 2.0) / 6.0;
  const double U = static_cast<double>(S.total) / (3.0 * c_n3);

  const double c_n1_2 = (nn - 1.0) * (nn - 2.0) / 2.0;
  double zeta1 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double g1 = static_cast<double>(S.g1[i]) / (3.0 * c_n1_2);
    zeta1 += g1 * g1;
  }
  zeta1 = zeta1 / nn - U * U;

  double zeta2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double g2 = static_cast<double>(S.g2[i * n + j]) / (3.0 * (nn - 2.0));
      zeta2 += g2 * g2;
    }
  }
  zeta2 = zeta2 / (nn * (nn - 1.0) / 2.0) - U * U;

  const double zeta3 = static_cast<double>(S.square_total) / (9.0 * c_n3) - U * U;

  const double c_nm3_2 = (nn - 3.0) * (nn - 4.0) / 2.0;
  const double var = (3.0 * c_nm3_2 * zeta1 + 3.0 * (nn - 3.0) * zeta2 + zeta3) / c_n3;

  TestResult r;
  r.n = n;
  r.small_sample_warning = n < 21;
  if (!(var > 0.0)) {
    r.degenerate = true;
    return r;
  }
  r.statistic = U / std::sqrt(var);
  r.p_right = 1.0 - std_normal_cdf(r.statistic);
  return r;
}

TestResult dagostino_test_right(const std::vector<double>& y) {
  const std::size_t n = y.size();
  require(n >= 8, Status::TooFewObservations, "transformed-b1 test needs n >= 8");
  const double b1 = sample_skewness(y);
  const double nn = static_cast<double>(n);
  const double Y = b1 * std::sqrt((nn + 1.0) * (nn + 3.0) / (6.0 * (nn - 2.0)));
  const double beta2 = 3.0 * (nn * nn + 27.0 * nn - 70.0) * (nn + 1.0) * (nn + 3.0) /
                       ((nn - 2.0) * (nn + 5.0) * (nn + 7.0) * (nn + 9.0));
  const double W2 = -1.0 + std::sqrt(2.0 * (beta2 - 1.0));
  const double delta = 1.0 / std::sqrt(0.5 * std::log(W2));
  const double lambda = std::sqrt(2.0 / (W2 - 1.0));
  TestResult r;
  r.n = n;
  r.statistic = delta * std::asinh(Y / lambda);
  r.p_right = 1.0 - std_normal_cdf(r.statistic);
  return r;
}

}  // namespace pcdim
