#include "pcdim/baselines.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace {

// (alpha, s) nodes: P(TW1 > s) = alpha. Generated from the Painleve II
// representation of the distribution and cross-checked against published
// tables (e.g. s(0.05) = 0.9793, s(0.01) = 2.0234, median = -1.2686).
constexpr std::size_t kNodes = 25;
constexpr std::array<double, kNodes> kAlpha = {
    0.005, 0.01, 0.025, 0.05, 0.10, 0.15, 0.20, 0.25, 0.30, 0.35, 0.40, 0.45, 0.50,
    0.55,  0.60, 0.65,  0.70, 0.75, 0.80, 0.85, 0.90, 0.95, 0.975, 0.99, 0.995};
constexpr std::array<double, kNodes> kQuantile = {
    2.4223234244,  2.0234459255,  1.4537676518,  0.9793119815,  0.4501386613,
    0.1038329127,  -0.1653190136, -0.3920004110, -0.5922937947, -0.7751765162,
    -0.9463378748, -1.1097755302, -1.2685840384, -1.4254107440, -1.5827762420,
    -1.7433671229, -1.9103951285, -2.0881665799, -2.2831857662, -2.5067307633,
    -2.7824702623, -3.1804586405, -3.5159967728, -3.8957384751, -4.1484059042};

// Shape-preserving (Fritsch-Carlson) node derivatives for cubic Hermite
// interpolation of the decreasing quantile curve.
struct Pchip {
  std::array<double, kNodes> deriv{};
  Pchip() {
    std::array<double, kNodes - 1> h{}, slope{};
    for (std::size_t i = 0; i + 1 < kNodes; ++i) {
      h[i] = kAlpha[i + 1] - kAlpha[i];
      slope[i] = (kQuantile[i + 1] - kQuantile[i]) / h[i];
    }
    for (std::size_t i = 1; i + 1 < kNodes; ++i) {
      if (slope[i - 1] * slope[i] <= 0.0) {
        deriv[i] = 0.0;
      } else {
        const double w1 = 2.0 * h[i] + h[i - 1];
        const double w2 = h[i] + 2.0 * h[i - 1];
        deriv[i] = (w1 + w2) / (w1 / slope[i - 1] + w2 / slope[i]);
      }
    }
    deriv[0] = edge(h[0], h[1], slope[0], slope[1]);
    deriv[kNodes - 1] =
        edge(h[kNodes - 2], h[kNodes - 3], slope[kNodes - 2], slope[kNodes - 3]);
  }
  static double edge(double h0, double h1, double s0, double s1) {
    double d = ((2.0 * h0 + h1) * s0 - h0 * s1) / (h0 + h1);
    if (d * s0 <= 0.0) return 0.0;
    if (s0 * s1 <= 0.0 && std::fabs(d) > 3.0 * std::fabs(s0)) return 3.0 * s0;
    return d;
  }
};

}  // namespace

namespace pcdim {

double tw1_quantile(double alpha) {
  require(alpha >= kAlpha.front() && alpha <= kAlpha.back(), Status::OutOfRange,
          "alpha outside tabulated range [0.005, 0.995]");
  static const Pchip pchip;
  const auto it = std::upper_bound(kAlpha.begin(), kAlpha.end(), alpha);
  std::size_t i = static_cast<std::size_t>(it - kAlpha.begin());
  if (i > 0) --i;
  if (i >= kNodes - 1) i = kNodes - 2;
  const double h = kAlpha[i + 1] - kAlpha[i];
  const double t = (alpha - kAlpha[i]) / h;
  const double t2 = t * t, t3 = t2 * t;
  return (2.0 * t3 - 3.0 * t2 + 1.0) * kQuantile[i] + (t3 - 2.0 * t2 + t) * h * pchip.deriv[i] +
         (-2.0 * t3 + 3.0 * t2) * kQuantile[i + 1] + (t3 - t2) * h * pchip.deriv[i + 1];
}

BaselineResult bai_ng(const ResidualLengths& R, std::size_t M) {
  const std::size_t n = R.table.rows();
  const std::size_t d = R.d;
  require(d >= 1, Status::InvalidArgument, "residual table lacks the ambient dimension");
  require(M + 1 <= R.table.cols(), Status::InvalidArgument,
          "M exceeds the residual table depth");

  const double nd = static_cast<double>(n) * static_cast<double>(d);
  const double ratio = (static_cast<double>(n) + static_cast<double>(d)) / nd;
  const double penalty = ratio * std::log(1.0 / ratio);

  BaselineResult out;
  out.method = BaselineMethod::BaiNg;
  out.criterion_trace.resize(M + 1);
  std::size_t best = 0;
  for (std::size_t k = 0; k <= M; ++k) {
    double v = 0.0;
    for (std::size_t j = 0; j < n; ++j) v += R.table(j, k);
    v /= static_cast<double>(n);
    require(v > 0.0, Status::DegenerateResiduals,
            "zero mean residual at order " + std::to_string(k));
    out.criterion_trace[k] = std::log(v) + static_cast<double>(k) * penalty;
    if (out.criterion_trace[k] < out.criterion_trace[best]) best = k;
  }
  out.m_hat = best;
  return out;
}

namespace {

// Noise variance at assumed rank k: the trailing average corrected for the
// share of noise absorbed by the k leading sample eigenvalues, via the
// spiked-model fixed point (a few iterations suffice).
double kn_noise_level(const std::vector<double>& lambda, std::size_t n, std::size_t d,
                      std::size_t k) {
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += lambda[i];
  double tail = total;
  for (std::size_t i = 0; i < k; ++i) tail -= lambda[i];
  const double c = static_cast<double>(d) / static_cast<double>(n);
  double sigma2 = tail / static_cast<double>(d - k);
  for (int iter = 0; iter < 4; ++iter) {
    double spike_sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      const double b = lambda[i] + sigma2 - c * sigma2;
      double disc = b * b - 4.0 * lambda[i] * sigma2;
      if (disc < 0.0) disc = 0.0;
      spike_sum += 0.5 * (b + std::sqrt(disc));
    }
    sigma2 = (total - spike_sum) / static_cast<double>(d - k);
  }
  return sigma2;
}

}  // namespace

BaselineResult kritchman_nadler(const std::vector<double>& sample_eigenvalues, std::size_t d,
                                double alpha, std::size_t M) {
  const std::size_t n = sample_eigenvalues.size();
  require(n >= 10, Status::TooFewObservations, "need at least 10 sample eigenvalues");
  require(d > n, Status::InvalidArgument, "requires more variables than observations");
  require(M < n, Status::InvalidArgument, "M must be below n");
  for (std::size_t i = 0; i + 1 < n; ++i)
    require(sample_eigenvalues[i] >= sample_eigenvalues[i + 1], Status::InvalidArgument,
            "eigenvalues must be sorted in decreasing order");

  const double s = tw1_quantile(alpha);
  BaselineResult out;
  out.method = BaselineMethod::KritchmanNadler;
  out.criterion_trace.resize(M);
  out.m_hat = M;
  bool found = false;
  for (std::size_t k = 0; k < M; ++k) {
    const double sigma2 = kn_noise_level(sample_eigenvalues, n, d, k);
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(d - k);
    const double a = std::sqrt(nn - 0.5), b = std::sqrt(p - 0.5);
    const double mu = (a + b) * (a + b) / nn;
    const double xi = ((a + b) / nn) * std::cbrt(1.0 / a + 1.0 / b);
    out.criterion_trace[k] = sigma2 * (mu + s * xi);
    if (!found && sample_eigenvalues[k] <= out.criterion_trace[k]) {
      out.m_hat = k;
      found = true;
    }
  }
  return out;
}

}  // namespace pcdim
