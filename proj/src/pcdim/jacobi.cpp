#include "pcdim/jacobi.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pcdim {

namespace {

double off_diag_norm(const Matrix& A) {
  const std::size_t n = A.rows();
  double acc = 0.0;
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = p + 1; q < n; ++q) acc += 2.0 * A(p, q) * A(p, q);
  return std::sqrt(acc);
}

double frobenius(const Matrix& A) {
  const std::size_t n = A.rows();
  double acc = 0.0;
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q) acc += A(p, q) * A(p, q);
  return std::sqrt(acc);
}

}  // namespace

EigenSystem sym_eigen(const Matrix& A_in) {
  const std::size_t n = A_in.rows();
  require(n >= 1 && A_in.cols() == n, Status::InvalidArgument, "matrix must be square");
  require(n <= 5000, Status::InvalidArgument, "dense Jacobi budget is n <= 5000");
  const double fro = frobenius(A_in);
  {
    double worst = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q)
        worst = std::max(worst, std::fabs(A_in(p, q) - A_in(q, p)));
    require(worst <= 1e-10 * (1.0 + fro), Status::InvalidArgument, "matrix is not symmetric");
  }

  Matrix A = A_in;
  Matrix V(n, n);
  for (std::size_t i = 0; i < n; ++i) V(i, i) = 1.0;

  const double tol = 1e-12 * fro;
  const int max_sweeps = 100;
  bool converged = (n == 1) || off_diag_norm(A) <= tol;
  for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    for (std::size_t p = 0; p < n - 1; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = A(p, q);
        if (apq == 0.0) continue;
        const double app = A(p, p), aqq = A(q, q);
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t i = 0; i < n; ++i) {
          const double aip = A(i, p), aiq = A(i, q);
          A(i, p) = c * aip - s * aiq;
          A(i, q) = s * aip + c * aiq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double api = A(p, i), aqi = A(q, i);
          A(p, i) = c * api - s * aqi;
          A(q, i) = s * api + c * aqi;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double vip = V(i, p), viq = V(i, q);
          V(i, p) = c * vip - s * viq;
          V(i, q) = s * vip + c * viq;
        }
      }
    }
    converged = off_diag_norm(A) <= tol;
  }
  require(converged, Status::NonConvergence, "Jacobi did not converge in 100 sweeps");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return A(a, a) > A(b, b); });

  EigenSystem E;
  E.eigenvalues.resize(n);
  E.eigenvectors = Matrix(n, n);
  for (std::size_t dst = 0; dst < n; ++dst) {
    const std::size_t src = order[dst];
    E.eigenvalues[dst] = A(src, src);
    std::size_t arg = 0;
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double mag = std::fabs(V(i, src));
      if (mag > best) {
        best = mag;
        arg = i;
      }
    }
    const double flip = V(arg, src) < 0.0 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < n; ++i) E.eigenvectors(i, dst) = flip * V(i, src);
  }
  return E;
}

EigenSystem gram_eigen(const Matrix& G) {
  EigenSystem E = sym_eigen(G);
  const std::size_t n = G.rows();
  double trace = 0.0;
  for (std::size_t i = 0; i < n; ++i) trace += G(i, i);
  const double band = 1e-8 * trace / static_cast<double>(n);
  for (double& mu : E.eigenvalues) {
    if (mu < 0.0) {
      require(mu >= -band, Status::NonConvergence,
              "Gram matrix eigenvalue below the PSD roundoff band");
      mu = 0.0;
    }
  }
  return E;
}

}  // namespace pcdim
