#include "pcdim/matrix.hpp"

#include <cmath>

#include "pcdim/threading.hpp"

namespace pcdim {

DataMatrix make_data(Matrix values) {
  require(values.rows() >= 2, Status::InvalidArgument, "need at least 2 observations");
  require(values.cols() >= 1, Status::InvalidArgument, "need at least 1 variable");
  DataMatrix X;
  X.values = std::move(values);
  return X;
}

DataMatrix center_columns(const DataMatrix& X) {
  const std::size_t n = X.n(), d = X.d();
  DataMatrix out = X;
  std::vector<double> mean(d, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const double* row = X.values.row_ptr(j);
    for (std::size_t i = 0; i < d; ++i) mean[i] += row[i];
  }
  for (std::size_t i = 0; i < d; ++i) mean[i] /= static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j) {
    double* row = out.values.row_ptr(j);
    for (std::size_t i = 0; i < d; ++i) row[i] -= mean[i];
  }
  out.centered = true;
  return out;
}

DataMatrix standardize_columns(const DataMatrix& X) {
  const std::size_t n = X.n(), d = X.d();
  DataMatrix out = X;
  for (std::size_t i = 0; i < d; ++i) {
    double s = 0.0, ss = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      double v = X.values(j, i);
      s += v;
      ss += v * v;
    }
    double m = s / static_cast<double>(n);
    double var = ss / static_cast<double>(n) - m * m;
    require(var > 1e-300, Status::ZeroVariance, "constant column " + std::to_string(i));
    double inv = 1.0 / std::sqrt(var);
    for (std::size_t j = 0; j < n; ++j) out.values(j, i) *= inv;
  }
  return out;
}

Matrix gram(const DataMatrix& X) {
  const std::size_t n = X.n(), d = X.d();
  Matrix G(n, n);
  parallel_for(n, [&](std::size_t j) {
    const double* xj = X.values.row_ptr(j);
    for (std::size_t k = j; k < n; ++k) {
      const double* xk = X.values.row_ptr(k);
      double acc = 0.0;
      for (std::size_t i = 0; i < d; ++i) acc += xj[i] * xk[i];
      G(j, k) = acc;
    }
  });
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < j; ++k) G(j, k) = G(k, j);
  return G;
}

}  // namespace pcdim
