#pragma once

#include <cstddef>
#include <vector>

namespace pcdim {

struct TestResult {
  double statistic = 0.0;  // asymptotically standard normal under the null
  double p_right = 0.5;    // one-sided, against right-skewed alternatives
  std::size_t n = 0;
  bool degenerate = false;            // variance estimate was not positive
  bool small_sample_warning = false;  // triples below the recommended n > 20
};

// b1 = m3 / m2^(3/2).
double sample_skewness(const std::vector<double>& y);

// Average of the sign kernel over all C(n,3) triples, kernel divided by 3
// so the result lies in [-1, 1].
double triples_u(const std::vector<double>& y);

// Triples symmetry test standardized by the exact finite-sample U-statistic
// variance estimate.
TestResult triples_test_right(const std::vector<double>& y);

// Transformed-b1 skewness test; Z approximately N(0,1) under normality.
TestResult dagostino_test_right(const std::vector<double>& y);

}  // namespace pcdim
