#pragma once

namespace pcdim {

// Standard normal CDF, absolute error below 1e-12 over the real line.
double std_normal_cdf(double x);

}  // namespace pcdim
