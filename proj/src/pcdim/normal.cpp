#include "pcdim/normal.hpp"

#include <cmath>

namespace pcdim {

double std_normal_cdf(double x) {
  // erfc keeps full relative precision in the lower tail, where p-values live.
  return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

}  // namespace pcdim
