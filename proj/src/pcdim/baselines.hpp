#pragma once

#include <cstddef>
#include <vector>

#include "pcdim/pipeline.hpp"

namespace pcdim {

enum class BaselineMethod { BaiNg, KritchmanNadler };

struct BaselineResult {
  BaselineMethod method = BaselineMethod::BaiNg;
  std::size_t m_hat = 0;
  std::vector<double> criterion_trace;  // IC values per k, or per-k thresholds
};

// Information-criterion rank estimate: IC(k) = ln V(k) + k ((n+d)/(nd)) ln(nd/(n+d))
// with V(k) the mean residual length at order k; argmin over k = 0..M,
// ties resolved toward the smallest k.
BaselineResult bai_ng(const ResidualLengths& R, std::size_t M);

// Upper-tail quantile s(alpha) of the order-1 Tracy-Widom law from an
// embedded table, monotone cubic interpolation between nodes.
double tw1_quantile(double alpha);

// Sequential eigenvalue thresholding: accepts rank k once the next sample
// eigenvalue stays below a Tracy-Widom threshold at the estimated noise level.
// sample_eigenvalues are the Gram eigenvalues divided by n, largest first.
BaselineResult kritchman_nadler(const std::vector<double>& sample_eigenvalues, std::size_t d,
                                double alpha, std::size_t M);

}  // namespace pcdim
