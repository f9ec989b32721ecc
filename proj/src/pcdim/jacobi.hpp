#pragma once

#include <vector>

#include "pcdim/matrix.hpp"

namespace pcdim {

struct EigenSystem {
  std::vector<double> eigenvalues;  // descending
  Matrix eigenvectors;              // column i pairs with eigenvalues[i]
};

// Cyclic Jacobi for a symmetric matrix. Eigenvalues are returned exactly as
// computed (negative values possible for indefinite input); sorted descending
// with ties kept in original index order; each eigenvector's largest-magnitude
// entry is made positive.
EigenSystem sym_eigen(const Matrix& A);

// Eigen-decomposition of a Gram matrix: applies the PSD clamp policy.
// Values in [-1e-8 * trace/n, 0) clamp to 0; more negative values signal a
// broken input and raise NonConvergence.
EigenSystem gram_eigen(const Matrix& G);

}  // namespace pcdim
