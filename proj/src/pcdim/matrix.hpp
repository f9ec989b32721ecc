#pragma once

#include <cstddef>
#include <vector>

#include "pcdim/common.hpp"

namespace pcdim {

// Dense row-major matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  double* row_ptr(std::size_t i) { return data_.data() + i * cols_; }
  const double* row_ptr(std::size_t i) const { return data_.data() + i * cols_; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// n observations (rows) in d variables (columns).
struct DataMatrix {
  Matrix values;
  bool centered = false;
  std::size_t n() const { return values.rows(); }
  std::size_t d() const { return values.cols(); }
};

DataMatrix make_data(Matrix values);

// Subtracts each column mean; records the flag.
DataMatrix center_columns(const DataMatrix& X);

// Divides each column by its standard deviation (population, after optional centering).
DataMatrix standardize_columns(const DataMatrix& X);

// G = X X^T, computed once and mirrored; entries are exact dot products.
Matrix gram(const DataMatrix& X);

}  // namespace pcdim
