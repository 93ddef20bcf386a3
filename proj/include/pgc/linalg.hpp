// Copyright 2026 The PartialGC Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Small dense linear algebra: a column-major matrix and a one-sided Jacobi
// SVD, plus the minimum-norm least-squares solver built on it.
//
// The Jacobi sweep order is fixed (column pairs p < q in lexicographic order)
// and singular triplets are sorted by a stable descending sort, so identical
// inputs give bitwise identical outputs within one process.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace pgc::linalg {

/// Singular values at or below kRankTolerance * sigma_max are treated as zero.
inline constexpr double kRankTolerance = 1e-12;

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n);
  /// Builds from row-major nested lists. All rows must have equal length.
  static Matrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) noexcept { return data_[c * rows_ + r]; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return data_[c * rows_ + r]; }

  std::span<double> col(std::size_t c) noexcept { return {data_.data() + c * rows_, rows_}; }
  std::span<const double> col(std::size_t c) const noexcept { return {data_.data() + c * rows_, rows_}; }

  double* data() noexcept { return data_.data(); }
  const double* data() const noexcept { return data_.data(); }

  Matrix transpose() const;
  double frobenius_norm() const;

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix multiply(const Matrix& a, const Matrix& b);
std::vector<double> multiply(const Matrix& a, std::span<const double> x);

/// Thin SVD a = U diag(s) V^T with k = min(rows, cols) triplets, s sorted
/// descending. When `with_v` was false the V factor is left empty.
struct Svd {
  Matrix u;
  std::vector<double> singular_values;
  Matrix v;

  std::size_t rank(double rel_tol = kRankTolerance) const;
};

Svd jacobi_svd(const Matrix& a, bool with_v = true);

/// Moore-Penrose pseudo-inverse (cols x rows).
Matrix pseudo_inverse(const Matrix& a, double rel_tol = kRankTolerance);

/// x^+ y: among all minimisers of ||x b - y||_2 the one of least norm.
/// A zero (or empty) x yields the zero vector.
std::vector<double> min_norm_least_squares(const Matrix& x, std::span<const double> y,
                                           double rel_tol = kRankTolerance);

/// Same, reusing a factorisation (computed with V) across right-hand sides.
std::vector<double> min_norm_least_squares(const Svd& svd, std::span<const double> y,
                                           double rel_tol = kRankTolerance);

/// min_b ||x b - y||_2^2, via the left singular vectors only.
double least_squares_residual(const Matrix& x, std::span<const double> y,
                              double rel_tol = kRankTolerance);

/// sigma_max / sigma_min over the singular values above the rank cutoff.
/// Throws UndefinedCondition for a zero matrix.
double condition_number(const Matrix& x);

/// Row-major text dump: "rows cols" header, then one line per row in
/// scientific notation with 17 significant digits.
std::string format_matrix(const Matrix& m);
Matrix parse_matrix(const std::string& text);

}  // namespace pgc::linalg
