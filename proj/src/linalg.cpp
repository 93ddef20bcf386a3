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

#include "pgc/linalg.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "pgc/error.hpp"
#include "pgc/simd.hpp"

namespace pgc::linalg {
namespace {

constexpr int kMaxSweeps = 60;
constexpr double kOrthogonalityTol = 1e-15;

// One-sided (Hestenes) Jacobi on the columns of a tall matrix. On return the
// columns of `w` are mutually orthogonal and equal U * diag(s); `v`, when
// non-empty, accumulates the right rotations.
void orthogonalise_columns(Matrix& w, Matrix* v) {
  const simd::Kernels& k = simd::active();
  const std::size_t n = w.cols();
  const std::size_t len = w.rows();
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double* wp = w.col(p).data();
        double* wq = w.col(q).data();
        const simd::Gram2 g = k.gram2(wp, wq, len);
        if (g.xy == 0.0 || std::abs(g.xy) <= kOrthogonalityTol * std::sqrt(g.xx * g.yy)) continue;
        const double zeta = (g.yy - g.xx) / (2.0 * g.xy);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::hypot(1.0, zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        k.rotate(wp, wq, len, c, s);
        if (v != nullptr) k.rotate(v->col(p).data(), v->col(q).data(), v->rows(), c, s);
        rotated = true;
      }
    }
    if (!rotated) break;
  }
}

Svd tall_svd(const Matrix& a, bool with_v) {
  const simd::Kernels& k = simd::active();
  const std::size_t n = a.cols();
  Matrix w = a;
  Matrix v = with_v ? Matrix::identity(n) : Matrix();
  orthogonalise_columns(w, with_v ? &v : nullptr);

  std::vector<double> sigma(n);
  for (std::size_t j = 0; j < n; ++j) sigma[j] = std::sqrt(k.sum_squares(w.col(j).data(), w.rows()));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

  Svd out;
  out.u = Matrix(a.rows(), n);
  out.singular_values.resize(n);
  if (with_v) out.v = Matrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t src = order[j];
    const double s = sigma[src];
    out.singular_values[j] = s;
    if (s > 0.0) {
      auto from = w.col(src);
      auto to = out.u.col(j);
      for (std::size_t r = 0; r < from.size(); ++r) to[r] = from[r] / s;
    }
    if (with_v) std::ranges::copy(v.col(src), out.v.col(j).begin());
  }
  return out;
}

}  // namespace

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return {};
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != m.cols()) throw InvalidParameter("from_rows: ragged input");
    for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = rows[r][c];
  }
  return m;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t c = 0; c < cols_; ++c)
    for (std::size_t r = 0; r < rows_; ++r) t(c, r) = (*this)(r, c);
  return t;
}

double Matrix::frobenius_norm() const {
  return std::sqrt(simd::active().sum_squares(data_.data(), data_.size()));
}

Matrix multiply(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw InvalidParameter("multiply: inner dimensions differ");
  const simd::Kernels& k = simd::active();
  Matrix out(a.rows(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j)
    for (std::size_t p = 0; p < a.cols(); ++p)
      if (b(p, j) != 0.0) k.axpy(b(p, j), a.col(p).data(), out.col(j).data(), a.rows());
  return out;
}

std::vector<double> multiply(const Matrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) throw InvalidParameter("multiply: inner dimensions differ");
  const simd::Kernels& k = simd::active();
  std::vector<double> out(a.rows(), 0.0);
  for (std::size_t p = 0; p < a.cols(); ++p)
    if (x[p] != 0.0) k.axpy(x[p], a.col(p).data(), out.data(), a.rows());
  return out;
}

std::size_t Svd::rank(double rel_tol) const {
  if (singular_values.empty() || singular_values.front() <= 0.0) return 0;
  const double cutoff = rel_tol * singular_values.front();
  return static_cast<std::size_t>(std::ranges::count_if(singular_values, [&](double s) { return s > cutoff; }));
}

Svd jacobi_svd(const Matrix& a, bool with_v) {
  if (a.rows() >= a.cols()) return tall_svd(a, with_v);
  // a^T = U' S V'^T, hence a = V' S U'^T.
  Svd t = tall_svd(a.transpose(), true);
  Svd out;
  out.u = std::move(t.v);
  out.singular_values = std::move(t.singular_values);
  if (with_v) out.v = std::move(t.u);
  return out;
}

Matrix pseudo_inverse(const Matrix& a, double rel_tol) {
  const Svd svd = jacobi_svd(a, true);
  const std::size_t r = svd.rank(rel_tol);
  Matrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < r; ++i) {
    const double inv = 1.0 / svd.singular_values[i];
    for (std::size_t c = 0; c < a.rows(); ++c) {
      const double coeff = svd.u(c, i) * inv;
      if (coeff != 0.0) simd::active().axpy(coeff, svd.v.col(i).data(), out.col(c).data(), a.cols());
    }
  }
  return out;
}

std::vector<double> min_norm_least_squares(const Svd& svd, std::span<const double> y, double rel_tol) {
  if (svd.u.rows() != y.size()) throw InvalidParameter("min_norm_least_squares: rhs length mismatch");
  std::vector<double> b(svd.v.rows(), 0.0);
  const simd::Kernels& k = simd::active();
  const std::size_t r = svd.rank(rel_tol);
  for (std::size_t i = 0; i < r; ++i) {
    const double coeff = k.dot(svd.u.col(i).data(), y.data(), y.size()) / svd.singular_values[i];
    k.axpy(coeff, svd.v.col(i).data(), b.data(), b.size());
  }
  return b;
}

std::vector<double> min_norm_least_squares(const Matrix& x, std::span<const double> y, double rel_tol) {
  if (x.rows() != y.size()) throw InvalidParameter("min_norm_least_squares: rhs length mismatch");
  if (x.empty()) return std::vector<double>(x.cols(), 0.0);
  return min_norm_least_squares(jacobi_svd(x, true), y, rel_tol);
}

double least_squares_residual(const Matrix& x, std::span<const double> y, double rel_tol) {
  if (x.rows() != y.size()) throw InvalidParameter("least_squares_residual: rhs length mismatch");
  const simd::Kernels& k = simd::active();
  std::vector<double> r(y.begin(), y.end());
  if (!x.empty()) {
    const Svd svd = jacobi_svd(x, false);
    const std::size_t rank = svd.rank(rel_tol);
    for (std::size_t i = 0; i < rank; ++i) {
      const double* u = svd.u.col(i).data();
      k.axpy(-k.dot(u, r.data(), r.size()), u, r.data(), r.size());
    }
  }
  return k.sum_squares(r.data(), r.size());
}

double condition_number(const Matrix& x) {
  if (x.empty()) throw UndefinedCondition("condition_number: empty matrix");
  const Svd svd = jacobi_svd(x, false);
  const std::size_t r = svd.rank();
  if (r == 0) throw UndefinedCondition("condition_number: zero matrix");
  return svd.singular_values.front() / svd.singular_values[r - 1];
}

std::string format_matrix(const Matrix& m) {
  std::string out = fmt::format("{} {}\n", m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (c != 0) out += ' ';
      out += fmt::format("{:.16e}", m(r, c));
    }
    out += '\n';
  }
  return out;
}

Matrix parse_matrix(const std::string& text) {
  std::istringstream in(text);
  std::size_t rows = 0;
  std::size_t cols = 0;
  if (!(in >> rows >> cols)) throw InvalidParameter("parse_matrix: missing 'rows cols' header");
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      if (!(in >> m(r, c))) throw InvalidParameter(fmt::format("parse_matrix: short data at row {}", r + 1));
  return m;
}

}  // namespace pgc::linalg
