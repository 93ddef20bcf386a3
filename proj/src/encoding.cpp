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

#include "pgc/encoding.hpp"

#include <fmt/format.h>

#include <algorithm>

#include "pgc/error.hpp"
#include "pgc/rng.hpp"
#include "pgc/simd.hpp"
#include "text_util.hpp"

namespace pgc {

CompressionMatrix CompressionMatrix::generate(std::size_t ell, std::size_t m, std::uint64_t seed) {
  if (ell == 0 || m == 0) throw InvalidParameter("compression matrix needs ell >= 1 and m >= 1");
  Rng rng(seed);
  CompressionMatrix r{linalg::Matrix(ell, m)};
  for (std::size_t k = 0; k < ell; ++k)
    for (std::size_t j = 0; j < m; ++j) r.entries(k, j) = rng.normal();
  return r;
}

void check_state(const AssignmentMatrix& a, const GlobalState& psi) {
  if (psi.size() != a.n_workers()) {
    throw InconsistentState(fmt::format("state has {} entries for {} workers", psi.size(), a.n_workers()));
  }
  for (std::size_t j = 0; j < psi.size(); ++j) {
    if (psi[j] > a.load(j)) {
      throw InconsistentState(fmt::format("worker {} reports {} chunks but holds {}", j + 1, psi[j], a.load(j)));
    }
  }
}

CoverageVector coverage(const AssignmentMatrix& a, const OrderingMatrix& o, const GlobalState& psi) {
  check_state(a, psi);
  CoverageVector delta(a.n_chunks(), 0);
  for (std::size_t j = 0; j < a.n_workers(); ++j) {
    const auto seq = o.sequence(j);
    for (std::size_t pos = 0; pos < psi[j]; ++pos) ++delta[seq[pos]];
  }
  return delta;
}

EncodingMatrix::EncodingMatrix(std::size_t n_workers, std::size_t ell, std::vector<std::vector<std::uint32_t>> free_rows)
    : n_workers_(n_workers), ell_(ell), free_rows_(std::move(free_rows)), blocks_(free_rows_.size()) {
  if (ell_ == 0) throw InvalidParameter("encoding matrix needs ell >= 1");
}

bool EncodingMatrix::is_free(std::size_t worker, std::size_t chunk) const {
  const auto& rows = free_rows_[chunk];
  return std::binary_search(rows.begin(), rows.end(), static_cast<std::uint32_t>(worker));
}

std::vector<std::uint32_t> EncodingMatrix::relevant_blocks(std::size_t worker) const {
  std::vector<std::uint32_t> out;
  for (std::size_t i = 0; i < free_rows_.size(); ++i)
    if (is_free(worker, i)) out.push_back(static_cast<std::uint32_t>(i));
  return out;
}

void EncodingMatrix::set_block(std::size_t chunk, linalg::Matrix values) {
  if (values.rows() != free_rows_[chunk].size() || values.cols() != ell_) {
    throw InvalidParameter(fmt::format("block {} must be {}x{}", chunk + 1, free_rows_[chunk].size(), ell_));
  }
  blocks_[chunk] = std::move(values);
}

bool EncodingMatrix::is_solved() const {
  for (std::size_t i = 0; i < blocks_.size(); ++i)
    if (blocks_[i].rows() != free_rows_[i].size() || blocks_[i].cols() != ell_) return false;
  return true;
}

double EncodingMatrix::value(std::size_t worker, std::size_t chunk, std::size_t k) const {
  const auto& rows = free_rows_[chunk];
  const auto it = std::lower_bound(rows.begin(), rows.end(), static_cast<std::uint32_t>(worker));
  if (it == rows.end() || *it != worker || blocks_[chunk].cols() != ell_) return 0.0;
  return blocks_[chunk](static_cast<std::size_t>(it - rows.begin()), k);
}

std::vector<double> EncodingMatrix::row(std::size_t worker) const {
  std::vector<double> out(free_rows_.size() * ell_, 0.0);
  for (std::size_t i = 0; i < free_rows_.size(); ++i)
    for (std::size_t k = 0; k < ell_; ++k) out[i * ell_ + k] = value(worker, i, k);
  return out;
}

linalg::Matrix EncodingMatrix::to_dense() const {
  linalg::Matrix out(n_workers_, free_rows_.size() * ell_);
  for (std::size_t i = 0; i < free_rows_.size(); ++i) {
    if (blocks_[i].cols() != ell_) continue;
    for (std::size_t r = 0; r < free_rows_[i].size(); ++r)
      for (std::size_t k = 0; k < ell_; ++k) out(free_rows_[i][r], i * ell_ + k) = blocks_[i](r, k);
  }
  return out;
}

linalg::Matrix EncodingMatrix::mask_dense() const {
  linalg::Matrix out(n_workers_, free_rows_.size() * ell_);
  for (std::size_t i = 0; i < free_rows_.size(); ++i)
    for (const std::uint32_t w : free_rows_[i])
      for (std::size_t k = 0; k < ell_; ++k) out(w, i * ell_ + k) = 1.0;
  return out;
}

EncodingMatrix build_indeterminate_mask(const AssignmentMatrix& a, const OrderingMatrix& o, const GlobalState& psi,
                                        std::size_t ell) {
  check_state(a, psi);
  std::vector<std::vector<std::uint32_t>> free_rows(a.n_chunks());
  for (std::size_t j = 0; j < a.n_workers(); ++j) {
    const auto seq = o.sequence(j);
    for (std::size_t pos = 0; pos < psi[j]; ++pos) free_rows[seq[pos]].push_back(static_cast<std::uint32_t>(j));
  }
  return EncodingMatrix(a.n_workers(), ell, std::move(free_rows));
}

linalg::Matrix solve_block(const CompressionMatrix& r, std::span<const std::uint32_t> workers) {
  const std::size_t ell = r.ell();
  linalg::Matrix values(workers.size(), ell);
  if (workers.empty()) return values;
  linalg::Matrix x(ell, workers.size());
  for (std::size_t c = 0; c < workers.size(); ++c)
    for (std::size_t k = 0; k < ell; ++k) x(k, c) = r(k, workers[c]);
  const linalg::Svd svd = linalg::jacobi_svd(x, true);
  std::vector<double> target(ell, 0.0);
  for (std::size_t k = 0; k < ell; ++k) {
    target[k] = 1.0;
    const std::vector<double> column = linalg::min_norm_least_squares(svd, target);
    std::ranges::copy(column, values.col(k).begin());
    target[k] = 0.0;
  }
  return values;
}

WorkerCoefficients solve_worker_coefficients(std::size_t worker, const CompressionMatrix& r,
                                             const EncodingMatrix& mask) {
  if (r.n_workers() != mask.n_workers() || r.ell() != mask.ell()) {
    throw InvalidParameter("compression matrix does not match the encoding layout");
  }
  WorkerCoefficients out;
  out.worker = static_cast<std::uint32_t>(worker);
  out.row.assign(mask.n_chunks() * mask.ell(), 0.0);
  for (const std::uint32_t chunk : mask.relevant_blocks(worker)) {
    SolvedBlock block;
    block.chunk = chunk;
    block.workers.assign(mask.free_rows(chunk).begin(), mask.free_rows(chunk).end());
    block.values = solve_block(r, block.workers);
    const auto pos = static_cast<std::size_t>(std::ranges::find(block.workers, worker) - block.workers.begin());
    for (std::size_t k = 0; k < mask.ell(); ++k) out.row[chunk * mask.ell() + k] = block.values(pos, k);
    out.blocks.push_back(std::move(block));
  }
  return out;
}

EncodingMatrix solve_all(const CompressionMatrix& r, EncodingMatrix mask) {
  if (r.n_workers() != mask.n_workers() || r.ell() != mask.ell()) {
    throw InvalidParameter("compression matrix does not match the encoding layout");
  }
  for (std::size_t i = 0; i < mask.n_chunks(); ++i) mask.set_block(i, solve_block(r, mask.free_rows(i)));
  return mask;
}

GradientSet::GradientSet(std::size_t n_chunks, std::size_t dim)
    : n_chunks_(n_chunks), dim_(dim), data_(n_chunks * dim, 0.0) {}

GradientSet GradientSet::random(std::size_t n_chunks, std::size_t dim, std::uint64_t seed) {
  GradientSet g(n_chunks, dim);
  Rng rng(seed);
  for (double& x : g.data_) x = rng.normal();
  return g;
}

std::size_t part_length(std::size_t dim, std::size_t ell) {
  if (ell == 0) throw InvalidParameter("ell must be >= 1");
  return (dim + ell - 1) / ell;
}

std::vector<double> GradientSet::part(std::size_t i, std::size_t k, std::size_t ell) const {
  const std::size_t len = part_length(dim_, ell);
  std::vector<double> out(len, 0.0);
  const auto g = chunk(i);
  for (std::size_t t = 0; t < len && k * len + t < dim_; ++t) out[t] = g[k * len + t];
  return out;
}

std::vector<double> GradientSet::total() const {
  std::vector<double> sum(dim_, 0.0);
  for (std::size_t i = 0; i < n_chunks_; ++i) {
    const auto g = chunk(i);
    for (std::size_t t = 0; t < dim_; ++t) sum[t] += g[t];
  }
  return sum;
}

std::vector<double> encode_gradient(std::span<const double> row, const GradientSet& grads, std::size_t ell) {
  if (row.size() != grads.n_chunks() * ell) {
    throw InvalidParameter(fmt::format("coefficient row has length {}, expected N * ell = {}", row.size(),
                                       grads.n_chunks() * ell));
  }
  const simd::Kernels& kern = simd::active();
  const std::size_t len = part_length(grads.dim(), ell);
  std::vector<double> out(len, 0.0);
  for (std::size_t i = 0; i < grads.n_chunks(); ++i) {
    const auto g = grads.chunk(i);
    for (std::size_t k = 0; k < ell; ++k) {
      const double c = row[i * ell + k];
      const std::size_t begin = k * len;
      if (c == 0.0 || begin >= g.size()) continue;
      kern.axpy(c, g.data() + begin, out.data(), std::min(len, g.size() - begin));
    }
  }
  return out;
}

std::vector<std::vector<double>> decode(const CompressionMatrix& r, const std::vector<std::vector<double>>& encoded) {
  if (encoded.size() != r.n_workers()) {
    throw InvalidParameter(fmt::format("decode got {} messages for {} workers", encoded.size(), r.n_workers()));
  }
  std::size_t len = 0;
  for (const auto& g : encoded) {
    if (g.empty()) continue;
    if (len != 0 && g.size() != len) throw InvalidParameter("encoded vectors differ in length");
    len = g.size();
  }
  const simd::Kernels& kern = simd::active();
  std::vector<std::vector<double>> parts(r.ell(), std::vector<double>(len, 0.0));
  for (std::size_t k = 0; k < r.ell(); ++k)
    for (std::size_t j = 0; j < encoded.size(); ++j)
      if (!encoded[j].empty()) kern.axpy(r(k, j), encoded[j].data(), parts[k].data(), len);
  return parts;
}

std::vector<double> assemble(const std::vector<std::vector<double>>& parts, std::size_t dim) {
  std::vector<double> out;
  out.reserve(dim);
  for (const auto& p : parts)
    for (const double x : p)
      if (out.size() < dim) out.push_back(x);
  if (out.size() != dim) throw InvalidParameter("decoded parts are shorter than the gradient dimension");
  return out;
}

double block_residual(const CompressionMatrix& r, std::span<const std::uint32_t> workers,
                      const linalg::Matrix& values) {
  const std::size_t ell = r.ell();
  double total = 0.0;
  std::vector<double> column(ell);
  for (std::size_t k = 0; k < ell; ++k) {
    std::ranges::fill(column, 0.0);
    column[k] = -1.0;
    for (std::size_t c = 0; c < workers.size(); ++c)
      for (std::size_t q = 0; q < ell; ++q) column[q] += r(q, workers[c]) * values(c, k);
    for (const double e : column) total += e * e;
  }
  return total;
}

double residual_error(const CompressionMatrix& r, const EncodingMatrix& b) {
  if (!b.is_solved()) throw InvalidParameter("residual_error needs every block solved");
  if (r.n_workers() != b.n_workers() || r.ell() != b.ell()) {
    throw InvalidParameter("compression matrix does not match the encoding layout");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < b.n_chunks(); ++i) total += block_residual(r, b.free_rows(i), b.block(i));
  return total;
}

std::size_t theoretical_error(std::span<const std::uint32_t> coverage, std::size_t ell) {
  std::size_t total = 0;
  for (const std::uint32_t d : coverage) total += d < ell ? ell - d : 0;
  return total;
}

std::string format_counts(std::span<const std::uint32_t> counts) {
  std::string out;
  for (std::size_t j = 0; j < counts.size(); ++j) {
    if (j != 0) out += ' ';
    out += std::to_string(counts[j]);
  }
  return out;
}

std::vector<std::uint32_t> parse_counts(std::string_view text) {
  std::vector<std::uint32_t> out;
  for (const auto line : detail::split_lines(text)) {
    for (const auto tok : detail::split_ws(line)) {
      const auto v = detail::parse_number<std::uint32_t>(tok);
      if (!v) throw InvalidParameter(fmt::format("bad count '{}'", tok));
      out.push_back(*v);
    }
  }
  return out;
}

}  // namespace pgc
