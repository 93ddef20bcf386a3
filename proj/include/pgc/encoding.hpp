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

// Encoding-coefficient agreement for partial stragglers.
//
// The parameter server shares an ell x m Gaussian matrix R once. When it
// decides to stop the iteration it broadcasts psi, the number of chunks each
// worker has finished. From psi and the (known) ordering every worker can tell
// who has processed what, so each can lay out the same m x (N ell) coefficient
// matrix B: block-column i has a free row for every worker that processed
// chunk i and zeros elsewhere.
//
// The server decodes part k as sum_j R(k, j) g_j, so it needs R B^(i) = I_ell
// for every block. With X = R restricted to the processing workers' columns,
// each block is solved column by column as the minimum-norm least-squares
// solution X^+ e_k. The minimum-norm solution is unique, so workers that
// share a block compute it independently and still agree. When fewer than
// ell copies of a chunk exist the block is only a projection and contributes
// ell - Delta_i to the squared error.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pgc/assignment.hpp"
#include "pgc/linalg.hpp"
#include "pgc/ordering.hpp"

namespace pgc {

/// ell x m matrix of i.i.d. standard normals, drawn row by row from
/// Rng(seed).normal().
struct CompressionMatrix {
  linalg::Matrix entries;

  static CompressionMatrix generate(std::size_t ell, std::size_t m, std::uint64_t seed);

  std::size_t ell() const noexcept { return entries.rows(); }
  std::size_t n_workers() const noexcept { return entries.cols(); }
  double operator()(std::size_t k, std::size_t j) const noexcept { return entries(k, j); }

  bool operator==(const CompressionMatrix&) const = default;
};

/// psi_j = number of chunks worker j reports as processed.
using GlobalState = std::vector<std::uint32_t>;
/// Delta_i = number of processed copies of chunk i.
using CoverageVector = std::vector<std::uint32_t>;

/// Throws InconsistentState when some psi_j exceeds the worker's load.
void check_state(const AssignmentMatrix& a, const GlobalState& psi);

CoverageVector coverage(const AssignmentMatrix& a, const OrderingMatrix& o, const GlobalState& psi);

/// Coefficient matrix B with its free-entry mask. Block i stores a
/// Delta_i x ell matrix whose row r belongs to worker free_rows(i)[r].
class EncodingMatrix {
 public:
  EncodingMatrix() = default;
  EncodingMatrix(std::size_t n_workers, std::size_t ell, std::vector<std::vector<std::uint32_t>> free_rows);

  std::size_t n_workers() const noexcept { return n_workers_; }
  std::size_t n_chunks() const noexcept { return free_rows_.size(); }
  std::size_t ell() const noexcept { return ell_; }

  /// Workers that processed `chunk`, ascending.
  std::span<const std::uint32_t> free_rows(std::size_t chunk) const { return free_rows_[chunk]; }
  bool is_free(std::size_t worker, std::size_t chunk) const;
  /// Chunks `worker` has processed, ascending: the block-columns of B~_j.
  std::vector<std::uint32_t> relevant_blocks(std::size_t worker) const;

  const linalg::Matrix& block(std::size_t chunk) const { return blocks_[chunk]; }
  void set_block(std::size_t chunk, linalg::Matrix values);
  bool is_solved() const;

  /// B(worker, chunk * ell + k); zero outside the mask.
  double value(std::size_t worker, std::size_t chunk, std::size_t k) const;
  /// epsilon_j: the worker's row of B, length N * ell.
  std::vector<double> row(std::size_t worker) const;
  linalg::Matrix to_dense() const;
  /// 0/1 matrix of the free entries, m x (N ell).
  linalg::Matrix mask_dense() const;

 private:
  std::size_t n_workers_ = 0;
  std::size_t ell_ = 0;
  std::vector<std::vector<std::uint32_t>> free_rows_;
  std::vector<linalg::Matrix> blocks_;
};

EncodingMatrix build_indeterminate_mask(const AssignmentMatrix& a, const OrderingMatrix& o, const GlobalState& psi,
                                        std::size_t ell);

/// The shared per-block solve: columns k = 0..ell-1 of X^+ for X = R(:, workers),
/// in ascending k through one SVD. Empty `workers` gives a 0 x ell block.
linalg::Matrix solve_block(const CompressionMatrix& r, std::span<const std::uint32_t> workers);

struct SolvedBlock {
  std::uint32_t chunk = 0;
  std::vector<std::uint32_t> workers;
  linalg::Matrix values;
};

/// What one worker computes on receiving psi: every block-column its
/// processed chunks touch (other workers' rows included), and its own row.
struct WorkerCoefficients {
  std::uint32_t worker = 0;
  std::vector<SolvedBlock> blocks;
  std::vector<double> row;
};

WorkerCoefficients solve_worker_coefficients(std::size_t worker, const CompressionMatrix& r,
                                             const EncodingMatrix& mask);

/// Fills every block of `mask` with the shared solve (what all workers
/// jointly end up with).
EncodingMatrix solve_all(const CompressionMatrix& r, EncodingMatrix mask);

/// Synthetic per-chunk gradients of common dimension d.
class GradientSet {
 public:
  GradientSet(std::size_t n_chunks, std::size_t dim);
  static GradientSet random(std::size_t n_chunks, std::size_t dim, std::uint64_t seed);

  std::size_t n_chunks() const noexcept { return n_chunks_; }
  std::size_t dim() const noexcept { return dim_; }

  std::span<double> chunk(std::size_t i) { return {data_.data() + i * dim_, dim_}; }
  std::span<const double> chunk(std::size_t i) const { return {data_.data() + i * dim_, dim_}; }
  /// Part k of ell (length part_length(dim, ell), zero-padded at the end).
  std::vector<double> part(std::size_t i, std::size_t k, std::size_t ell) const;
  /// sum_i g_i.
  std::vector<double> total() const;

 private:
  std::size_t n_chunks_;
  std::size_t dim_;
  std::vector<double> data_;
};

/// ceil(dim / ell).
std::size_t part_length(std::size_t dim, std::size_t ell);

/// g_j = sum_i sum_k row[i ell + k] g_i[k]; throws InvalidParameter when the
/// row length is not N ell.
std::vector<double> encode_gradient(std::span<const double> row, const GradientSet& grads, std::size_t ell);

/// Part k = sum_j R(k, j) g_j. An empty entry is a worker that sent nothing.
std::vector<std::vector<double>> decode(const CompressionMatrix& r, const std::vector<std::vector<double>>& encoded);

/// Concatenates decoded parts and drops the padding beyond `dim`.
std::vector<double> assemble(const std::vector<std::vector<double>>& parts, std::size_t dim);

/// sum_k ||X values(:, k) - e_k||^2 for one block, X = R(:, workers). An
/// empty block contributes ell.
double block_residual(const CompressionMatrix& r, std::span<const std::uint32_t> workers,
                      const linalg::Matrix& values);

/// ||(1_N^T kron I_ell) - R B||_F^2 for a fully solved B.
double residual_error(const CompressionMatrix& r, const EncodingMatrix& b);

/// sum_i max(0, ell - Delta_i).
std::size_t theoretical_error(std::span<const std::uint32_t> coverage, std::size_t ell);

/// Whitespace-separated integers, used for psi and coverage.
std::string format_counts(std::span<const std::uint32_t> counts);
std::vector<std::uint32_t> parse_counts(std::string_view text);

}  // namespace pgc
