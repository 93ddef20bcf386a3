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

// Chunk processing order within workers.
//
// For a worker j and a chunk i it holds, rank(i, j) in [1, delta_j] is the
// position at which j processes i (1 = first). Q_i is the largest number of
// chunk-processings the cluster can perform while no copy of chunk i has been
// processed; on a square delta-regular assignment
//
//   Q_i = sum_j [rank(i, j) != 0] (rank(i, j) - 1) + (m - delta) delta,
//
// so minimising max_i Q_i is the same as minimising the largest row sum of
// the rank matrix. Every row sum is at least delta (delta + 1) / 2, and
// peeling delta disjoint perfect matchings off the support and giving the
// r-th one rank r meets that bound on every row.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pgc/assignment.hpp"

namespace pgc {

class OrderingMatrix {
 public:
  OrderingMatrix() = default;

  /// `sequence[j]` lists worker j's chunks in processing order.
  OrderingMatrix(std::size_t n_chunks, std::vector<std::vector<std::uint32_t>> sequence);

  /// Processing order equal to the order the assignment lists the chunks in.
  static OrderingMatrix natural(const AssignmentMatrix& a);

  std::size_t n_chunks() const noexcept { return n_chunks_; }
  std::size_t n_workers() const noexcept { return sequence_.size(); }

  std::span<const std::uint32_t> sequence(std::size_t worker) const { return sequence_[worker]; }
  /// 1-based rank of `chunk` at `worker`, 0 when the worker does not hold it.
  std::uint32_t rank(std::size_t chunk, std::size_t worker) const { return rank_[chunk * sequence_.size() + worker]; }

  std::size_t row_sum(std::size_t chunk) const;
  std::size_t max_row_sum() const;

  /// Throws InvalidParameter unless every worker orders exactly its support.
  void check_consistent(const AssignmentMatrix& a) const;

  bool operator==(const OrderingMatrix& other) const {
    return n_chunks_ == other.n_chunks_ && sequence_ == other.sequence_;
  }

 private:
  std::size_t n_chunks_ = 0;
  std::vector<std::vector<std::uint32_t>> sequence_;
  std::vector<std::uint32_t> rank_;
};

/// permutations[r][worker] = chunk; the r-th matching gets rank r + 1.
struct MatchingDecomposition {
  std::vector<std::vector<std::uint32_t>> permutations;
};

struct OptimalOrdering {
  OrderingMatrix ordering;
  MatchingDecomposition decomposition;
};

/// Worker-to-chunk adjacency of a square bipartite support.
using BipartiteSupport = std::vector<std::vector<std::uint32_t>>;

std::size_t q_value(const AssignmentMatrix& a, const OrderingMatrix& o, std::size_t chunk);
std::size_t q_max(const AssignmentMatrix& a, const OrderingMatrix& o);
/// (m - delta - 1) delta + delta (delta + 1) / 2, the least q_max any
/// ordering of a square delta-regular assignment can have.
std::size_t q_max_lower_bound(std::size_t m, std::size_t delta);

/// Hopcroft-Karp on a square support whose row and column sums all equal
/// some delta >= 1; returns match[worker] = chunk. Throws
/// UnsupportedAssignment when the sums differ (no Hall guarantee).
std::vector<std::uint32_t> find_perfect_matching(const BipartiteSupport& support);

/// Optimal ordering for a square delta-regular assignment.
OptimalOrdering chunk_ordering(const AssignmentMatrix& a);

/// Independent uniform permutation per worker; accepts any assignment.
OrderingMatrix random_ordering(const AssignmentMatrix& a, std::uint64_t seed);

/// Draws `draws` random orderings (seeds derived from `seed`) and keeps the
/// first one with the smallest q_max. Square regular assignments only.
OrderingMatrix best_random_ordering(const AssignmentMatrix& a, std::uint64_t seed, std::size_t draws);

/// Header "N m", then "j: (i1,r1) (i2,r2) ..." per worker in rank order.
std::string format_ordering(const OrderingMatrix& o);
OrderingMatrix parse_ordering(std::string_view text);

}  // namespace pgc
