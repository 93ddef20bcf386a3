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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pgc {

/// Chunk-to-worker assignment: which of the N data chunks each of the m
/// workers holds. Only the support matters; entries are implicitly 0/1.
///
/// Indices are 0-based in memory and 1-based in the text format.
class AssignmentMatrix {
 public:
  AssignmentMatrix() = default;

  /// `support[j]` lists the chunks held by worker j. Throws InvalidParameter
  /// on out-of-range or duplicate indices, or when a chunk is held by nobody.
  AssignmentMatrix(std::size_t n_chunks, std::vector<std::vector<std::uint32_t>> support);

  std::size_t n_chunks() const noexcept { return n_chunks_; }
  std::size_t n_workers() const noexcept { return support_.size(); }

  std::span<const std::uint32_t> support(std::size_t worker) const { return support_[worker]; }
  /// Workers holding `chunk`, ascending.
  std::span<const std::uint32_t> holders(std::size_t chunk) const { return holders_[chunk]; }

  std::size_t load(std::size_t worker) const { return support_[worker].size(); }
  std::size_t replication(std::size_t chunk) const { return holders_[chunk].size(); }
  bool holds(std::size_t worker, std::size_t chunk) const;

  /// delta when N == m and every row and column sum equals delta.
  std::optional<std::size_t> regular_degree() const;
  bool is_symmetric() const;

  bool operator==(const AssignmentMatrix& other) const {
    return n_chunks_ == other.n_chunks_ && support_ == other.support_;
  }

 private:
  std::size_t n_chunks_ = 0;
  std::vector<std::vector<std::uint32_t>> support_;
  std::vector<std::vector<std::uint32_t>> holders_;
};

struct RegularGraphSpec {
  std::size_t m = 0;
  std::size_t degree = 0;
  std::uint64_t seed = 0;

  void validate() const;
};

inline constexpr int kRegularGraphAttempts = 1000;

/// Worker j holds chunks j, j+1, ..., j+delta-1 (mod m).
AssignmentMatrix build_cyclic(std::size_t m, std::size_t delta);

/// Adjacency of a random simple `degree`-regular graph on m vertices, used as
/// a square assignment. Points are paired one edge at a time, rejecting pairs
/// that would close a loop or a parallel edge; a dead end restarts with the
/// next attempt seed. Throws ConstructionFailed after kRegularGraphAttempts.
AssignmentMatrix build_regular_graph(const RegularGraphSpec& spec);

/// Largest |lambda| over the adjacency spectrum once the trivial eigenvalues
/// are removed: one copy of the Perron value `degree`, and one copy of
/// -degree when present (bipartite graphs) and something else remains.
/// Requires a square, symmetric, regular assignment.
double second_eigenvalue(const AssignmentMatrix& a);

/// 2 sqrt(degree - 1).
double ramanujan_bound(std::size_t degree);

/// Header "N m", then "j: i1 i2 ..." per worker, all 1-based.
std::string format_assignment(const AssignmentMatrix& a);
AssignmentMatrix parse_assignment(std::string_view text);

AssignmentMatrix read_assignment_file(const std::string& path);
void write_assignment_file(const std::string& path, const AssignmentMatrix& a);

}  // namespace pgc
