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

#include "pgc/ordering.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <limits>
#include <queue>

#include "pgc/error.hpp"
#include "pgc/rng.hpp"
#include "text_util.hpp"

namespace pgc {

OrderingMatrix::OrderingMatrix(std::size_t n_chunks, std::vector<std::vector<std::uint32_t>> sequence)
    : n_chunks_(n_chunks), sequence_(std::move(sequence)), rank_(n_chunks * sequence_.size(), 0) {
  const std::size_t m = sequence_.size();
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t pos = 0; pos < sequence_[j].size(); ++pos) {
      const std::uint32_t i = sequence_[j][pos];
      if (i >= n_chunks_) throw InvalidParameter(fmt::format("ordering: worker {} lists chunk {}", j + 1, i + 1));
      auto& slot = rank_[i * m + j];
      if (slot != 0) throw InvalidParameter(fmt::format("ordering: worker {} ranks chunk {} twice", j + 1, i + 1));
      slot = static_cast<std::uint32_t>(pos + 1);
    }
  }
}

OrderingMatrix OrderingMatrix::natural(const AssignmentMatrix& a) {
  std::vector<std::vector<std::uint32_t>> seq(a.n_workers());
  for (std::size_t j = 0; j < a.n_workers(); ++j) seq[j].assign(a.support(j).begin(), a.support(j).end());
  return OrderingMatrix(a.n_chunks(), std::move(seq));
}

std::size_t OrderingMatrix::row_sum(std::size_t chunk) const {
  std::size_t sum = 0;
  for (std::size_t j = 0; j < sequence_.size(); ++j) sum += rank(chunk, j);
  return sum;
}

std::size_t OrderingMatrix::max_row_sum() const {
  std::size_t best = 0;
  for (std::size_t i = 0; i < n_chunks_; ++i) best = std::max(best, row_sum(i));
  return best;
}

void OrderingMatrix::check_consistent(const AssignmentMatrix& a) const {
  if (a.n_chunks() != n_chunks_ || a.n_workers() != sequence_.size()) {
    throw InvalidParameter("ordering and assignment dimensions differ");
  }
  for (std::size_t j = 0; j < sequence_.size(); ++j) {
    if (sequence_[j].size() != a.load(j)) {
      throw InvalidParameter(fmt::format("ordering ranks {} chunks at worker {}, assignment holds {}",
                                         sequence_[j].size(), j + 1, a.load(j)));
    }
    for (const std::uint32_t i : a.support(j)) {
      if (rank(i, j) == 0) throw InvalidParameter(fmt::format("ordering misses chunk {} at worker {}", i + 1, j + 1));
    }
  }
}

namespace {

std::size_t require_regular(const AssignmentMatrix& a) {
  const auto delta = a.regular_degree();
  if (!delta) throw UnsupportedAssignment("Q metrics need a square assignment with equal row and column sums");
  return *delta;
}

}  // namespace

std::size_t q_value(const AssignmentMatrix& a, const OrderingMatrix& o, std::size_t chunk) {
  const std::size_t delta = require_regular(a);
  o.check_consistent(a);
  const std::size_t m = a.n_workers();
  std::size_t q = (m - delta) * delta;
  for (const std::uint32_t j : a.holders(chunk)) q += o.rank(chunk, j) - 1;
  return q;
}

std::size_t q_max(const AssignmentMatrix& a, const OrderingMatrix& o) {
  std::size_t best = 0;
  for (std::size_t i = 0; i < a.n_chunks(); ++i) best = std::max(best, q_value(a, o, i));
  return best;
}

std::size_t q_max_lower_bound(std::size_t m, std::size_t delta) {
  return (m - delta - 1) * delta + delta * (delta + 1) / 2;
}

std::vector<std::uint32_t> find_perfect_matching(const BipartiteSupport& support) {
  const std::size_t n = support.size();
  if (n == 0) throw UnsupportedAssignment("perfect matching of an empty support");
  const std::size_t delta = support.front().size();
  if (delta == 0) throw UnsupportedAssignment("perfect matching needs row sums >= 1");
  std::vector<std::size_t> col_sum(n, 0);
  BipartiteSupport adj(n);
  for (std::size_t u = 0; u < n; ++u) {
    if (support[u].size() != delta) throw UnsupportedAssignment("perfect matching needs equal row sums");
    adj[u] = support[u];
    std::ranges::sort(adj[u]);
    for (std::size_t k = 0; k < adj[u].size(); ++k) {
      const std::uint32_t v = adj[u][k];
      if (v >= n || (k > 0 && adj[u][k - 1] == v)) throw UnsupportedAssignment("perfect matching needs a 0/1 square support");
      ++col_sum[v];
    }
  }
  if (std::ranges::any_of(col_sum, [&](std::size_t c) { return c != delta; })) {
    throw UnsupportedAssignment("perfect matching needs column sums equal to row sums");
  }

  constexpr std::uint32_t kNil = std::numeric_limits<std::uint32_t>::max();
  constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max();
  std::vector<std::uint32_t> match_left(n, kNil);
  std::vector<std::uint32_t> match_right(n, kNil);
  std::vector<std::size_t> dist(n);
  std::vector<std::size_t> next_edge(n);

  auto bfs = [&] {
    std::queue<std::uint32_t> frontier;
    for (std::uint32_t u = 0; u < n; ++u) {
      dist[u] = match_left[u] == kNil ? 0 : kInf;
      if (dist[u] == 0) frontier.push(u);
    }
    bool reachable_free = false;
    while (!frontier.empty()) {
      const std::uint32_t u = frontier.front();
      frontier.pop();
      for (const std::uint32_t v : adj[u]) {
        const std::uint32_t w = match_right[v];
        if (w == kNil) {
          reachable_free = true;
        } else if (dist[w] == kInf) {
          dist[w] = dist[u] + 1;
          frontier.push(w);
        }
      }
    }
    return reachable_free;
  };

  auto dfs = [&](auto&& self, std::uint32_t u) -> bool {
    for (; next_edge[u] < adj[u].size(); ++next_edge[u]) {
      const std::uint32_t v = adj[u][next_edge[u]];
      const std::uint32_t w = match_right[v];
      if (w == kNil || (dist[w] == dist[u] + 1 && self(self, w))) {
        match_left[u] = v;
        match_right[v] = u;
        return true;
      }
    }
    dist[u] = kInf;
    return false;
  };

  std::size_t matched = 0;
  while (bfs()) {
    std::ranges::fill(next_edge, 0);
    for (std::uint32_t u = 0; u < n; ++u) {
      if (match_left[u] == kNil && dfs(dfs, u)) ++matched;
    }
  }
  if (matched != n) throw UnsupportedAssignment("support has no perfect matching");
  return match_left;
}

OptimalOrdering chunk_ordering(const AssignmentMatrix& a) {
  const std::size_t delta = require_regular(a);
  const std::size_t m = a.n_workers();
  BipartiteSupport remaining(m);
  for (std::size_t j = 0; j < m; ++j) remaining[j].assign(a.support(j).begin(), a.support(j).end());

  OptimalOrdering out;
  std::vector<std::vector<std::uint32_t>> sequence(m);
  for (std::size_t r = 0; r < delta; ++r) {
    std::vector<std::uint32_t> perm = find_perfect_matching(remaining);
    for (std::size_t j = 0; j < m; ++j) {
      sequence[j].push_back(perm[j]);
      std::erase(remaining[j], perm[j]);
    }
    out.decomposition.permutations.push_back(std::move(perm));
  }
  out.ordering = OrderingMatrix(a.n_chunks(), std::move(sequence));
  return out;
}

OrderingMatrix random_ordering(const AssignmentMatrix& a, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<std::uint32_t>> sequence(a.n_workers());
  for (std::size_t j = 0; j < a.n_workers(); ++j) {
    sequence[j].assign(a.support(j).begin(), a.support(j).end());
    rng.shuffle(std::span<std::uint32_t>(sequence[j]));
  }
  return OrderingMatrix(a.n_chunks(), std::move(sequence));
}

OrderingMatrix best_random_ordering(const AssignmentMatrix& a, std::uint64_t seed, std::size_t draws) {
  if (draws == 0) throw InvalidParameter("best_random_ordering needs at least one draw");
  require_regular(a);
  OrderingMatrix best;
  std::size_t best_q = std::numeric_limits<std::size_t>::max();
  for (std::size_t t = 0; t < draws; ++t) {
    OrderingMatrix candidate = random_ordering(a, mix_seed(seed, t));
    const std::size_t q = q_max(a, candidate);
    if (q < best_q) {
      best_q = q;
      best = std::move(candidate);
    }
  }
  return best;
}

std::string format_ordering(const OrderingMatrix& o) {
  std::string out = fmt::format("{} {}\n", o.n_chunks(), o.n_workers());
  for (std::size_t j = 0; j < o.n_workers(); ++j) {
    out += fmt::format("{}:", j + 1);
    const auto seq = o.sequence(j);
    for (std::size_t pos = 0; pos < seq.size(); ++pos) out += fmt::format(" ({},{})", seq[pos] + 1, pos + 1);
    out += '\n';
  }
  return out;
}

OrderingMatrix parse_ordering(std::string_view text) {
  const auto lines = detail::split_lines(text);
  bool have_header = false;
  std::size_t n_chunks = 0;
  std::size_t n_workers = 0;
  std::vector<std::vector<std::uint32_t>> sequence;
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const auto line = detail::trim(lines[ln]);
    if (line.empty() || line.front() == '#') continue;
    auto fail = [&](const std::string& what) {
      return InvalidParameter(fmt::format("ordering line {}: {}", ln + 1, what));
    };
    if (!have_header) {
      const auto tok = detail::split_ws(line);
      const auto n = tok.size() == 2 ? detail::parse_number<std::size_t>(tok[0]) : std::nullopt;
      const auto m = tok.size() == 2 ? detail::parse_number<std::size_t>(tok[1]) : std::nullopt;
      if (!n || !m) throw fail("expected header 'N m'");
      n_chunks = *n;
      n_workers = *m;
      have_header = true;
      continue;
    }
    const auto colon = line.find(':');
    const auto j = colon == std::string_view::npos ? std::nullopt
                                                   : detail::parse_number<std::size_t>(detail::trim(line.substr(0, colon)));
    if (!j || *j != sequence.size() + 1) throw fail(fmt::format("expected worker index {}", sequence.size() + 1));
    std::vector<std::pair<std::uint32_t, std::uint32_t>> ranked;  // (rank, chunk)
    for (const auto tok : detail::split_ws(line.substr(colon + 1))) {
      const auto comma = tok.find(',');
      if (tok.size() < 5 || tok.front() != '(' || tok.back() != ')' || comma == std::string_view::npos) {
        throw fail(fmt::format("bad pair '{}'", tok));
      }
      const auto i = detail::parse_number<std::uint32_t>(tok.substr(1, comma - 1));
      const auto r = detail::parse_number<std::uint32_t>(tok.substr(comma + 1, tok.size() - comma - 2));
      if (!i || !r || *i == 0 || *r == 0) throw fail(fmt::format("bad pair '{}'", tok));
      ranked.emplace_back(*r, *i - 1);
    }
    std::ranges::sort(ranked);
    std::vector<std::uint32_t> seq;
    for (std::size_t k = 0; k < ranked.size(); ++k) {
      if (ranked[k].first != k + 1) throw fail("ranks must be a permutation of 1..delta_j");
      seq.push_back(ranked[k].second);
    }
    sequence.push_back(std::move(seq));
  }
  if (!have_header) throw InvalidParameter("ordering: missing 'N m' header");
  if (sequence.size() != n_workers) {
    throw InvalidParameter(fmt::format("ordering: header declares {} workers, found {}", n_workers, sequence.size()));
  }
  return OrderingMatrix(n_chunks, std::move(sequence));
}

}  // namespace pgc
