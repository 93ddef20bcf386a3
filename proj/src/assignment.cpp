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

#include "pgc/assignment.hpp"

#include <fmt/format.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "pgc/error.hpp"
#include "pgc/rng.hpp"
#include "text_util.hpp"

namespace pgc {

AssignmentMatrix::AssignmentMatrix(std::size_t n_chunks, std::vector<std::vector<std::uint32_t>> support)
    : n_chunks_(n_chunks), support_(std::move(support)), holders_(n_chunks) {
  if (n_chunks_ == 0 || support_.empty()) throw InvalidParameter("assignment needs N >= 1 and m >= 1");
  for (std::size_t j = 0; j < support_.size(); ++j) {
    for (const std::uint32_t i : support_[j]) {
      if (i >= n_chunks_) {
        throw InvalidParameter(fmt::format("worker {} lists chunk {} outside [1, {}]", j + 1, i + 1, n_chunks_));
      }
      if (!holders_[i].empty() && holders_[i].back() == j) {
        throw InvalidParameter(fmt::format("worker {} lists chunk {} twice", j + 1, i + 1));
      }
      holders_[i].push_back(static_cast<std::uint32_t>(j));
    }
  }
  for (std::size_t i = 0; i < n_chunks_; ++i) {
    if (holders_[i].empty()) throw InvalidParameter(fmt::format("chunk {} is not assigned to any worker", i + 1));
  }
}

bool AssignmentMatrix::holds(std::size_t worker, std::size_t chunk) const {
  const auto& h = holders_[chunk];
  return std::binary_search(h.begin(), h.end(), static_cast<std::uint32_t>(worker));
}

std::optional<std::size_t> AssignmentMatrix::regular_degree() const {
  if (n_chunks_ != support_.size()) return std::nullopt;
  const std::size_t delta = support_.front().size();
  for (std::size_t k = 0; k < n_chunks_; ++k) {
    if (support_[k].size() != delta || holders_[k].size() != delta) return std::nullopt;
  }
  return delta;
}

bool AssignmentMatrix::is_symmetric() const {
  if (n_chunks_ != support_.size()) return false;
  for (std::size_t j = 0; j < support_.size(); ++j) {
    for (const std::uint32_t i : support_[j]) {
      if (!holds(i, j)) return false;
    }
  }
  return true;
}

void RegularGraphSpec::validate() const {
  if (m == 0 || degree == 0) throw InvalidParameter("regular graph needs m >= 1 and degree >= 1");
  if (degree >= m) throw InvalidParameter(fmt::format("degree {} must be below m = {}", degree, m));
  if ((m * degree) % 2 != 0) throw InvalidParameter(fmt::format("m * degree = {} must be even", m * degree));
}

AssignmentMatrix build_cyclic(std::size_t m, std::size_t delta) {
  if (m == 0 || delta == 0 || delta > m) {
    throw InvalidParameter(fmt::format("cyclic assignment needs 1 <= delta <= m (got m={}, delta={})", m, delta));
  }
  std::vector<std::vector<std::uint32_t>> support(m);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t k = 0; k < delta; ++k) support[j].push_back(static_cast<std::uint32_t>((j + k) % m));
  }
  return AssignmentMatrix(m, std::move(support));
}

namespace {

// One pairing attempt. Returns false on a dead end (remaining points admit
// no simple edge).
bool try_pair(const RegularGraphSpec& spec, Rng& rng, std::vector<std::vector<std::uint32_t>>& adj) {
  const std::size_t m = spec.m;
  std::vector<std::uint8_t> linked(m * m, 0);
  std::vector<std::uint32_t> points;
  points.reserve(m * spec.degree);
  for (std::uint32_t v = 0; v < m; ++v) points.insert(points.end(), spec.degree, v);
  adj.assign(m, {});

  auto suitable = [&](std::uint32_t u, std::uint32_t v) { return u != v && linked[u * m + v] == 0; };
  auto take = [&](std::size_t a, std::size_t b) {
    const std::uint32_t u = points[a];
    const std::uint32_t v = points[b];
    linked[u * m + v] = linked[v * m + u] = 1;
    adj[u].push_back(v);
    adj[v].push_back(u);
    // remove the higher slot first so the lower one stays valid
    for (const std::size_t slot : {std::max(a, b), std::min(a, b)}) {
      points[slot] = points.back();
      points.pop_back();
    }
  };

  constexpr int kBlindTries = 64;
  while (!points.empty()) {
    bool paired = false;
    for (int t = 0; t < kBlindTries && !paired; ++t) {
      const std::size_t a = rng.below(points.size());
      const std::size_t b = rng.below(points.size());
      if (a != b && suitable(points[a], points[b])) {
        take(a, b);
        paired = true;
      }
    }
    if (paired) continue;
    std::vector<std::pair<std::size_t, std::size_t>> options;
    for (std::size_t a = 0; a < points.size(); ++a)
      for (std::size_t b = a + 1; b < points.size(); ++b)
        if (suitable(points[a], points[b])) options.emplace_back(a, b);
    if (options.empty()) return false;
    const auto [a, b] = options[rng.below(options.size())];
    take(a, b);
  }
  return true;
}

}  // namespace

AssignmentMatrix build_regular_graph(const RegularGraphSpec& spec) {
  spec.validate();
  std::vector<std::vector<std::uint32_t>> adj;
  for (int attempt = 0; attempt < kRegularGraphAttempts; ++attempt) {
    Rng rng(mix_seed(spec.seed, static_cast<std::uint64_t>(attempt)));
    if (try_pair(spec, rng, adj)) {
      for (auto& row : adj) std::ranges::sort(row);
      return AssignmentMatrix(spec.m, std::move(adj));
    }
  }
  throw ConstructionFailed(fmt::format("no simple {}-regular graph on {} vertices after {} attempts", spec.degree,
                                       spec.m, kRegularGraphAttempts));
}

double ramanujan_bound(std::size_t degree) {
  return degree == 0 ? 0.0 : 2.0 * std::sqrt(static_cast<double>(degree) - 1.0);
}

double second_eigenvalue(const AssignmentMatrix& a) {
  const auto degree = a.regular_degree();
  if (!degree || !a.is_symmetric()) {
    throw InvalidParameter("second_eigenvalue needs a square, symmetric, regular assignment");
  }
  const std::size_t m = a.n_workers();
  Eigen::MatrixXd adj = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  for (std::size_t j = 0; j < m; ++j)
    for (const std::uint32_t i : a.support(j)) adj(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 1.0;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(adj, Eigen::EigenvaluesOnly);
  std::vector<double> spectrum(solver.eigenvalues().data(), solver.eigenvalues().data() + m);  // ascending
  const double nu = static_cast<double>(*degree);
  spectrum.pop_back();  // Perron eigenvalue
  if (spectrum.size() > 1 && std::abs(spectrum.front() + nu) <= 1e-9 * nu) spectrum.erase(spectrum.begin());
  double lambda = 0.0;
  for (const double x : spectrum) lambda = std::max(lambda, std::abs(x));
  return lambda;
}

std::string format_assignment(const AssignmentMatrix& a) {
  std::string out = fmt::format("{} {}\n", a.n_chunks(), a.n_workers());
  for (std::size_t j = 0; j < a.n_workers(); ++j) {
    out += fmt::format("{}:", j + 1);
    for (const std::uint32_t i : a.support(j)) out += fmt::format(" {}", i + 1);
    out += '\n';
  }
  return out;
}

AssignmentMatrix parse_assignment(std::string_view text) {
  const auto lines = detail::split_lines(text);
  std::size_t n_chunks = 0;
  std::size_t n_workers = 0;
  std::vector<std::vector<std::uint32_t>> support;
  bool have_header = false;
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const auto line = detail::trim(lines[ln]);
    if (line.empty() || line.front() == '#') continue;
    auto fail = [&](const std::string& what) {
      return InvalidParameter(fmt::format("assignment line {}: {}", ln + 1, what));
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
    if (colon == std::string_view::npos) throw fail("expected 'j: i1 i2 ...'");
    const auto j = detail::parse_number<std::size_t>(detail::trim(line.substr(0, colon)));
    if (!j || *j != support.size() + 1) throw fail(fmt::format("expected worker index {}", support.size() + 1));
    if (support.size() == n_workers) throw fail("more worker lines than declared");
    std::vector<std::uint32_t> chunks;
    for (const auto tok : detail::split_ws(line.substr(colon + 1))) {
      const auto i = detail::parse_number<std::uint32_t>(tok);
      if (!i || *i == 0) throw fail(fmt::format("bad chunk index '{}'", tok));
      chunks.push_back(*i - 1);
    }
    support.push_back(std::move(chunks));
  }
  if (!have_header) throw InvalidParameter("assignment: missing 'N m' header");
  if (support.size() != n_workers) {
    throw InvalidParameter(fmt::format("assignment: header declares {} workers, found {}", n_workers, support.size()));
  }
  return AssignmentMatrix(n_chunks, std::move(support));
}

AssignmentMatrix read_assignment_file(const std::string& path) { return parse_assignment(detail::read_file(path)); }

void write_assignment_file(const std::string& path, const AssignmentMatrix& a) {
  detail::write_file(path, format_assignment(a));
}

}  // namespace pgc
