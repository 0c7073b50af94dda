#pragma once

// Pairing baselines over an explicit all-pairs distance matrix: exact
// minimum-weight perfect matching, greedy closest-pair matching, random
// pairing, a 2-exchange hill climber, and an exhaustive oracle.

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include "dnaobf/align.hpp"
#include "dnaobf/blossom.hpp"
#include "dnaobf/cluster.hpp"
#include "dnaobf/error.hpp"
#include "dnaobf/lattice.hpp"
#include "dnaobf/rng.hpp"
#include "dnaobf/seqio.hpp"

namespace dnaobf {

class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t n) : n_(n), cells_(n * n, 0) {}

  static DistanceMatrix from_rows(const std::vector<std::vector<Distance>>& rows) {
    DistanceMatrix m(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != rows.size()) throw InputError("distance matrix must be square");
      for (std::size_t j = 0; j < rows.size(); ++j) m.cells_[i * m.n_ + j] = rows[i][j];
    }
    m.validate();
    return m;
  }

  std::size_t size() const { return n_; }
  Distance operator()(std::size_t i, std::size_t j) const { return cells_[i * n_ + j]; }

  void set(std::size_t i, std::size_t j, Distance d) {
    cells_[i * n_ + j] = d;
    cells_[j * n_ + i] = d;
  }

  void validate() const {
    for (std::size_t i = 0; i < n_; ++i) {
      if ((*this)(i, i) != 0) throw InputError("distance matrix diagonal must be zero");
      for (std::size_t j = 0; j < n_; ++j) {
        if ((*this)(i, j) < 0) throw InputError("distances must be non-negative");
        if ((*this)(i, j) != (*this)(j, i)) throw InputError("distance matrix must be symmetric");
      }
    }
  }

  std::string to_tsv(const std::vector<std::string>& labels) const {
    std::ostringstream os;
    os << "id";
    for (const auto& l : labels) os << '\t' << l;
    os << '\n';
    for (std::size_t i = 0; i < n_; ++i) {
      os << labels[i];
      for (std::size_t j = 0; j < n_; ++j) os << '\t' << (*this)(i, j);
      os << '\n';
    }
    return os.str();
  }

  friend bool operator==(const DistanceMatrix&, const DistanceMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<Distance> cells_;
};

// Partition of 0..n-1 into pairs, plus one triple when n is odd. The triple
// is stored as {a, b, c}: pair (a, b) obfuscated first, c merged afterwards.
struct PairingSolution {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::optional<std::array<std::size_t, 3>> triple;
  Distance total_loss = 0;
};

// Extra loss of merging c into the obfuscated pair (a, b).
using TripleCost = std::function<Distance(std::size_t a, std::size_t b, std::size_t c)>;

// Matrix-only stand-in for the merge cost: the larger of c's distances to
// the two pair members.
inline TripleCost matrix_triple_cost(const DistanceMatrix& m) {
  return [&m](std::size_t a, std::size_t b, std::size_t c) { return std::max(m(a, c), m(b, c)); };
}

inline Distance solution_cost(const PairingSolution& s, const DistanceMatrix& m,
                              const TripleCost& triple_cost) {
  Distance total = 0;
  for (auto [a, b] : s.pairs) total += m(a, b);
  if (s.triple) {
    const auto [a, b, c] = *s.triple;
    total += m(a, b) + triple_cost(a, b, c);
  }
  return total;
}

// Throws InvariantError unless `s` partitions 0..n-1 with a triple iff n odd.
inline void check_solution(const PairingSolution& s, std::size_t n) {
  std::vector<int> seen(n, 0);
  auto mark = [&](std::size_t i) {
    ensure(i < n, "pairing index out of range");
    ++seen[i];
  };
  for (auto [a, b] : s.pairs) mark(a), mark(b);
  if (s.triple)
    for (std::size_t i : *s.triple) mark(i);
  for (int k : seen) ensure(k == 1, "pairing is not a partition");
  ensure(s.triple.has_value() == (n % 2 == 1), "triple present iff n is odd");
}

namespace detail {

inline void normalize(PairingSolution& s) {
  for (auto& [a, b] : s.pairs)
    if (a > b) std::swap(a, b);
  std::ranges::sort(s.pairs);
  if (s.triple && (*s.triple)[0] > (*s.triple)[1]) std::swap((*s.triple)[0], (*s.triple)[1]);
}

// Moves `leftover` into whichever pair of `s` it merges into most cheaply.
inline void attach_leftover(PairingSolution& s, std::size_t leftover, const TripleCost& triple_cost) {
  ensure(!s.pairs.empty(), "no pair to absorb the leftover");
  std::size_t best = 0;
  Distance best_cost = std::numeric_limits<Distance>::max();
  for (std::size_t p = 0; p < s.pairs.size(); ++p) {
    const Distance c = triple_cost(s.pairs[p].first, s.pairs[p].second, leftover);
    if (c < best_cost) best_cost = c, best = p;
  }
  s.triple = std::array{s.pairs[best].first, s.pairs[best].second, leftover};
  s.pairs.erase(s.pairs.begin() + static_cast<std::ptrdiff_t>(best));
}

// Exact minimum-weight perfect matching of the listed vertices (even count).
inline std::vector<std::pair<std::size_t, std::size_t>> perfect_matching(
    const DistanceMatrix& m, const std::vector<std::size_t>& vertices) {
  const int n = static_cast<int>(vertices.size());
  ensure(n % 2 == 0, "perfect matching needs an even vertex count");
  if (n == 0) return {};
  Distance max_d = 0;
  for (std::size_t i : vertices)
    for (std::size_t j : vertices) max_d = std::max(max_d, m(i, j));
  // Every perfect matching has n/2 edges, so maximizing sum(max_d + 1 - d)
  // over maximum-cardinality matchings minimizes sum(d).
  std::vector<blossom::Edge> edges;
  edges.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      edges.push_back({i, j, max_d + 1 - m(vertices[i], vertices[j])});
  const std::vector<int> mate = blossom::max_weight_matching(n, std::move(edges), true);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (int i = 0; i < n; ++i) {
    ensure(mate[i] >= 0, "blossom returned an imperfect matching");
    if (i < mate[i]) pairs.emplace_back(vertices[i], vertices[mate[i]]);
  }
  return pairs;
}

}  // namespace detail

// Largest odd size for which every vertex is tried as the leftover.
inline constexpr std::size_t kExhaustiveLeftoverLimit = 51;

// Exact for even n. For odd n up to kExhaustiveLeftoverLimit, each vertex in
// turn is left out, the rest matched exactly, and the leftover merged into
// its cheapest pair; the best total wins. Beyond that limit the vertex with
// the largest nearest-neighbour distance is left out.
inline PairingSolution min_weight_perfect_matching(const DistanceMatrix& m,
                                                   const TripleCost& triple_cost) {
  const std::size_t n = m.size();
  if (n < 2) throw InputError("matching needs at least two items");
  PairingSolution best;
  if (n % 2 == 0) {
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    best.pairs = detail::perfect_matching(m, all);
  } else {
    std::vector<std::size_t> candidates;
    if (n <= kExhaustiveLeftoverLimit) {
      for (std::size_t v = 0; v < n; ++v) candidates.push_back(v);
    } else {
      std::size_t worst = 0;
      Distance worst_nn = -1;
      for (std::size_t v = 0; v < n; ++v) {
        Distance nn = std::numeric_limits<Distance>::max();
        for (std::size_t u = 0; u < n; ++u)
          if (u != v) nn = std::min(nn, m(u, v));
        if (nn > worst_nn) worst_nn = nn, worst = v;
      }
      candidates.push_back(worst);
    }
    Distance best_total = std::numeric_limits<Distance>::max();
    for (std::size_t v : candidates) {
      std::vector<std::size_t> rest;
      for (std::size_t u = 0; u < n; ++u)
        if (u != v) rest.push_back(u);
      PairingSolution s;
      s.pairs = detail::perfect_matching(m, rest);
      detail::normalize(s);
      detail::attach_leftover(s, v, triple_cost);
      const Distance total = solution_cost(s, m, triple_cost);
      if (total < best_total) best_total = total, best = std::move(s);
    }
  }
  detail::normalize(best);
  best.total_loss = solution_cost(best, m, triple_cost);
  return best;
}

inline PairingSolution min_weight_perfect_matching(const DistanceMatrix& m) {
  return min_weight_perfect_matching(m, matrix_triple_cost(m));
}

inline constexpr std::size_t kBruteForceLimit = 12;

// Exhaustive optimum over every partition into pairs (plus one triple with
// each choice of merged member when n is odd).
inline PairingSolution brute_force_matching(const DistanceMatrix& m, const TripleCost& triple_cost) {
  const std::size_t n = m.size();
  if (n < 2) throw InputError("matching needs at least two items");
  if (n > kBruteForceLimit)
    throw InputError("brute-force matching is limited to " + std::to_string(kBruteForceLimit) + " items");

  PairingSolution best;
  Distance best_total = std::numeric_limits<Distance>::max();
  PairingSolution current;
  std::vector<bool> used(n, false);

  std::function<void(Distance)> recurse = [&](Distance partial) {
    std::size_t i = 0;
    while (i < n && used[i]) ++i;
    if (i == n) {
      if (partial < best_total) best_total = partial, best = current;
      return;
    }
    used[i] = true;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (used[j]) continue;
      used[j] = true;
      current.pairs.emplace_back(i, j);
      recurse(partial + m(i, j));
      current.pairs.pop_back();
      used[j] = false;
    }
    used[i] = false;
  };

  if (n % 2 == 0) {
    recurse(0);
  } else {
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c) {
          if (c == a || c == b) continue;
          used.assign(n, false);
          used[a] = used[b] = used[c] = true;
          current = {};
          current.triple = std::array{a, b, c};
          recurse(m(a, b) + triple_cost(a, b, c));
        }
  }
  detail::normalize(best);
  best.total_loss = best_total;
  return best;
}

inline PairingSolution brute_force_matching(const DistanceMatrix& m) {
  return brute_force_matching(m, matrix_triple_cost(m));
}

// Repeatedly pairs the closest unpaired items; ties broken by (i, j) order.
inline PairingSolution greedy_matching(const DistanceMatrix& m, const TripleCost& triple_cost) {
  const std::size_t n = m.size();
  if (n < 2) throw InputError("matching needs at least two items");
  std::vector<std::tuple<Distance, std::size_t, std::size_t>> edges;
  edges.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) edges.emplace_back(m(i, j), i, j);
  std::ranges::sort(edges);

  PairingSolution s;
  std::vector<bool> used(n, false);
  for (const auto& [d, i, j] : edges) {
    if (used[i] || used[j]) continue;
    used[i] = used[j] = true;
    s.pairs.emplace_back(i, j);
  }
  if (n % 2 == 1) {
    const std::size_t leftover =
        static_cast<std::size_t>(std::find(used.begin(), used.end(), false) - used.begin());
    detail::attach_leftover(s, leftover, triple_cost);
  }
  detail::normalize(s);
  s.total_loss = solution_cost(s, m, triple_cost);
  return s;
}

inline PairingSolution greedy_matching(const DistanceMatrix& m) {
  return greedy_matching(m, matrix_triple_cost(m));
}

// Shuffled indices paired in order; with n odd the last three form the triple.
inline PairingSolution random_pairing(const DistanceMatrix& m, std::uint64_t seed,
                                      const TripleCost& triple_cost) {
  const std::size_t n = m.size();
  if (n < 2) throw InputError("matching needs at least two items");
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  SplitMix64 rng(seed);
  rng.shuffle(order);
  PairingSolution s;
  const std::size_t paired = n % 2 == 0 ? n : n - 3;
  for (std::size_t i = 0; i < paired; i += 2) s.pairs.emplace_back(order[i], order[i + 1]);
  if (n % 2 == 1) s.triple = std::array{order[n - 3], order[n - 2], order[n - 1]};
  detail::normalize(s);
  s.total_loss = solution_cost(s, m, triple_cost);
  return s;
}

// Stochastic 2-exchange local search over the pairs (the triple, if any,
// stays fixed). Proposes ((a,b),(c,d)) -> ((a,c),(b,d)) or ((a,d),(b,c)) and
// keeps strict improvements; stops after `max_stall` consecutive rejected
// proposals (0 means 100 * n).
inline PairingSolution hill_climb_refine(PairingSolution s, const DistanceMatrix& m,
                                         std::uint64_t seed, std::size_t max_stall,
                                         const TripleCost& triple_cost) {
  check_solution(s, m.size());
  if (max_stall == 0) max_stall = 100 * m.size();
  SplitMix64 rng(seed);
  const std::size_t k = s.pairs.size();
  if (k >= 2) {
    std::size_t stall = 0;
    while (stall < max_stall) {
      const std::size_t p = rng.below(k);
      std::size_t q = rng.below(k - 1);
      if (q >= p) ++q;
      const bool cross = rng.below(2) == 1;
      auto& [a, b] = s.pairs[p];
      auto& [c, d] = s.pairs[q];
      const Distance before = m(a, b) + m(c, d);
      const Distance after = cross ? m(a, d) + m(b, c) : m(a, c) + m(b, d);
      if (after < before) {
        if (cross) std::swap(b, d);  // (a,d),(c,b)
        else std::swap(b, c);        // (a,c),(b,d)
        stall = 0;
      } else {
        ++stall;
      }
    }
  }
  detail::normalize(s);
  s.total_loss = solution_cost(s, m, triple_cost);
  return s;
}

inline PairingSolution hill_climb_refine(const PairingSolution& s, const DistanceMatrix& m,
                                         std::uint64_t seed, std::size_t max_stall = 0) {
  return hill_climb_refine(s, m, seed, max_stall, matrix_triple_cost(m));
}

// Entry (i, j) is the loss of the full alignment of records i < j. Rows are
// farmed out to `threads` workers; every cell is written exactly once, so the
// result does not depend on the thread count.
inline DistanceMatrix pairwise_distance_matrix(const Dataset& db, const ScoringParams& params,
                                               unsigned threads = 1) {
  params.validate();
  const std::size_t n = db.size();
  if (n < 2) throw InputError("distance matrix needs at least two sequences");
  DistanceMatrix m(n);
  std::atomic<std::size_t> next_row{0};
  auto worker = [&] {
    for (std::size_t i = next_row++; i < n; i = next_row++)
      for (std::size_t j = i + 1; j < n; ++j) {
        const AlignedPair pair = global_align(db[i], db[j], params);
        m.set(i, j, sequence_distance(pair.first, pair.second));
      }
  };
  threads = std::max(1u, threads);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  return m;
}

// Exact merge cost for sequence data: the loss of aligning record c against
// the obfuscated pair (a, b). Memoized; not thread-safe.
class SequenceTripleCost {
 public:
  SequenceTripleCost(const Dataset& db, const ScoringParams& params) : db_(&db), params_(params) {}

  Distance operator()(std::size_t a, std::size_t b, std::size_t c) {
    if (a > b) std::swap(a, b);
    const auto key = std::tuple{a, b, c};
    if (const auto it = cache_.find(key); it != cache_.end()) return it->second;
    auto pair_it = pairs_.find({a, b});
    if (pair_it == pairs_.end())
      pair_it = pairs_.emplace(std::pair{a, b}, obfuscate_pair(*db_, a, b, params_).obfuscated).first;
    const AlignedPair outer = align_code_sequences(pair_it->second, (*db_)[c].residues, params_);
    const Distance extra = sequence_distance(outer.first, outer.second);
    cache_.emplace(key, extra);
    return extra;
  }

 private:
  const Dataset* db_;
  ScoringParams params_;
  std::map<std::pair<std::size_t, std::size_t>, CodeSequence> pairs_;
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, Distance> cache_;
};

// Obfuscates every group of a pairing solution.
inline ObfuscationRun realize(const Dataset& db, const PairingSolution& s, const ScoringParams& params,
                              std::string method) {
  check_solution(s, db.size());
  ObfuscationRun run;
  run.method = std::move(method);
  run.params = params;
  run.n_sequences = db.size();
  for (auto [a, b] : s.pairs) run.clusters.push_back(obfuscate_pair(db, a, b, params));
  if (s.triple) {
    const auto [a, b, c] = *s.triple;
    run.clusters.push_back(obfuscate_triple(db, a, b, c, params));
  }
  sort_clusters(run.clusters);
  return run;
}

}  // namespace dnaobf
