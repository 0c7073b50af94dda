#pragma once

// Slow reference implementations used only by the tests.

#include <bit>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "dnaobf/dnaobf.hpp"

namespace oracle {

using dnaobf::Code;
using dnaobf::CodeSequence;

// Lattice join straight from the base-set definition.
inline Code join(Code a, Code b) {
  if (a == b) return a;
  if (a.is_gap() || b.is_gap()) return Code::any();
  return Code::from_base_set(static_cast<std::uint8_t>(a.base_set() | b.base_set()));
}

inline int height(Code c) { return c.is_gap() ? 3 : std::popcount(c.base_set()); }

inline int distance(Code a, Code b) { return 2 * height(join(a, b)) - height(a) - height(b); }

// Score of a fixed alignment: per-column substitution plus, for every maximal
// run of same-direction gap columns, gap_open + length * gap_extend. With
// end_gaps_free, runs touching the first or last column are free.
inline int score_alignment(const CodeSequence& a, const CodeSequence& b,
                           const dnaobf::ScoringParams& p) {
  const std::size_t len = a.size();
  int score = 0;
  std::size_t col = 0;
  while (col < len) {
    const bool ga = a[col].is_gap(), gb = b[col].is_gap();
    if (!ga && !gb) {
      score += p.substitution(a[col], b[col]);
      ++col;
      continue;
    }
    std::size_t end = col;
    while (end < len && a[end].is_gap() == ga && b[end].is_gap() == gb) ++end;
    const bool touches_end = col == 0 || end == len;
    if (!(p.end_gaps_free && touches_end))
      score += p.gap_open + static_cast<int>(end - col) * p.gap_extend;
    col = end;
  }
  return score;
}

// Enumerates every global alignment of x and y (Delannoy-many) and returns
// the best score. Intended for lengths up to about 8.
inline int best_alignment_score(const CodeSequence& x, const CodeSequence& y,
                                const dnaobf::ScoringParams& p) {
  int best = std::numeric_limits<int>::min();
  CodeSequence a, b;
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t j) {
    if (i == x.size() && j == y.size()) {
      best = std::max(best, score_alignment(a, b, p));
      return;
    }
    if (i < x.size() && j < y.size()) {
      a.push_back(x[i]), b.push_back(y[j]);
      rec(i + 1, j + 1);
      a.pop_back(), b.pop_back();
    }
    if (i < x.size()) {
      a.push_back(x[i]), b.push_back(Code::gap());
      rec(i + 1, j);
      a.pop_back(), b.pop_back();
    }
    if (j < y.size()) {
      a.push_back(Code::gap()), b.push_back(y[j]);
      rec(i, j + 1);
      a.pop_back(), b.pop_back();
    }
  };
  rec(0, 0);
  return best;
}

inline CodeSequence random_sequence(dnaobf::SplitMix64& rng, std::size_t len,
                                    std::size_t alphabet = 4) {
  CodeSequence s(len);
  for (auto& c : s) {
    std::size_t idx = rng.below(alphabet);
    if (idx == 14) idx = 15;  // gaps never appear in raw residues
    c = Code::from_index(idx);
  }
  return s;
}

inline dnaobf::DistanceMatrix random_matrix(dnaobf::SplitMix64& rng, std::size_t n,
                                            dnaobf::Distance max_d) {
  dnaobf::DistanceMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      m.set(i, j, static_cast<dnaobf::Distance>(rng.below(static_cast<std::uint64_t>(max_d) + 1)));
  return m;
}

}  // namespace oracle
