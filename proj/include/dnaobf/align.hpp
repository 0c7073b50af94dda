#pragma once

// Full-length pairwise alignment with affine gaps (Gotoh). Produces the
// equal-length gapped rows that the lattice obfuscates column by column.

#include <algorithm>
#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dnaobf/error.hpp"
#include "dnaobf/lattice.hpp"
#include "dnaobf/seqio.hpp"

namespace dnaobf {

// A gap run of length k scores gap_open + k * gap_extend.
struct ScoringParams {
  int match_reward = 1;
  int mismatch_penalty = -2;
  int gap_open = -4;
  int gap_extend = -1;
  std::size_t word_size = 12;
  // Gap runs touching either end of the alignment score zero.
  bool end_gaps_free = true;

  void validate() const {
    if (match_reward <= 0) throw InputError("match reward must be positive");
    if (mismatch_penalty >= 0) throw InputError("mismatch penalty must be negative");
    if (gap_open >= 0) throw InputError("gap open penalty must be negative");
    if (gap_extend > 0) throw InputError("gap extend penalty must not be positive");
    if (word_size < 4 || word_size > 32)
      throw InputError("word size must lie in [4, 32]");
  }

  // Ambiguity codes match whenever their base sets overlap.
  int substitution(Code a, Code b) const {
    return (a.base_set() & b.base_set()) != 0 ? match_reward : mismatch_penalty;
  }

  friend bool operator==(const ScoringParams&, const ScoringParams&) = default;
};

struct AlignedPair {
  CodeSequence first;
  CodeSequence second;
  int score = 0;

  std::size_t length() const { return first.size(); }
};

inline CodeSequence strip_gaps(std::span<const Code> codes) {
  CodeSequence out;
  out.reserve(codes.size());
  for (Code c : codes)
    if (!c.is_gap()) out.push_back(c);
  return out;
}

// Throws InvariantError unless `pair` is a well-formed alignment of x and y.
inline void check_aligned_pair(const AlignedPair& pair, std::span<const Code> x,
                               std::span<const Code> y) {
  ensure(pair.first.size() == pair.second.size(), "aligned rows differ in length");
  for (std::size_t i = 0; i < pair.length(); ++i)
    ensure(!(pair.first[i].is_gap() && pair.second[i].is_gap()),
           "alignment column " + std::to_string(i) + " is gap in both rows");
  ensure(std::ranges::equal(strip_gaps(pair.first), x), "first row does not degap to its input");
  ensure(std::ranges::equal(strip_gaps(pair.second), y), "second row does not degap to its input");
}

namespace detail {

enum State : std::uint8_t { kDiag = 0, kGapInY = 1, kGapInX = 2 };

inline constexpr int kNegInf = -(1 << 29);

// Optimal alignment of two gap-free code sequences. kGapInY columns hold a
// residue of x against '-', kGapInX columns the reverse. Ties prefer the
// diagonal, then kGapInY, then kGapInX, both in the recurrences and when
// choosing the end cell.
inline AlignedPair gotoh(std::span<const Code> x, std::span<const Code> y,
                         const ScoringParams& p) {
  const std::size_t n = x.size(), m = y.size();
  if (n == 0 || m == 0) throw InputError("cannot align an empty sequence");

  std::array<std::array<int, Code::kCount>, Code::kCount> sub{};
  for (std::size_t a = 0; a < Code::kCount; ++a)
    for (std::size_t b = 0; b < Code::kCount; ++b)
      sub[a][b] = p.substitution(Code::from_index(a), Code::from_index(b));

  const int open = p.gap_open + p.gap_extend;
  const int ext = p.gap_extend;
  const bool free_ends = p.end_gaps_free;
  const std::size_t width = m + 1;

  // Per cell: bits 0-1 predecessor of the diagonal state, 2-3 of the
  // kGapInY state, 4-5 of the kGapInX state. Row 0 and column 0 are pure
  // gap runs and are traced without it.
  std::vector<std::uint8_t> trace((n + 1) * width, 0);
  std::vector<int> dp(width), xp(width), yp(width);   // row i-1
  std::vector<int> dc(width), xc(width), yc(width);   // row i
  std::array<std::vector<int>, 3> last_col;            // column m, every row
  for (auto& v : last_col) v.assign(n + 1, kNegInf);

  auto best3 = [](int a, int b, int c, std::uint8_t& which) {
    which = kDiag;
    int v = a;
    if (b > v) v = b, which = kGapInY;
    if (c > v) v = c, which = kGapInX;
    return v;
  };

  dp[0] = 0;
  xp[0] = kNegInf;
  yp[0] = kNegInf;
  for (std::size_t j = 1; j <= m; ++j) {
    dp[j] = kNegInf;
    xp[j] = kNegInf;
    yp[j] = free_ends ? 0 : p.gap_open + static_cast<int>(j) * ext;
  }
  last_col[0][0] = dp[m];
  last_col[1][0] = xp[m];
  last_col[2][0] = yp[m];
  std::array<std::vector<int>, 3> last_row;

  for (std::size_t i = 1; i <= n; ++i) {
    const auto xi = x[i - 1].index();
    std::uint8_t* tr = trace.data() + i * width;
    dc[0] = kNegInf;
    yc[0] = kNegInf;
    xc[0] = free_ends ? 0 : p.gap_open + static_cast<int>(i) * ext;
    for (std::size_t j = 1; j <= m; ++j) {
      std::uint8_t wd, wx, wy;
      const int d = best3(dp[j - 1], xp[j - 1], yp[j - 1], wd) + sub[xi][y[j - 1].index()];
      const int gx = best3(dp[j] + open, xp[j] + ext, yp[j] + open, wx);
      const int gy = best3(dc[j - 1] + open, xc[j - 1] + open, yc[j - 1] + ext, wy);
      dc[j] = d;
      xc[j] = gx;
      yc[j] = gy;
      tr[j] = static_cast<std::uint8_t>(wd | (wx << 2) | (wy << 4));
    }
    last_col[0][i] = dc[m];
    last_col[1][i] = xc[m];
    last_col[2][i] = yc[m];
    if (i == n) last_row = {dc, xc, yc};
    std::swap(dp, dc);
    std::swap(xp, xc);
    std::swap(yp, yc);
  }

  // End cell (ei, ej) and state; residues past it become free trailing gaps.
  std::size_t ei = n, ej = m;
  std::uint8_t state = kDiag;
  int best = kNegInf - 1;
  auto consider = [&](std::size_t i, std::size_t j, int d, int gx, int gy) {
    const int vals[3] = {d, gx, gy};
    for (std::uint8_t s = 0; s < 3; ++s)
      if (vals[s] > best) best = vals[s], ei = i, ej = j, state = s;
  };
  consider(n, m, last_row[0][m], last_row[1][m], last_row[2][m]);
  if (free_ends) {
    for (std::size_t j = m; j-- > 0;) consider(n, j, last_row[0][j], last_row[1][j], last_row[2][j]);
    for (std::size_t i = n; i-- > 0;) consider(i, m, last_col[0][i], last_col[1][i], last_col[2][i]);
  }

  AlignedPair out;
  out.score = best;
  auto& a = out.first;
  auto& b = out.second;
  // Built back to front, reversed at the end.
  for (std::size_t j = m; j > ej; --j) a.push_back(Code::gap()), b.push_back(y[j - 1]);
  for (std::size_t i = n; i > ei; --i) a.push_back(x[i - 1]), b.push_back(Code::gap());

  std::size_t i = ei, j = ej;
  while (i > 0 || j > 0) {
    if (i == 0) {
      a.push_back(Code::gap()), b.push_back(y[--j]);
      continue;
    }
    if (j == 0) {
      a.push_back(x[--i]), b.push_back(Code::gap());
      continue;
    }
    const std::uint8_t t = trace[i * width + j];
    switch (state) {
      case kDiag:
        state = t & 3;
        a.push_back(x[--i]), b.push_back(y[--j]);
        break;
      case kGapInY:
        state = (t >> 2) & 3;
        a.push_back(x[--i]), b.push_back(Code::gap());
        break;
      default:
        state = (t >> 4) & 3;
        a.push_back(Code::gap()), b.push_back(y[--j]);
        break;
    }
  }
  std::ranges::reverse(a);
  std::ranges::reverse(b);
  return out;
}

}  // namespace detail

inline AlignedPair global_align(const SequenceRecord& x, const SequenceRecord& y,
                                const ScoringParams& params) {
  AlignedPair pair = detail::gotoh(x.residues, y.residues, params);
  check_aligned_pair(pair, x.residues, y.residues);
  return pair;
}

// Same dynamic program over arbitrary codes; gaps already present in the
// inputs are removed first.
inline AlignedPair align_code_sequences(std::span<const Code> x, std::span<const Code> y,
                                        const ScoringParams& params) {
  const CodeSequence xs = strip_gaps(x), ys = strip_gaps(y);
  AlignedPair pair = detail::gotoh(xs, ys, params);
  check_aligned_pair(pair, xs, ys);
  return pair;
}

}  // namespace dnaobf
