#pragma once

// Near-identity homolog search: exact k-mer seeds from an index over the
// database, each distinct seed diagonal extended once (ungapped x-drop, then
// a banded gapped pass), best-scoring record wins.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "dnaobf/align.hpp"
#include "dnaobf/error.hpp"
#include "dnaobf/lattice.hpp"
#include "dnaobf/seqio.hpp"

namespace dnaobf {

struct Posting {
  std::uint32_t record;
  std::uint32_t offset;

  friend bool operator==(const Posting&, const Posting&) = default;
};

// Calls fn(offset, packed_word) for every window of `word_size` plain bases.
// Windows touching an ambiguity code or gap are skipped.
template <typename Fn>
void for_each_word(std::span<const Code> seq, std::size_t word_size, Fn&& fn) {
  const std::uint64_t mask = word_size >= 32 ? ~0ULL : (1ULL << (2 * word_size)) - 1;
  std::uint64_t word = 0;
  std::size_t run = 0;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (!seq[i].is_base()) {
      run = 0;
      word = 0;
      continue;
    }
    word = ((word << 2) | seq[i].index()) & mask;
    if (++run >= word_size) fn(i + 1 - word_size, word);
  }
}

class KmerIndex {
 public:
  KmerIndex(const Dataset& db, std::size_t word_size) : word_size_(word_size) {
    if (word_size < 4 || word_size > 32)
      throw InputError("word size must lie in [4, 32], got " + std::to_string(word_size));
    if (db.empty()) throw InputError("cannot index an empty dataset");
    for (std::size_t r = 0; r < db.size(); ++r) {
      for_each_word(db[r].residues, word_size, [&](std::size_t offset, std::uint64_t w) {
        postings_[w].push_back({static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(offset)});
        ++total_;
      });
    }
  }

  std::size_t word_size() const { return word_size_; }
  std::size_t posting_count() const { return total_; }
  std::size_t distinct_words() const { return postings_.size(); }

  std::span<const Posting> lookup(std::uint64_t word) const {
    const auto it = postings_.find(word);
    if (it == postings_.end()) return {};
    return it->second;
  }

 private:
  std::size_t word_size_;
  std::size_t total_ = 0;
  std::unordered_map<std::uint64_t, std::vector<Posting>> postings_;
};

struct SeedHit {
  std::size_t query_offset;
  std::size_t subject_offset;
};

// Half-width of the band around the seed diagonal in the gapped pass.
inline constexpr std::ptrdiff_t kExtensionBand = 16;

inline int default_xdrop(const ScoringParams& p) {
  return 2 * -p.mismatch_penalty * static_cast<int>(p.word_size);
}

namespace detail {

inline int ungapped_xdrop(std::span<const Code> q, std::span<const Code> s, SeedHit seed,
                          const ScoringParams& p, int xdrop) {
  const std::size_t k = p.word_size;
  int total = static_cast<int>(k) * p.match_reward;

  int run = 0, best = 0;
  for (std::size_t qi = seed.query_offset + k, si = seed.subject_offset + k;
       qi < q.size() && si < s.size(); ++qi, ++si) {
    run += p.substitution(q[qi], s[si]);
    best = std::max(best, run);
    if (best - run > xdrop) break;
  }
  total += best;

  run = best = 0;
  for (std::size_t qi = seed.query_offset, si = seed.subject_offset; qi > 0 && si > 0;) {
    run += p.substitution(q[--qi], s[--si]);
    best = std::max(best, run);
    if (best - run > xdrop) break;
  }
  return total + best;
}

// Smith-Waterman with affine gaps restricted to |(j - i) - diagonal| <= band.
inline int banded_local(std::span<const Code> q, std::span<const Code> s,
                        std::ptrdiff_t diagonal, std::ptrdiff_t band, const ScoringParams& p) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(q.size());
  const std::ptrdiff_t m = static_cast<std::ptrdiff_t>(s.size());
  const std::size_t w = static_cast<std::size_t>(2 * band + 1);
  const int open = p.gap_open + p.gap_extend, ext = p.gap_extend;
  constexpr int kNeg = -(1 << 29);

  // Slot b of row i holds column j = i + diagonal - band + b.
  std::vector<int> hp(w + 1, 0), fp(w + 1, kNeg), hc(w + 1, 0), fc(w + 1, kNeg);
  int best = 0;
  for (std::ptrdiff_t i = 1; i <= n; ++i) {
    const std::ptrdiff_t j0 = i + diagonal - band;
    if (j0 - 1 > m) break;
    int e = kNeg, left = 0;
    for (std::size_t b = 0; b < w; ++b) {
      const std::ptrdiff_t j = j0 + static_cast<std::ptrdiff_t>(b);
      if (j < 1 || j > m) {
        hc[b] = 0;
        fc[b] = kNeg;
        left = 0;
        e = kNeg;
        continue;
      }
      // (i-1, j-1) is slot b of the previous row, (i-1, j) slot b+1.
      const int diag = hp[b] + p.substitution(q[i - 1], s[j - 1]);
      e = std::max(left + open, e + ext);
      const int f = std::max(hp[b + 1] + open, fp[b + 1] + ext);
      const int h = std::max({0, diag, e, f});
      hc[b] = h;
      fc[b] = f;
      left = h;
      best = std::max(best, h);
    }
    std::swap(hp, hc);
    std::swap(fp, fc);
  }
  return best;
}

}  // namespace detail

// Similarity score of the diagonal through `seed`: the better of an ungapped
// x-drop extension and a banded gapped local pass around that diagonal.
// Never below word_size * match_reward.
inline int greedy_extend(std::span<const Code> query, std::span<const Code> subject,
                         SeedHit seed, const ScoringParams& params) {
  const int ungapped = detail::ungapped_xdrop(query, subject, seed, params, default_xdrop(params));
  const auto diagonal = static_cast<std::ptrdiff_t>(seed.subject_offset) -
                        static_cast<std::ptrdiff_t>(seed.query_offset);
  const int gapped = detail::banded_local(query, subject, diagonal, kExtensionBand, params);
  return std::max(ungapped, gapped);
}

struct Homolog {
  std::size_t record;  // position in the database
  std::string id;
  int score;

  friend bool operator==(const Homolog&, const Homolog&) = default;
};

// Best homolog of `query` among the database records whose `active` flag is
// set (all records when `active` is empty). Ties go to the earliest record.
// Returns nothing when no active record shares a seed word with the query.
inline std::optional<Homolog> search_top_homolog(const SequenceRecord& query, const Dataset& db,
                                                 const KmerIndex& index,
                                                 const ScoringParams& params,
                                                 std::span<const std::uint8_t> active = {}) {
  if (db.empty()) throw InputError("search database is empty");
  if (index.word_size() != params.word_size)
    throw InputError("index word size differs from the scoring parameters");
  if (!active.empty() && active.size() != db.size())
    throw InputError("active mask does not match the database size");

  std::vector<int> best(db.size(), -1);
  std::unordered_set<std::uint64_t> extended;
  for_each_word(query.residues, index.word_size(), [&](std::size_t qo, std::uint64_t w) {
    for (const Posting& hit : index.lookup(w)) {
      if (!active.empty() && !active[hit.record]) continue;
      const std::int64_t diagonal = static_cast<std::int64_t>(hit.offset) - static_cast<std::int64_t>(qo);
      const std::uint64_t key = (std::uint64_t{hit.record} << 32) |
                                static_cast<std::uint32_t>(diagonal + (std::int64_t{1} << 31));
      if (!extended.insert(key).second) continue;
      const int score = greedy_extend(query.residues, db[hit.record].residues,
                                      {qo, hit.offset}, params);
      best[hit.record] = std::max(best[hit.record], score);
    }
  });

  std::optional<Homolog> top;
  for (std::size_t r = 0; r < db.size(); ++r)
    if (best[r] >= 0 && (!top || best[r] > top->score)) top = Homolog{r, db[r].id, best[r]};
  return top;
}

}  // namespace dnaobf
