#pragma once

// Iterative similarity pairing: draw a random query from the pool, pair it
// with its top homolog, obfuscate the pair, repeat; the last two or three
// leftovers form the final cluster.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dnaobf/align.hpp"
#include "dnaobf/error.hpp"
#include "dnaobf/lattice.hpp"
#include "dnaobf/rng.hpp"
#include "dnaobf/search.hpp"
#include "dnaobf/seqio.hpp"

namespace dnaobf {

// Exact non-negative fraction.
struct Ratio {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }

  // Rounded half up to `places` decimals using integer arithmetic.
  std::string decimal(int places = 4) const {
    std::int64_t scale = 1;
    for (int i = 0; i < places; ++i) scale *= 10;
    const std::int64_t scaled = (num * scale * 2 + den) / (den * 2);
    if (places <= 0) return std::to_string(scaled);
    std::string frac = std::to_string(scaled % scale);
    frac.insert(0, static_cast<std::size_t>(places) - frac.size(), '0');
    return std::to_string(scaled / scale) + "." + frac;
  }

  friend bool operator==(const Ratio& a, const Ratio& b) { return a.num * b.den == b.num * a.den; }
};

struct Cluster {
  std::vector<std::size_t> members;  // dataset positions; empty for loose records
  std::vector<std::string> member_ids;
  std::vector<CodeSequence> aligned_members;
  CodeSequence obfuscated;
  std::vector<Distance> member_losses;
  // Pair: distance between the two aligned members. Triple: first-stage pair
  // distance plus the distance of the second alignment.
  Distance pair_distance = 0;

  std::size_t size() const { return member_ids.size(); }
  Distance total_loss() const {
    Distance t = 0;
    for (Distance d : member_losses) t += d;
    return t;
  }
  std::size_t first_member() const {
    return members.empty() ? 0 : *std::min_element(members.begin(), members.end());
  }
};

// Throws InvariantError unless the cluster satisfies its structural
// invariants against the raw member records.
inline void check_cluster(const Cluster& c, std::span<const SequenceRecord* const> records) {
  ensure(c.size() == 2 || c.size() == 3, "cluster must have 2 or 3 members");
  ensure(c.aligned_members.size() == c.size() && c.member_losses.size() == c.size(),
         "cluster member arrays disagree");
  CodeSequence lca = c.aligned_members.front();
  for (std::size_t i = 0; i < c.size(); ++i) {
    const auto& row = c.aligned_members[i];
    ensure(row.size() == c.obfuscated.size(), "aligned member length differs from output");
    ensure(c.member_losses[i] == sequence_distance(row, c.obfuscated), "member loss mismatch");
    if (i < records.size())
      ensure(std::ranges::equal(strip_gaps(row), records[i]->residues),
             "aligned member does not degap to its record");
    for (std::size_t col = 0; col < row.size(); ++col) lca[col] = generalize(lca[col], row[col]);
  }
  ensure(lca == c.obfuscated, "obfuscated sequence is not the column-wise LCA of its members");
}

// Cluster of two already aligned rows.
inline Cluster cluster_from_alignment(std::string id_a, std::string id_b, const AlignedPair& pair) {
  Cluster c;
  c.member_ids = {std::move(id_a), std::move(id_b)};
  c.aligned_members = {pair.first, pair.second};
  c.obfuscated = obfuscate_aligned(pair.first, pair.second);
  c.member_losses = {sequence_distance(pair.first, c.obfuscated),
                     sequence_distance(pair.second, c.obfuscated)};
  c.pair_distance = sequence_distance(pair.first, pair.second);
  return c;
}

inline Cluster obfuscate_pair(const SequenceRecord& a, const SequenceRecord& b,
                              const ScoringParams& params) {
  return cluster_from_alignment(a.id, b.id, global_align(a, b, params));
}

// Obfuscates (a, b) first, then aligns that output against c and obfuscates
// again. Gap columns opened by the second alignment are copied into the rows
// of a and b so all three members share the final coordinates.
inline Cluster obfuscate_triple(const SequenceRecord& a, const SequenceRecord& b,
                                const SequenceRecord& c, const ScoringParams& params) {
  const Cluster inner = obfuscate_pair(a, b, params);
  ensure(std::ranges::none_of(inner.obfuscated, [](Code x) { return x.is_gap(); }),
         "pair obfuscation produced a gap column");
  const AlignedPair outer = align_code_sequences(inner.obfuscated, c.residues, params);

  Cluster out;
  out.member_ids = {a.id, b.id, c.id};
  out.aligned_members.assign(3, {});
  std::size_t col = 0;
  for (Code x : outer.first) {
    for (std::size_t m = 0; m < 2; ++m)
      out.aligned_members[m].push_back(x.is_gap() ? Code::gap() : inner.aligned_members[m][col]);
    if (!x.is_gap()) ++col;
  }
  out.aligned_members[2] = outer.second;
  out.obfuscated = obfuscate_aligned(outer.first, outer.second);
  for (const auto& row : out.aligned_members)
    out.member_losses.push_back(sequence_distance(row, out.obfuscated));
  out.pair_distance = inner.pair_distance + sequence_distance(outer.first, outer.second);
  return out;
}

// Dataset-level variants record member positions. Pairs are always aligned in
// dataset order so every strategy sees the same alignment for the same pair.
inline Cluster obfuscate_pair(const Dataset& db, std::size_t a, std::size_t b,
                              const ScoringParams& params) {
  if (a > b) std::swap(a, b);
  Cluster c = obfuscate_pair(db[a], db[b], params);
  c.members = {a, b};
  return c;
}

inline Cluster obfuscate_triple(const Dataset& db, std::size_t a, std::size_t b, std::size_t c,
                                const ScoringParams& params) {
  if (a > b) std::swap(a, b);
  Cluster out = obfuscate_triple(db[a], db[b], db[c], params);
  out.members = {a, b, c};
  return out;
}

struct ObfuscationRun {
  std::string method;
  std::vector<Cluster> clusters;  // ordered by first member position
  std::uint64_t rng_seed = 0;
  ScoringParams params;
  std::size_t n_sequences = 0;
  std::chrono::duration<double> wall_time{0};
  std::size_t search_invocations = 0;
  std::size_t fallback_searches = 0;

  Distance total_pair_distance() const {
    Distance t = 0;
    for (const auto& c : clusters) t += c.pair_distance;
    return t;
  }
  Distance total_member_loss() const {
    Distance t = 0;
    for (const auto& c : clusters) t += c.total_loss();
    return t;
  }
  // Mean loss per original sequence.
  Ratio average_distance() const {
    return {total_member_loss(), static_cast<std::int64_t>(std::max<std::size_t>(n_sequences, 1))};
  }
};

inline void sort_clusters(std::vector<Cluster>& clusters) {
  std::ranges::stable_sort(clusters, {}, &Cluster::first_member);
}

// Throws InvariantError unless `run` partitions `db` into valid clusters.
inline void check_run(const ObfuscationRun& run, const Dataset& db) {
  ensure(run.n_sequences == db.size(), "run size differs from dataset");
  ensure(run.clusters.size() == db.size() / 2, "cluster count must be floor(N/2)");
  std::vector<int> seen(db.size(), 0);
  std::size_t triples = 0;
  for (const auto& c : run.clusters) {
    std::vector<const SequenceRecord*> recs;
    for (std::size_t i = 0; i < c.members.size(); ++i) {
      ensure(c.members[i] < db.size(), "cluster member out of range");
      ensure(db[c.members[i]].id == c.member_ids[i], "cluster member id mismatch");
      ++seen[c.members[i]];
      recs.push_back(&db[c.members[i]]);
    }
    check_cluster(c, recs);
    if (c.size() == 3) ++triples;
  }
  for (int s : seen) ensure(s == 1, "every sequence must belong to exactly one cluster");
  ensure(triples == db.size() % 2, "exactly one triple iff N is odd");
}

namespace detail {

// Active record whose full alignment with `query` loses the least
// information; ties go to the earliest record.
inline std::size_t nearest_by_alignment(const Dataset& db, std::size_t query,
                                        std::span<const std::uint8_t> active,
                                        const ScoringParams& params) {
  std::optional<std::size_t> best;
  Distance best_d = std::numeric_limits<Distance>::max();
  for (std::size_t r = 0; r < db.size(); ++r) {
    if (!active[r]) continue;
    const std::size_t lo = std::min(query, r), hi = std::max(query, r);
    const AlignedPair pair = global_align(db[lo], db[hi], params);
    const Distance d = sequence_distance(pair.first, pair.second);
    if (d < best_d) best_d = d, best = r;
  }
  ensure(best.has_value(), "fallback search over an empty pool");
  return *best;
}

}  // namespace detail

inline ObfuscationRun iter_megablast(const Dataset& db, const ScoringParams& params,
                                     std::uint64_t rng_seed) {
  const auto start = std::chrono::steady_clock::now();
  params.validate();
  if (db.size() < 2) throw InputError("anonymization needs at least two sequences");

  ObfuscationRun run;
  run.method = "itermegablast";
  run.rng_seed = rng_seed;
  run.params = params;
  run.n_sequences = db.size();

  const KmerIndex index(db, params.word_size);
  SplitMix64 rng(rng_seed);
  std::vector<std::uint8_t> active(db.size(), 1);
  std::vector<std::size_t> pool(db.size());
  for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = i;

  auto take = [&](std::size_t r) {
    active[r] = 0;
    pool.erase(std::find(pool.begin(), pool.end(), r));
  };

  const std::size_t rounds = db.size() / 2;
  for (std::size_t t = 1; t < rounds; ++t) {
    const std::size_t query = pool[rng.below(pool.size())];
    take(query);
    const auto hit = search_top_homolog(db[query], db, index, params, active);
    ++run.search_invocations;
    std::size_t homolog;
    if (hit) {
      homolog = hit->record;
    } else {
      homolog = detail::nearest_by_alignment(db, query, active, params);
      ++run.fallback_searches;
    }
    take(homolog);
    run.clusters.push_back(obfuscate_pair(db, query, homolog, params));
  }

  // Leftovers in dataset order.
  if (pool.size() == 3)
    run.clusters.push_back(obfuscate_triple(db, pool[0], pool[1], pool[2], params));
  else
    run.clusters.push_back(obfuscate_pair(db, pool[0], pool[1], params));

  sort_clusters(run.clusters);
  run.wall_time = std::chrono::steady_clock::now() - start;
  return run;
}

}  // namespace dnaobf
