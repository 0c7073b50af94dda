#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace dnaobf;

namespace {

Dataset make(std::initializer_list<std::pair<const char*, const char*>> recs) {
  Dataset d;
  for (auto [id, s] : recs) d.records.push_back({id, "", to_codes(s)});
  return d;
}

std::uint64_t pack(std::string_view s) {
  std::uint64_t w = 0;
  for (char ch : s) w = (w << 2) | Code::from_char(ch)->index();
  return w;
}

}  // namespace

TEST(KmerIndex, SkipsWindowsWithAmbiguityCodes) {
  const Dataset db = make({{"a", "ANGTACG"}});
  const KmerIndex index(db, 4);
  EXPECT_EQ(index.posting_count(), 2u);
  ASSERT_EQ(index.lookup(pack("GTAC")).size(), 1u);
  EXPECT_EQ(index.lookup(pack("GTAC"))[0], (Posting{0, 2}));
  EXPECT_EQ(index.lookup(pack("TACG"))[0], (Posting{0, 3}));
  EXPECT_TRUE(index.lookup(pack("ANGT")).empty());
}

TEST(KmerIndex, RejectsBadWordSizeAndEmptyDb) {
  const Dataset db = make({{"a", "ACGTACGT"}});
  EXPECT_THROW(KmerIndex(db, 3), InputError);
  EXPECT_THROW(KmerIndex(db, 33), InputError);
  EXPECT_THROW(KmerIndex(Dataset{}, 12), InputError);
}

TEST(Search, FindsClosestRecord) {
  SplitMix64 rng(5);
  const CodeSequence base = oracle::random_sequence(rng, 300);
  CodeSequence near = base, far = oracle::random_sequence(rng, 300);
  for (std::size_t i = 0; i < near.size(); i += 50) near[i] = Code::from_index((near[i].index() + 1) % 4);
  Dataset db;
  db.records = {{"far", "", far}, {"near", "", near}, {"query", "", base}};
  const ScoringParams p;
  const KmerIndex index(db, p.word_size);
  std::vector<std::uint8_t> active = {1, 1, 0};
  const auto hit = search_top_homolog(db[2], db, index, p, active);
  ASSERT_TRUE(hit.has_value());
  EXPECT_EQ(hit->id, "near");
  EXPECT_GE(hit->score, 250);
}

TEST(Search, NoSeedMeansNoHit) {
  const Dataset db = make({{"a", "AAAAAAAAAAAAAAAA"}, {"b", "CCCCCCCCCCCCCCCC"}});
  ScoringParams p;
  p.word_size = 8;
  const KmerIndex index(db, 8);
  std::vector<std::uint8_t> active = {0, 1};
  EXPECT_FALSE(search_top_homolog(db[0], db, index, p, active).has_value());
}

TEST(Search, TiesGoToEarliestRecord) {
  const Dataset db = make({{"q", "ACGTTGCAACGTAGGC"}, {"x", "ACGTTGCAACGTAGGC"}, {"y", "ACGTTGCAACGTAGGC"}});
  ScoringParams p;
  p.word_size = 8;
  const KmerIndex index(db, 8);
  std::vector<std::uint8_t> active = {0, 1, 1};
  EXPECT_EQ(search_top_homolog(db[0], db, index, p, active)->id, "x");
}

TEST(Search, ValidatesArguments) {
  const Dataset db = make({{"a", "ACGTACGTACGTACGT"}});
  const KmerIndex index(db, 8);
  EXPECT_THROW(search_top_homolog(db[0], db, index, ScoringParams{}), InputError);
  ScoringParams p;
  p.word_size = 8;
  std::vector<std::uint8_t> wrong = {1, 1};
  EXPECT_THROW(search_top_homolog(db[0], db, index, p, wrong), InputError);
}

TEST(Extend, ScoreAtLeastSeedAndAtMostFullMatch) {
  SplitMix64 rng(11);
  const ScoringParams p;
  for (int t = 0; t < 30; ++t) {
    const CodeSequence q = oracle::random_sequence(rng, 200);
    CodeSequence s = q;
    for (auto& c : s)
      if (rng.below(20) == 0) c = Code::from_index(rng.below(4));
    const int score = greedy_extend(q, s, {100, 100}, p);
    EXPECT_LE(score, 200);
    if (std::equal(q.begin() + 100, q.begin() + 112, s.begin() + 100)) {
      EXPECT_GE(score, 12);
    }
  }
}
