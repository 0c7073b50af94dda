#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace dnaobf;

namespace {

SequenceRecord rec(std::string id, std::string_view s) { return {std::move(id), "", to_codes(s)}; }

}  // namespace

TEST(Align, IdenticalSequencesAlignWithoutGaps) {
  const auto pair = global_align(rec("a", "ACGTACGT"), rec("b", "ACGTACGT"), {});
  EXPECT_EQ(to_string(pair.first), "ACGTACGT");
  EXPECT_EQ(to_string(pair.second), "ACGTACGT");
  EXPECT_EQ(pair.score, 8);
}

TEST(Align, AmbiguityCodesMatchOverlappingBases) {
  const auto pair = global_align(rec("a", "ACGT"), rec("b", "RCGN"), {});
  EXPECT_EQ(pair.score, 4);
}

TEST(Align, InternalGapUsesAffineCost) {
  ScoringParams p;
  p.end_gaps_free = false;
  const auto pair = global_align(rec("a", "AAAAACCCCCGGGGG"), rec("b", "AAAAAGGGGG"), p);
  EXPECT_EQ(to_string(pair.second), "AAAAA-----GGGGG");
  EXPECT_EQ(pair.score, 10 + (-4 - 5));
}

TEST(Align, FreeEndGapsTrimOverhangs) {
  const auto pair = global_align(rec("a", "TTTACGTACGT"), rec("b", "ACGTACGT"), {});
  EXPECT_EQ(to_string(pair.second), "---ACGTACGT");
  EXPECT_EQ(pair.score, 8);
}

TEST(Align, RejectsEmptyInput) {
  EXPECT_THROW(align_code_sequences(CodeSequence{}, to_codes("A"), {}), InputError);
}

TEST(Align, ScoreMatchesExhaustiveOracle) {
  SplitMix64 rng(42);
  for (bool free_ends : {true, false}) {
    ScoringParams p;
    p.end_gaps_free = free_ends;
    for (int trial = 0; trial < 150; ++trial) {
      const auto x = oracle::random_sequence(rng, 1 + rng.below(6), trial % 3 == 0 ? 16 : 4);
      const auto y = oracle::random_sequence(rng, 1 + rng.below(6), 4);
      const AlignedPair pair = align_code_sequences(x, y, p);
      check_aligned_pair(pair, x, y);
      EXPECT_EQ(pair.score, oracle::best_alignment_score(x, y, p))
          << to_string(x) << " / " << to_string(y);
      EXPECT_EQ(pair.score, oracle::score_alignment(pair.first, pair.second, p));
    }
  }
}

TEST(Align, OtherScoringSchemesMatchOracle) {
  SplitMix64 rng(7);
  const ScoringParams p{.match_reward = 2, .mismatch_penalty = -3, .gap_open = -5,
                        .gap_extend = -2, .word_size = 4, .end_gaps_free = true};
  for (int trial = 0; trial < 100; ++trial) {
    const auto x = oracle::random_sequence(rng, 1 + rng.below(6));
    const auto y = oracle::random_sequence(rng, 1 + rng.below(6));
    EXPECT_EQ(align_code_sequences(x, y, p).score, oracle::best_alignment_score(x, y, p));
  }
}

TEST(Align, ParamsValidation) {
  EXPECT_THROW((ScoringParams{.match_reward = 0}.validate()), InputError);
  EXPECT_THROW((ScoringParams{.gap_open = 1}.validate()), InputError);
  EXPECT_THROW((ScoringParams{.word_size = 3}.validate()), InputError);
  EXPECT_NO_THROW(ScoringParams{}.validate());
}
