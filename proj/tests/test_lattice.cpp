#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace dnaobf;

namespace {

Code c(char ch) { return *Code::from_char(ch); }

std::vector<Code> all_codes() {
  std::vector<Code> out;
  for (std::size_t i = 0; i < Code::kCount; ++i) out.push_back(Code::from_index(i));
  return out;
}

}  // namespace

TEST(Lattice, SymbolOrderAndLevels) {
  EXPECT_EQ(std::string(Code::kSymbols), "ACGTRYSWKMBDHV-N");
  EXPECT_EQ(level(c('A')), 1);
  EXPECT_EQ(level(c('R')), 2);
  EXPECT_EQ(level(c('B')), 3);
  EXPECT_EQ(level(Code::gap()), 3);
  EXPECT_EQ(level(Code::any()), 4);
  EXPECT_EQ(c('r'), c('R'));
  EXPECT_FALSE(Code::from_char('X').has_value());
}

TEST(Lattice, GeneralizeExamples) {
  EXPECT_EQ(generalize(c('A'), c('G')), c('R'));
  EXPECT_EQ(generalize(c('C'), c('T')), c('Y'));
  EXPECT_EQ(generalize(c('R'), c('C')), c('V'));
  EXPECT_EQ(generalize(c('A'), Code::gap()), Code::any());
  EXPECT_EQ(generalize(Code::gap(), Code::gap()), Code::gap());
  EXPECT_EQ(generalize(c('T'), c('T')), c('T'));
}

TEST(Lattice, DistanceExamples) {
  EXPECT_EQ(nucleotide_distance(c('A'), c('A')), 0);
  EXPECT_EQ(nucleotide_distance(c('A'), c('G')), 2);
  EXPECT_EQ(nucleotide_distance(c('A'), Code::gap()), 4);
  EXPECT_EQ(nucleotide_distance(c('R'), c('A')), 1);
  EXPECT_EQ(nucleotide_distance(Code::any(), c('A')), 3);
}

TEST(Lattice, TablesMatchSetOracle) {
  for (Code a : all_codes())
    for (Code b : all_codes()) {
      EXPECT_EQ(generalize(a, b), oracle::join(a, b)) << a << b;
      EXPECT_EQ(nucleotide_distance(a, b), oracle::distance(a, b)) << a << b;
    }
}

TEST(Lattice, SequenceDistanceAndObfuscation) {
  const auto x = to_codes("CCTGTAAA");
  const auto y = to_codes("CA-GTRAA");
  const auto g = obfuscate_aligned(x, y);
  EXPECT_EQ(to_string(g), "CMNGTRAA");
  EXPECT_EQ(sequence_distance(x, y), 7);
  EXPECT_EQ(sequence_distance(x, g), 5);
  EXPECT_EQ(sequence_distance(y, g), 2);
}

TEST(Lattice, RejectsUnequalLengthsAndBadSymbols) {
  EXPECT_THROW(sequence_distance(to_codes("AC"), to_codes("A")), InputError);
  EXPECT_THROW(to_codes("ACXG"), InputError);
  EXPECT_EQ(sequence_distance(to_codes(""), to_codes("")), 0);
}

TEST(Lattice, TableDumpsHaveSixteenRows) {
  const std::string g = generalize_table_tsv();
  const std::string d = distance_table_tsv();
  EXPECT_EQ(std::count(g.begin(), g.end(), '\n'), 17);
  EXPECT_EQ(std::count(d.begin(), d.end(), '\n'), 17);
}
