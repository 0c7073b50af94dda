#pragma once

// Nucleotide generalization lattice: IUPAC codes ordered by the set of bases
// they cover, with the gap symbol sitting beside the three-base codes and N
// on top. Everything here is constexpr table lookup.

#include <array>
#include <bit>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "dnaobf/error.hpp"

namespace dnaobf {

// One symbol of the 16-letter generalization alphabet. The numeric index
// follows the canonical table order A,C,G,T,R,Y,S,W,K,M,B,D,H,V,-,N.
class Code {
 public:
  static constexpr std::size_t kCount = 16;
  static constexpr std::string_view kSymbols = "ACGTRYSWKMBDHV-N";

  // Base-set bits.
  static constexpr std::uint8_t kA = 1, kC = 2, kG = 4, kT = 8;

  constexpr Code() = default;

  static constexpr Code from_index(std::size_t index) {
    return Code(static_cast<std::uint8_t>(index));
  }

  // Accepts upper- or lowercase IUPAC letters and '-'.
  static constexpr std::optional<Code> from_char(char c) {
    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
    const auto pos = kSymbols.find(c);
    if (pos == std::string_view::npos) return std::nullopt;
    return Code(static_cast<std::uint8_t>(pos));
  }

  // Inverse of base_set() for nonempty masks.
  static constexpr Code from_base_set(std::uint8_t mask) {
    for (std::size_t i = 0; i < kCount; ++i) {
      const Code c = from_index(i);
      if (!c.is_gap() && c.base_set() == mask) return c;
    }
    return gap();
  }

  static constexpr Code gap() { return Code(14); }
  static constexpr Code any() { return Code(15); }

  constexpr std::size_t index() const { return index_; }
  constexpr char symbol() const { return kSymbols[index_]; }
  constexpr bool is_gap() const { return index_ == 14; }

  constexpr std::uint8_t base_set() const {
    constexpr std::array<std::uint8_t, kCount> masks{
        kA,           kC,           kG,           kT,
        kA | kG,      kC | kT,      kC | kG,      kA | kT,
        kG | kT,      kA | kC,      kC | kG | kT, kA | kG | kT,
        kA | kC | kT, kA | kC | kG, 0,            kA | kC | kG | kT};
    return masks[index_];
  }

  // Height in the hierarchy: bases 1, two-base codes 2, three-base codes and
  // the gap 3, N 4.
  constexpr int level() const {
    return is_gap() ? 3 : std::popcount(base_set());
  }

  constexpr bool is_base() const { return level() == 1 && !is_gap(); }

  friend constexpr bool operator==(Code, Code) = default;
  friend constexpr auto operator<=>(Code, Code) = default;

 private:
  constexpr explicit Code(std::uint8_t index) : index_(index) {}
  std::uint8_t index_ = 0;
};

inline std::ostream& operator<<(std::ostream& os, Code c) {
  return os << c.symbol();
}

using CodeSequence = std::vector<Code>;

// Information loss, summed over alignment columns.
using Distance = std::int64_t;

namespace detail {

constexpr Code generalize_slow(Code a, Code b) {
  if (a == b) return a;
  if (a.is_gap() || b.is_gap()) return Code::any();
  return Code::from_base_set(a.base_set() | b.base_set());
}

template <typename Cell, typename Fn>
constexpr auto make_table(Fn fn) {
  std::array<std::array<Cell, Code::kCount>, Code::kCount> table{};
  for (std::size_t i = 0; i < Code::kCount; ++i)
    for (std::size_t j = 0; j < Code::kCount; ++j)
      table[i][j] = fn(Code::from_index(i), Code::from_index(j));
  return table;
}

inline constexpr auto kGeneralizeTable = make_table<Code>(generalize_slow);

inline constexpr auto kDistanceTable = make_table<int>([](Code a, Code b) {
  return 2 * generalize_slow(a, b).level() - a.level() - b.level();
});

}  // namespace detail

constexpr int level(Code c) { return c.level(); }

// Lowest common ancestor of two codes.
constexpr Code generalize(Code a, Code b) {
  return detail::kGeneralizeTable[a.index()][b.index()];
}

// Information lost when a and b are both replaced by generalize(a, b).
constexpr int nucleotide_distance(Code a, Code b) {
  return detail::kDistanceTable[a.index()][b.index()];
}

inline CodeSequence to_codes(std::string_view text) {
  CodeSequence out;
  out.reserve(text.size());
  for (char ch : text) {
    const auto c = Code::from_char(ch);
    if (!c) throw InputError(std::string("invalid nucleotide code '") + ch + "'");
    out.push_back(*c);
  }
  return out;
}

inline std::string to_string(std::span<const Code> codes) {
  std::string out;
  out.reserve(codes.size());
  for (Code c : codes) out.push_back(c.symbol());
  return out;
}

inline void require_aligned(std::span<const Code> x, std::span<const Code> y) {
  if (x.size() != y.size())
    throw InputError("sequences are not aligned: lengths " +
                     std::to_string(x.size()) + " and " +
                     std::to_string(y.size()));
}

inline Distance sequence_distance(std::span<const Code> x, std::span<const Code> y) {
  require_aligned(x, y);
  Distance total = 0;
  for (std::size_t i = 0; i < x.size(); ++i) total += nucleotide_distance(x[i], y[i]);
  return total;
}

inline CodeSequence obfuscate_aligned(std::span<const Code> x,
                                      std::span<const Code> y) {
  require_aligned(x, y);
  CodeSequence out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = generalize(x[i], y[i]);
  return out;
}

// Tab-separated dumps of the generalize and distance tables, rows and columns
// in canonical order.
inline std::string generalize_table_tsv() {
  std::ostringstream os;
  for (char s : Code::kSymbols) os << '\t' << s;
  os << '\n';
  for (std::size_t i = 0; i < Code::kCount; ++i) {
    os << Code::kSymbols[i];
    for (std::size_t j = 0; j < Code::kCount; ++j)
      os << '\t' << detail::kGeneralizeTable[i][j];
    os << '\n';
  }
  return os.str();
}

inline std::string distance_table_tsv() {
  std::ostringstream os;
  for (char s : Code::kSymbols) os << '\t' << s;
  os << '\n';
  for (std::size_t i = 0; i < Code::kCount; ++i) {
    os << Code::kSymbols[i];
    for (std::size_t j = 0; j < Code::kCount; ++j)
      os << '\t' << detail::kDistanceTable[i][j];
    os << '\n';
  }
  return os.str();
}

}  // namespace dnaobf
