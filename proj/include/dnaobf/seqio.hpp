#pragma once

// FASTA reading and writing plus the synthetic family corpus used by the
// benchmarks.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "dnaobf/error.hpp"
#include "dnaobf/lattice.hpp"
#include "dnaobf/rng.hpp"

namespace dnaobf {

struct SequenceRecord {
  std::string id;
  std::string description;
  CodeSequence residues;

  friend bool operator==(const SequenceRecord&, const SequenceRecord&) = default;
};

struct Dataset {
  std::vector<SequenceRecord> records;

  std::size_t size() const { return records.size(); }
  bool empty() const { return records.empty(); }
  const SequenceRecord& operator[](std::size_t i) const { return records[i]; }

  // The first n records.
  Dataset prefix(std::size_t n) const {
    if (n > records.size())
      throw InputError("requested " + std::to_string(n) +
                       " sequences but the dataset holds " +
                       std::to_string(records.size()));
    return Dataset{{records.begin(), records.begin() + static_cast<std::ptrdiff_t>(n)}};
  }

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

struct FastaOptions {
  // Obfuscated or pre-aligned files may carry '-'; raw inputs may not.
  bool allow_gaps = false;
};

inline Dataset parse_fasta(std::string_view text, FastaOptions options = {}) {
  Dataset out;
  std::unordered_set<std::string> seen;
  std::size_t line_no = 0;

  auto finish_record = [&] {
    if (out.records.empty()) return;
    const auto& rec = out.records.back();
    if (rec.residues.empty())
      throw InputError("record '" + rec.id + "' has an empty sequence");
  };

  while (!text.empty()) {
    ++line_no;
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text.remove_prefix(eol == std::string_view::npos ? text.size() : eol + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;

    if (line.front() == '>') {
      finish_record();
      line.remove_prefix(1);
      const auto ws = line.find_first_of(" \t");
      SequenceRecord rec;
      rec.id = std::string(line.substr(0, ws));
      if (ws != std::string_view::npos) {
        auto desc = line.substr(ws + 1);
        const auto start = desc.find_first_not_of(" \t");
        rec.description = start == std::string_view::npos ? "" : std::string(desc.substr(start));
      }
      if (rec.id.empty())
        throw InputError("line " + std::to_string(line_no) + ": header without an id");
      if (!seen.insert(rec.id).second)
        throw InputError("line " + std::to_string(line_no) + ": duplicate id '" + rec.id + "'");
      out.records.push_back(std::move(rec));
      continue;
    }

    if (out.records.empty())
      throw InputError("line " + std::to_string(line_no) + ": sequence data before the first header");
    auto& residues = out.records.back().residues;
    for (std::size_t col = 0; col < line.size(); ++col) {
      const char ch = line[col];
      const auto code = Code::from_char(ch);
      if (!code || (code->is_gap() && !options.allow_gaps)) {
        std::string shown = (ch == ' ' || ch == '\t') ? "whitespace" : std::string("'") + ch + "'";
        throw InputError("line " + std::to_string(line_no) + ", column " +
                         std::to_string(col + 1) + ": invalid residue " + shown);
      }
      residues.push_back(*code);
    }
  }
  finish_record();
  if (out.records.empty()) throw InputError("no FASTA records found");
  return out;
}

inline Dataset read_fasta_file(const std::filesystem::path& path, FastaOptions options = {}) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_fasta(buffer.str(), options);
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

// line_width 0 writes each sequence on a single line.
inline std::string write_fasta(const Dataset& d, std::size_t line_width = 70) {
  if (d.empty()) throw InputError("cannot write an empty dataset");
  std::string out;
  for (const auto& rec : d.records) {
    out += '>';
    out += rec.id;
    if (!rec.description.empty()) {
      out += ' ';
      out += rec.description;
    }
    out += '\n';
    const std::string seq = to_string(rec.residues);
    const std::size_t width = line_width == 0 ? std::max<std::size_t>(seq.size(), 1) : line_width;
    for (std::size_t i = 0; i < seq.size(); i += width) {
      out.append(seq, i, width);
      out += '\n';
    }
  }
  return out;
}

struct SynthParams {
  std::uint64_t seed = 0;
  std::size_t families = 1;
  std::size_t copies_per_family = 2;
  std::size_t length = 1000;
  double substitution_rate = 0.0;
  double indel_rate = 0.0;
};

// Random ancestors, each copied with independent point mutations. Records are
// ordered copy-major (f0_c0, f1_c0, ..., f0_c1, ...) so that any prefix spans
// as many families as possible. The id f<family>_c<copy> names the family.
inline Dataset synthesize_dataset(const SynthParams& p) {
  if (p.families == 0 || p.copies_per_family == 0)
    throw InputError("synthetic corpus needs at least one family and one copy");
  if (p.length == 0) throw InputError("synthetic sequence length must be positive");
  auto rate_ok = [](double r) { return r >= 0.0 && r < 1.0; };
  if (!rate_ok(p.substitution_rate) || !rate_ok(p.indel_rate))
    throw InputError("mutation rates must lie in [0, 1)");

  SplitMix64 rng(p.seed);
  auto random_base = [&] { return Code::from_index(rng.below(4)); };

  std::vector<CodeSequence> ancestors(p.families);
  for (auto& a : ancestors) {
    a.resize(p.length);
    for (auto& c : a) c = random_base();
  }

  std::vector<std::vector<CodeSequence>> copies(p.families);
  for (std::size_t f = 0; f < p.families; ++f) {
    for (std::size_t k = 0; k < p.copies_per_family; ++k) {
      CodeSequence seq;
      seq.reserve(p.length + p.length / 8);
      for (Code c : ancestors[f]) {
        if (p.indel_rate > 0.0 && rng.unit() < p.indel_rate) {
          if (rng.below(2) == 0) continue;  // deletion
          seq.push_back(random_base());     // insertion before c
        }
        if (p.substitution_rate > 0.0 && rng.unit() < p.substitution_rate)
          c = Code::from_index((c.index() + 1 + rng.below(3)) % 4);
        seq.push_back(c);
      }
      if (seq.empty()) seq.push_back(ancestors[f].front());
      copies[f].push_back(std::move(seq));
    }
  }

  Dataset out;
  for (std::size_t k = 0; k < p.copies_per_family; ++k)
    for (std::size_t f = 0; f < p.families; ++f)
      out.records.push_back({"f" + std::to_string(f) + "_c" + std::to_string(k), "",
                             std::move(copies[f][k])});
  return out;
}

// Family label encoded in a synthetic id, or the whole id if it has none.
inline std::string_view synthetic_family(std::string_view id) {
  return id.substr(0, id.find('_'));
}

}  // namespace dnaobf
