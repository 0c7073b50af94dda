#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dnaobf/dnaobf.hpp"

namespace dnaobf::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitInternal = 2;

inline const std::vector<std::string> kMethods = {"itermegablast", "mwm", "greedy", "hillclimb",
                                                  "random"};

// "-" is standard output. Files are written to a sibling temporary and renamed
// into place, so a failed run never leaves a partial file behind.
inline void write_output(const std::string& path, const std::string& bytes, std::ostream& out) {
  if (path == "-") {
    out << bytes;
    return;
  }
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw InputError("cannot open '" + tmp.string() + "' for writing");
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    f.flush();
    if (!f) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw InputError("write to '" + tmp.string() + "' failed");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw InputError("cannot move output into '" + path + "'");
  }
}

// Executes one anonymization method end to end. Matrix-based methods include
// the pairwise matrix in their wall time.
inline ObfuscationRun run_method(const Dataset& db, const std::string& method,
                                 const ScoringParams& params, std::uint64_t seed,
                                 unsigned threads) {
  if (method == "itermegablast") return iter_megablast(db, params, seed);
  if (db.size() < 2) throw InputError("anonymization needs at least two sequences");

  const auto start = std::chrono::steady_clock::now();
  const DistanceMatrix m = pairwise_distance_matrix(db, params, threads);
  SequenceTripleCost triple_cost(db, params);
  const TripleCost tc = std::ref(triple_cost);
  PairingSolution s;
  if (method == "mwm")
    s = min_weight_perfect_matching(m, tc);
  else if (method == "greedy")
    s = greedy_matching(m, tc);
  else if (method == "hillclimb")
    s = hill_climb_refine(greedy_matching(m, tc), m, seed, 0, tc);
  else if (method == "random")
    s = random_pairing(m, seed, tc);
  else
    throw InputError("unknown method '" + method + "'");

  ObfuscationRun run = realize(db, s, params, method);
  run.rng_seed = seed;
  run.wall_time = std::chrono::steady_clock::now() - start;
  return run;
}

inline Dataset obfuscated_fasta_records(const ObfuscationRun& run) {
  Dataset out;
  for (const auto& c : run.clusters) {
    std::string id;
    for (const auto& m : c.member_ids) id += (id.empty() ? "" : "+") + m;
    out.records.push_back({id, "size=" + std::to_string(c.size()) +
                                   " pair_distance=" + std::to_string(c.pair_distance),
                           c.obfuscated});
  }
  return out;
}

namespace detail {

inline void add_scoring_flags(CLI::App& app, ScoringParams& p) {
  app.add_option("--match", p.match_reward, "Match reward (> 0)")->capture_default_str();
  app.add_option("--mismatch", p.mismatch_penalty, "Mismatch penalty (< 0)")->capture_default_str();
  app.add_option("--gap-open", p.gap_open, "Gap open penalty (< 0)")->capture_default_str();
  app.add_option("--gap-extend", p.gap_extend, "Gap extend penalty (<= 0)")->capture_default_str();
  app.add_option("--word-size", p.word_size, "Seed word size, 4..32")->capture_default_str();
  app.add_option("--end-gaps-free", p.end_gaps_free, "Leading/trailing gaps score zero")
      ->capture_default_str();
}

inline void add_synth_flags(CLI::App& app, SynthParams& p) {
  app.add_option("--seed", p.seed, "Corpus RNG seed")->capture_default_str();
  app.add_option("--families", p.families, "Number of ancestral sequences")->capture_default_str();
  app.add_option("--copies_per_family", p.copies_per_family, "Mutated copies per ancestor")
      ->capture_default_str();
  app.add_option("--length", p.length, "Ancestor length")->capture_default_str();
  app.add_option("--substitution_rate", p.substitution_rate, "Per-base substitution probability")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  app.add_option("--indel_rate", p.indel_rate, "Per-base indel probability")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
}

inline std::string describe_alignment(const CodeSequence& a, const CodeSequence& b) {
  const CodeSequence g = obfuscate_aligned(a, b);
  std::ostringstream os;
  os << "aligned_a\t" << to_string(a) << '\n'
     << "aligned_b\t" << to_string(b) << '\n'
     << "obfuscated\t" << to_string(g) << '\n'
     << "distance\t" << sequence_distance(a, b) << '\n'
     << "loss_a\t" << sequence_distance(a, g) << '\n'
     << "loss_b\t" << sequence_distance(b, g) << '\n';
  return os.str();
}

inline const SequenceRecord& single_record(const Dataset& d, const std::string& path) {
  if (d.size() != 1)
    throw InputError(path + ": expected exactly one record, found " + std::to_string(d.size()));
  return d[0];
}

}  // namespace detail

// Parses and executes one command line. Data goes to `out`, diagnostics to
// `err`. Returns the process exit status.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Similarity-based DNA sequence anonymization", "dnaobf"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "dnaobf 1.0.0");

  ScoringParams params;
  std::string format = "tsv";
  std::string output = "-";
  unsigned threads = 1;
  bool no_timing = false;

  // obfuscate
  std::string obf_input, obf_method = "itermegablast", obf_report = "-";
  std::uint64_t obf_seed = 0;
  std::size_t obf_repeat = 1;
  auto* obf = app.add_subcommand("obfuscate", "Cluster and obfuscate a FASTA dataset");
  obf->add_option("input", obf_input, "Input FASTA")->required();
  obf->add_option("--method", obf_method, "Clustering method")
      ->capture_default_str()
      ->check(CLI::IsMember(kMethods));
  obf->add_option("--seed", obf_seed, "RNG seed; repeats use seed..seed+repeat-1")
      ->capture_default_str();
  obf->add_option("--repeat", obf_repeat, "Number of seeded runs")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  obf->add_option("-o,--output", output, "Obfuscated FASTA of the first run ('-' = stdout)")
      ->capture_default_str();
  obf->add_option("--report", obf_report, "Report path ('-' = stdout)")->capture_default_str();
  obf->add_option("--format", format, "Report format")
      ->capture_default_str()
      ->check(CLI::IsMember({"tsv", "json"}));
  obf->add_option("--threads", threads, "Worker threads for the distance matrix")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  obf->add_flag("--no-timing", no_timing, "Report wall times as zero");
  detail::add_scoring_flags(*obf, params);

  // distance
  std::string dist_a, dist_b;
  bool dist_aligned = false;
  auto* dist = app.add_subcommand("distance", "Align two single-record FASTA files and obfuscate");
  dist->add_option("first", dist_a, "First FASTA")->required();
  dist->add_option("second", dist_b, "Second FASTA")->required();
  dist->add_flag("--aligned", dist_aligned,
                 "Treat inputs as already aligned (implied when either contains '-')");
  detail::add_scoring_flags(*dist, params);

  // matrix
  std::string mat_input;
  auto* mat = app.add_subcommand("matrix", "Pairwise distance matrix as TSV");
  mat->add_option("input", mat_input, "Input FASTA")->required();
  mat->add_option("-o,--output", output, "Output path ('-' = stdout)")->capture_default_str();
  mat->add_option("--threads", threads, "Worker threads")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  detail::add_scoring_flags(*mat, params);

  // bench
  SynthParams bench_corpus{.seed = 0, .families = 5, .copies_per_family = 10, .length = 1000,
                           .substitution_rate = 0.01, .indel_rate = 0.0};
  std::string bench_input;
  std::vector<std::size_t> bench_sizes = {10, 20, 30};
  std::vector<std::string> bench_methods = {"itermegablast", "greedy"};
  std::uint64_t bench_seed = 0;
  std::size_t bench_repeat = 10;
  auto* bench = app.add_subcommand("bench", "Distance and timing table over methods and sizes");
  bench->add_option("--input", bench_input, "Dataset FASTA (default: synthetic corpus)");
  bench->add_option("--sizes", bench_sizes, "Dataset prefix sizes")
      ->capture_default_str()
      ->delimiter(',');
  bench->add_option("--methods", bench_methods, "Methods to compare")
      ->capture_default_str()
      ->delimiter(',')
      ->check(CLI::IsMember(kMethods));
  bench->add_option("--run-seed", bench_seed, "Base seed of the repeated runs")->capture_default_str();
  bench->add_option("--repeat", bench_repeat, "Runs per cell")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  bench->add_option("-o,--output", output, "Output path ('-' = stdout)")->capture_default_str();
  bench->add_option("--format", format, "Table format")
      ->capture_default_str()
      ->check(CLI::IsMember({"tsv", "json"}));
  bench->add_option("--threads", threads, "Worker threads for distance matrices")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  bench->add_flag("--no-timing", no_timing, "Report wall times as zero");
  detail::add_synth_flags(*bench, bench_corpus);
  detail::add_scoring_flags(*bench, params);

  // synth
  SynthParams synth_params;
  std::size_t line_width = 70;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic family corpus as FASTA");
  detail::add_synth_flags(*synth, synth_params);
  synth->add_option("--line-width", line_width, "FASTA line width (0 = unwrapped)")
      ->capture_default_str();
  synth->add_option("-o,--output", output, "Output path ('-' = stdout)")->capture_default_str();

  // tables
  std::string which = "both";
  auto* tables = app.add_subcommand("tables", "Dump the 16x16 generalization and distance tables");
  tables->add_option("--which", which, "Table to print")
      ->capture_default_str()
      ->check(CLI::IsMember({"generalize", "distance", "both"}));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*obf) {
      params.validate();
      const Dataset db = read_fasta_file(obf_input);
      std::vector<RunReport> reports;
      std::string fasta;
      for (std::size_t r = 0; r < obf_repeat; ++r) {
        const ObfuscationRun run = run_method(db, obf_method, params, obf_seed + r, threads);
        check_run(run, db);
        if (r == 0) fasta = write_fasta(obfuscated_fasta_records(run));
        reports.push_back(summarize(run));
        if (no_timing) reports.back().wall_time_s = 0.0;
      }
      const Format f = parse_format(format);
      const std::string report =
          reports.size() == 1 ? emit(reports.front(), f) : emit(aggregate(reports), f);
      write_output(output, fasta, out);
      write_output(obf_report, report, out);
    } else if (*dist) {
      params.validate();
      const FastaOptions gaps{.allow_gaps = true};
      const SequenceRecord a = detail::single_record(read_fasta_file(dist_a, gaps), dist_a);
      const SequenceRecord b = detail::single_record(read_fasta_file(dist_b, gaps), dist_b);
      const auto has_gap = [](const SequenceRecord& s) {
        return std::ranges::any_of(s.residues, [](Code c) { return c.is_gap(); });
      };
      if (dist_aligned || has_gap(a) || has_gap(b)) {
        if (a.residues.size() != b.residues.size())
          throw InputError("pre-aligned inputs must have equal length");
        out << detail::describe_alignment(a.residues, b.residues);
      } else {
        const AlignedPair pair = global_align(a, b, params);
        out << "score\t" << pair.score << '\n' << detail::describe_alignment(pair.first, pair.second);
      }
    } else if (*mat) {
      params.validate();
      const Dataset db = read_fasta_file(mat_input);
      std::vector<std::string> labels;
      for (const auto& r : db.records) labels.push_back(r.id);
      write_output(output, pairwise_distance_matrix(db, params, threads).to_tsv(labels), out);
    } else if (*bench) {
      params.validate();
      const Dataset corpus =
          bench_input.empty() ? synthesize_dataset(bench_corpus) : read_fasta_file(bench_input);
      for (std::size_t size : bench_sizes)
        if (size < 2 || size > corpus.size())
          throw InputError("bench size " + std::to_string(size) + " outside [2, " +
                           std::to_string(corpus.size()) + "]");
      const Format f = parse_format(format);
      std::vector<BenchRow> rows;
      for (std::size_t size : bench_sizes) {
        const Dataset db = corpus.prefix(size);
        for (const auto& method : bench_methods) {
          std::vector<RunReport> reports;
          for (std::size_t r = 0; r < bench_repeat; ++r) {
            const ObfuscationRun run = run_method(db, method, params, bench_seed + r, threads);
            check_run(run, db);
            reports.push_back(summarize(run));
            if (no_timing) reports.back().wall_time_s = 0.0;
          }
          rows.push_back(bench_row(aggregate(reports)));
        }
      }
      write_output(output, emit(std::span<const BenchRow>(rows), f), out);
    } else if (*synth) {
      write_output(output, write_fasta(synthesize_dataset(synth_params), line_width), out);
    } else if (*tables) {
      if (which != "distance") out << generalize_table_tsv();
      if (which == "both") out << '\n';
      if (which != "generalize") out << distance_table_tsv();
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const InvariantError& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitOk;
}

}  // namespace dnaobf::cli
