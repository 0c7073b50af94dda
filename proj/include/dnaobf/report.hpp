#pragma once

// Information-loss summaries, repeat-run aggregation and their TSV/JSON
// renderings. Column layouts are documented in the README; bump the schema
// tag when they change.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "dnaobf/cluster.hpp"
#include "dnaobf/error.hpp"

namespace dnaobf {

inline constexpr std::string_view kRunSchema = "dnaobf.run/1";
inline constexpr std::string_view kAggregateSchema = "dnaobf.aggregate/1";
inline constexpr std::string_view kBenchSchema = "dnaobf.bench/1";

enum class Format { tsv, json };

inline Format parse_format(std::string_view tag) {
  if (tag == "tsv") return Format::tsv;
  if (tag == "json") return Format::json;
  throw InputError("unknown report format '" + std::string(tag) + "' (expected tsv or json)");
}

struct ClusterRow {
  std::vector<std::string> members;
  Distance pair_distance = 0;
  std::vector<Distance> member_losses;
  std::size_t aligned_length = 0;

  friend bool operator==(const ClusterRow&, const ClusterRow&) = default;
};

struct RunReport {
  std::string method;
  std::size_t n_sequences = 0;
  std::uint64_t seed = 0;
  Distance total_distance = 0;       // sum of member losses
  Distance total_pair_distance = 0;  // sum of cluster pair distances
  std::size_t search_invocations = 0;
  std::size_t fallback_searches = 0;
  double wall_time_s = 0.0;
  std::vector<ClusterRow> clusters;

  // Headline metric: mean loss per original sequence.
  Ratio average_distance() const {
    return {total_distance, static_cast<std::int64_t>(std::max<std::size_t>(n_sequences, 1))};
  }
  // Secondary metric: mean pair distance per cluster.
  Ratio per_cluster_average() const {
    return {total_pair_distance, static_cast<std::int64_t>(std::max<std::size_t>(clusters.size(), 1))};
  }

  friend bool operator==(const RunReport&, const RunReport&) = default;
};

inline RunReport summarize(const ObfuscationRun& run) {
  RunReport r;
  r.method = run.method;
  r.n_sequences = run.n_sequences;
  r.seed = run.rng_seed;
  r.search_invocations = run.search_invocations;
  r.fallback_searches = run.fallback_searches;
  r.wall_time_s = run.wall_time.count();

  std::vector<const Cluster*> ordered;
  for (const auto& c : run.clusters) ordered.push_back(&c);
  std::ranges::stable_sort(ordered, {}, [](const Cluster* c) { return c->first_member(); });
  for (const Cluster* c : ordered) {
    r.clusters.push_back({c->member_ids, c->pair_distance, c->member_losses, c->obfuscated.size()});
    r.total_pair_distance += c->pair_distance;
    r.total_distance += c->total_loss();
  }
  return r;
}

struct AggregateReport {
  std::string method;
  std::size_t n_sequences = 0;
  std::size_t runs = 0;
  double mean_distance = 0.0;
  double std_distance = 0.0;  // sample (n - 1) convention; 0 for a single run
  double mean_wall_time_s = 0.0;
  double std_wall_time_s = 0.0;
  std::vector<RunReport> per_run;

  friend bool operator==(const AggregateReport&, const AggregateReport&) = default;
};

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};

inline MeanStd mean_std(std::span<const double> xs) {
  MeanStd out;
  if (xs.empty()) return out;
  for (double x : xs) out.mean += x;
  out.mean /= static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - out.mean) * (x - out.mean);
    out.std = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return out;
}

inline AggregateReport aggregate(std::span<const RunReport> reports) {
  if (reports.empty()) throw InputError("cannot aggregate zero runs");
  AggregateReport a;
  a.method = reports.front().method;
  a.n_sequences = reports.front().n_sequences;
  a.runs = reports.size();
  std::vector<double> dist, wall;
  for (const auto& r : reports) {
    if (r.method != a.method || r.n_sequences != a.n_sequences)
      throw InputError("aggregated runs must share method and dataset");
    dist.push_back(r.average_distance().value());
    wall.push_back(r.wall_time_s);
    a.per_run.push_back(r);
  }
  const MeanStd d = mean_std(dist), w = mean_std(wall);
  a.mean_distance = d.mean;
  a.std_distance = d.std;
  a.mean_wall_time_s = w.mean;
  a.std_wall_time_s = w.std;
  return a;
}

// One (method, size) cell of a benchmark sweep.
struct BenchRow {
  std::string method;
  std::size_t size = 0;
  std::size_t runs = 0;
  double mean_distance = 0.0;
  double std_distance = 0.0;
  double mean_wall_time_s = 0.0;
  double std_wall_time_s = 0.0;
  std::size_t max_search_invocations = 0;

  friend bool operator==(const BenchRow&, const BenchRow&) = default;
};

inline BenchRow bench_row(const AggregateReport& a) {
  BenchRow row{a.method, a.n_sequences, a.runs, a.mean_distance, a.std_distance,
               a.mean_wall_time_s, a.std_wall_time_s, 0};
  for (const auto& r : a.per_run)
    row.max_search_invocations = std::max(row.max_search_invocations, r.search_invocations);
  return row;
}

// JSON --------------------------------------------------------------------

using Json = nlohmann::ordered_json;

inline void to_json(Json& j, const ClusterRow& c) {
  j = Json{{"members", c.members},
           {"size", c.members.size()},
           {"pair_distance", c.pair_distance},
           {"member_losses", c.member_losses},
           {"aligned_length", c.aligned_length}};
}

inline void from_json(const Json& j, ClusterRow& c) {
  j.at("members").get_to(c.members);
  j.at("pair_distance").get_to(c.pair_distance);
  j.at("member_losses").get_to(c.member_losses);
  j.at("aligned_length").get_to(c.aligned_length);
}

inline void to_json(Json& j, const RunReport& r) {
  j = Json{{"schema", kRunSchema},
           {"method", r.method},
           {"n_sequences", r.n_sequences},
           {"seed", r.seed},
           {"clusters", r.clusters.size()},
           {"total_distance", r.total_distance},
           {"average_distance", r.average_distance().value()},
           {"total_pair_distance", r.total_pair_distance},
           {"per_cluster_average", r.per_cluster_average().value()},
           {"search_invocations", r.search_invocations},
           {"fallback_searches", r.fallback_searches},
           {"wall_time_s", r.wall_time_s},
           {"cluster_rows", r.clusters}};
}

inline void from_json(const Json& j, RunReport& r) {
  j.at("method").get_to(r.method);
  j.at("n_sequences").get_to(r.n_sequences);
  j.at("seed").get_to(r.seed);
  j.at("total_distance").get_to(r.total_distance);
  j.at("total_pair_distance").get_to(r.total_pair_distance);
  j.at("search_invocations").get_to(r.search_invocations);
  j.at("fallback_searches").get_to(r.fallback_searches);
  j.at("wall_time_s").get_to(r.wall_time_s);
  j.at("cluster_rows").get_to(r.clusters);
}

inline void to_json(Json& j, const AggregateReport& a) {
  j = Json{{"schema", kAggregateSchema},
           {"method", a.method},
           {"n_sequences", a.n_sequences},
           {"runs", a.runs},
           {"mean_distance", a.mean_distance},
           {"std_distance", a.std_distance},
           {"mean_wall_time_s", a.mean_wall_time_s},
           {"std_wall_time_s", a.std_wall_time_s},
           {"per_run", a.per_run}};
}

inline void from_json(const Json& j, AggregateReport& a) {
  j.at("method").get_to(a.method);
  j.at("n_sequences").get_to(a.n_sequences);
  j.at("runs").get_to(a.runs);
  j.at("mean_distance").get_to(a.mean_distance);
  j.at("std_distance").get_to(a.std_distance);
  j.at("mean_wall_time_s").get_to(a.mean_wall_time_s);
  j.at("std_wall_time_s").get_to(a.std_wall_time_s);
  j.at("per_run").get_to(a.per_run);
}

inline void to_json(Json& j, const BenchRow& b) {
  j = Json{{"method", b.method},
           {"size", b.size},
           {"runs", b.runs},
           {"mean_distance", b.mean_distance},
           {"std_distance", b.std_distance},
           {"mean_wall_time_s", b.mean_wall_time_s},
           {"std_wall_time_s", b.std_wall_time_s},
           {"max_search_invocations", b.max_search_invocations}};
}

// TSV ---------------------------------------------------------------------

namespace detail {

inline std::string fixed(double v, int places) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(places) << v;
  return os.str();
}

template <typename T>
std::string join(const std::vector<T>& items, std::string_view sep) {
  std::ostringstream os;
  for (std::size_t i = 0; i < items.size(); ++i) os << (i ? sep : "") << items[i];
  return os.str();
}

}  // namespace detail

inline constexpr std::string_view kClusterColumns =
    "cluster\tmembers\tsize\tpair_distance\tmember_losses\taligned_length";
inline constexpr std::string_view kRunColumns =
    "run\tseed\taverage_distance\ttotal_distance\tclusters\tsearch_invocations\twall_time_s";
inline constexpr std::string_view kBenchColumns =
    "method\tsize\truns\tmean_distance\tstd_distance\tmean_wall_time_s\tstd_wall_time_s\t"
    "max_search_invocations";

inline std::string emit(const RunReport& r, Format format) {
  if (format == Format::json) return Json(r).dump(2) + "\n";
  std::ostringstream os;
  os << "#schema\t" << kRunSchema << '\n'
     << "#method\t" << r.method << '\n'
     << "#n_sequences\t" << r.n_sequences << '\n'
     << "#seed\t" << r.seed << '\n'
     << "#clusters\t" << r.clusters.size() << '\n'
     << "#total_distance\t" << r.total_distance << '\n'
     << "#average_distance\t" << r.average_distance().decimal(4) << '\n'
     << "#total_pair_distance\t" << r.total_pair_distance << '\n'
     << "#per_cluster_average\t" << r.per_cluster_average().decimal(4) << '\n'
     << "#search_invocations\t" << r.search_invocations << '\n'
     << "#fallback_searches\t" << r.fallback_searches << '\n'
     << "#wall_time_s\t" << detail::fixed(r.wall_time_s, 6) << '\n'
     << kClusterColumns << '\n';
  for (std::size_t i = 0; i < r.clusters.size(); ++i) {
    const auto& c = r.clusters[i];
    os << i + 1 << '\t' << detail::join(c.members, "+") << '\t' << c.members.size() << '\t'
       << c.pair_distance << '\t' << detail::join(c.member_losses, ",") << '\t' << c.aligned_length
       << '\n';
  }
  return os.str();
}

inline std::string emit(const AggregateReport& a, Format format) {
  if (format == Format::json) return Json(a).dump(2) + "\n";
  std::ostringstream os;
  os << "#schema\t" << kAggregateSchema << '\n'
     << "#method\t" << a.method << '\n'
     << "#n_sequences\t" << a.n_sequences << '\n'
     << "#runs\t" << a.runs << '\n'
     << "#mean_distance\t" << detail::fixed(a.mean_distance, 4) << '\n'
     << "#std_distance\t" << detail::fixed(a.std_distance, 4) << '\n'
     << "#mean_wall_time_s\t" << detail::fixed(a.mean_wall_time_s, 6) << '\n'
     << "#std_wall_time_s\t" << detail::fixed(a.std_wall_time_s, 6) << '\n'
     << kRunColumns << '\n';
  for (std::size_t i = 0; i < a.per_run.size(); ++i) {
    const auto& r = a.per_run[i];
    os << i + 1 << '\t' << r.seed << '\t' << r.average_distance().decimal(4) << '\t'
       << r.total_distance << '\t' << r.clusters.size() << '\t' << r.search_invocations << '\t'
       << detail::fixed(r.wall_time_s, 6) << '\n';
  }
  return os.str();
}

inline std::string emit(std::span<const BenchRow> rows, Format format) {
  if (format == Format::json) {
    Json j{{"schema", kBenchSchema}, {"rows", Json::array()}};
    for (const auto& row : rows) j["rows"].push_back(row);
    return j.dump(2) + "\n";
  }
  std::ostringstream os;
  os << "#schema\t" << kBenchSchema << '\n' << kBenchColumns << '\n';
  for (const auto& b : rows)
    os << b.method << '\t' << b.size << '\t' << b.runs << '\t' << detail::fixed(b.mean_distance, 4)
       << '\t' << detail::fixed(b.std_distance, 4) << '\t' << detail::fixed(b.mean_wall_time_s, 6)
       << '\t' << detail::fixed(b.std_wall_time_s, 6) << '\t' << b.max_search_invocations << '\n';
  return os.str();
}

}  // namespace dnaobf
