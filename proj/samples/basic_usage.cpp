// Anonymizes a small synthetic corpus and prints the resulting clusters.

#include <iostream>

#include "dnaobf/dnaobf.hpp"

int main() {
  using namespace dnaobf;

  const Dataset db = synthesize_dataset({.seed = 3, .families = 3, .copies_per_family = 3,
                                         .length = 120, .substitution_rate = 0.02});
  const ObfuscationRun run = iter_megablast(db, ScoringParams{}, /*rng_seed=*/7);
  check_run(run, db);

  for (const Cluster& c : run.clusters) {
    for (const auto& id : c.member_ids) std::cout << id << ' ';
    std::cout << "-> loss " << c.total_loss() << '\n' << to_string(c.obfuscated) << '\n';
  }
  std::cout << "average distance " << run.average_distance().decimal() << '\n';
}
