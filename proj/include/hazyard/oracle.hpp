#pragma once
// Brute-force reference implementations used to check the engine. Nothing
// here depends on the fitness index or the strategies; only the domain types
// (configuration, rule matrix, trace records) are shared.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hazyard/rules.hpp"
#include "hazyard/strategy.hpp"
#include "hazyard/yard.hpp"

namespace hazyard::oracle {

// Violated rules of id against every other container, by definition.
int brute_fitness(const YardConfiguration& cfg, const RuleMatrix& m, ContainerId id);
BlockFitness brute_block_fitness(const YardConfiguration& cfg, const RuleMatrix& m);

struct EnumerationBounds {
  std::size_t max_cells = 12;
  std::size_t max_containers = 6;
};

// Enumerates every gravity-valid placement of the multiset and reports
// whether one has no violated rule. Throws EnumerationBoundError beyond the
// bounds.
bool exhaustive_safe_exists(const YardDimensions& dims, std::vector<ContainerType> types, const RuleMatrix& m,
                            EnumerationBounds bounds = {});

struct VerificationReport {
  std::map<std::string, std::size_t> checked;
  struct Failure {
    std::string description;
    std::string location;
  };
  std::vector<Failure> failures;
  std::size_t moves_replayed = 0;
  std::optional<BlockFitness> final_fitness;

  bool passed() const { return failures.empty(); }
  std::string summary() const;
};

struct ClaimedOutcome {
  std::optional<std::size_t> movements;
  std::optional<BlockFitness> final_fitness;
  std::optional<RunStatus> status;
};

// Replays the moves on an independent grid, checking each against the
// physical rules, then compares the final block fitness with the claim.
VerificationReport verify_trace(const YardConfiguration& initial, const std::vector<MoveRecord>& moves,
                                const RuleMatrix& m, const ClaimedOutcome& claim = {});
VerificationReport verify_trace(const ParsedTrace& trace, const RuleMatrix& m);

}  // namespace hazyard::oracle
