#pragma once
// Relocation strategies: Schelling-style random relocation of the worst
// agents, and the cognitive agent based strategy (CABS) that elects one
// container per round after anticipating where each candidate would go.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hazyard/fitness.hpp"
#include "hazyard/random.hpp"
#include "hazyard/rules.hpp"
#include "hazyard/yard.hpp"

namespace hazyard {

enum class Strategy { schelling, cabs };

std::string_view strategy_name(Strategy s);
std::optional<Strategy> parse_strategy(std::string_view name);

struct StrategyParams {
  Strategy strategy = Strategy::cabs;
  std::size_t movement_budget = 1000;
  std::size_t candidate_set_size = 10;
  std::size_t tabu_capacity = kDefaultTabuCapacity;  // 0 disables tabu memory
  std::uint64_t seed = 0;
  WeightingPolicy weighting;

  // 10000 movements for Schelling, 1000 for CABS.
  static StrategyParams defaults(Strategy s);
  void validate() const;
};

enum class MoveCause { selected, unbury, neutral_relocate };

std::string_view cause_name(MoveCause c);
std::optional<MoveCause> parse_cause(std::string_view name);

struct MoveRecord {
  std::size_t seq = 0;  // 1-based
  ContainerId id = 0;
  Coordinate from;
  Coordinate to;
  MoveCause cause = MoveCause::selected;

  friend bool operator==(const MoveRecord&, const MoveRecord&) = default;
};

enum class RunStatus { safe, budget_exhausted, local_minimum, cycle_abort };

std::string_view status_name(RunStatus s);
std::optional<RunStatus> parse_status(std::string_view name);

// One entry per Schelling tick or CABS round.
struct RoundDiagnostics {
  std::size_t round = 0;
  std::size_t first_move = 0;  // seq of the first move of the round; 0 if none
  std::size_t moves = 0;
  // Schelling: agents whose weighted fitness equalled the tick maximum.
  double max_weighted = 0.0;
  std::vector<ContainerId> selected;
  // CABS: candidate set, election and execution details.
  std::vector<ContainerId> candidates;
  std::optional<ContainerId> elected;
  int utility = 0;
  std::optional<Coordinate> chosen_place;
  bool place_stolen = false;
  // Containers whose place search fell back to ignoring tabu because every
  // reachable cell was tabu for them.
  std::vector<ContainerId> aspiration;

  friend bool operator==(const RoundDiagnostics&, const RoundDiagnostics&) = default;
};

struct RunOutcome {
  RunStatus status = RunStatus::safe;
  std::size_t movements = 0;
  int final_worst = 0;
  long final_sum = 0;
  std::vector<MoveRecord> trace;
  std::vector<RoundDiagnostics> diagnostics;

  friend bool operator==(const RunOutcome&, const RunOutcome&) = default;
};

// A configuration paired with a fitness index kept in sync across moves.
class YardState {
 public:
  YardState(YardConfiguration& cfg, const RuleMatrix& m) : cfg_(cfg), eval_(cfg, m) {}

  const YardConfiguration& cfg() const { return cfg_; }
  const FitnessEvaluator& eval() const { return eval_; }
  const RuleMatrix& rules() const { return eval_.rules(); }

  void move(ContainerId id, Coordinate to, std::size_t tabu_capacity) {
    cfg_.apply_move(id, to, tabu_capacity);
    eval_.move(id, to);
  }

 private:
  YardConfiguration& cfg_;
  FitnessEvaluator eval_;
};

// Records moves against a movement budget.
class MoveLog {
 public:
  explicit MoveLog(std::size_t budget) : budget_(budget) {}

  bool exhausted() const { return moves_.size() >= budget_; }
  std::size_t size() const { return moves_.size(); }
  const std::vector<MoveRecord>& moves() const { return moves_; }
  std::vector<MoveRecord> take() { return std::move(moves_); }

  // Applies and records a move. Returns false (and does nothing) when the
  // budget is spent.
  bool execute(YardState& state, ContainerId id, Coordinate to, MoveCause cause, std::size_t tabu_capacity);

 private:
  std::size_t budget_;
  std::vector<MoveRecord> moves_;
};

// Schelling ------------------------------------------------------------------

RunOutcome run_schelling(YardConfiguration& cfg, const RuleMatrix& m, const StrategyParams& params);

// CABS -----------------------------------------------------------------------

struct PlaceSearch {
  Coordinate place;
  int fitness = 0;
  bool aspiration = false;  // every destination was tabu, so tabu was ignored
  std::size_t evaluated = 0;

  friend bool operator==(const PlaceSearch&, const PlaceSearch&) = default;
};

// Scans id's destinations nearest first (ties lexicographic), skipping cells in
// its tabu list when respect_tabu is set, and keeps the first cell with the
// lowest hypothetical fitness. Stops at the first cell with fitness 0.
// nullopt only when id has no destination at all.
std::optional<PlaceSearch> search_place(const YardState& state, ContainerId id, bool respect_tabu);
std::optional<PlaceSearch> search_place(const YardConfiguration& cfg, const RuleMatrix& m, ContainerId id,
                                        bool respect_tabu);

// Containers with weighted fitness > 0, worst first (ties by ascending id),
// truncated to the candidate set size.
std::vector<ContainerId> cabs_candidates(const FitnessEvaluator& eval, const StrategyParams& params);
std::vector<ContainerId> cabs_candidates(const YardConfiguration& cfg, const RuleMatrix& m,
                                         const StrategyParams& params);

struct Candidate {
  ContainerId id = 0;
  int fitness = 0;
  std::optional<PlaceSearch> best;

  int utility() const { return fitness - (best ? best->fitness : 0); }
};

struct Election {
  ContainerId id = 0;
  PlaceSearch place;
  int utility = 0;

  friend bool operator==(const Election&, const Election&) = default;
};

// Reduces the candidate set to one container: keep the highest utility
// (stop with nullopt when it is negative or no candidate has a place), then
// the highest neighbourhood maximum fitness, then draw uniformly.
std::optional<Election> cabs_elect(const std::vector<Candidate>& candidates, const FitnessEvaluator& eval, Rng& rng);

struct ExecuteResult {
  bool completed = false;  // false when the budget ran out mid-execution
  bool place_stolen = false;
  std::vector<ContainerId> aspiration;
};

// Unburies the elected container top-down, then moves it to its chosen place
// (or, if that place was taken meanwhile, to a fresh search result).
ExecuteResult cabs_execute(YardState& state, const Election& elected, const StrategyParams& params, MoveLog& log);

RunOutcome run_cabs(YardConfiguration& cfg, const RuleMatrix& m, const StrategyParams& params);

// Dispatches on params.strategy.
RunOutcome run_strategy(YardConfiguration& cfg, const RuleMatrix& m, const StrategyParams& params);

// Trace text: the initial snapshot, an optional '# outcome <status>
// <movements> <worst> <sum>' comment, then one line per move:
//   m <seq> <id> <fromX> <fromY> <fromZ> <toX> <toY> <toZ> <cause>
std::string format_trace(const YardConfiguration& initial, const RunOutcome& outcome);

struct ParsedTrace {
  YardConfiguration initial;
  std::vector<MoveRecord> moves;
  std::optional<RunStatus> claimed_status;
  std::optional<std::size_t> claimed_movements;
  std::optional<BlockFitness> claimed_final;
};

ParsedTrace parse_trace(std::string_view text);

}  // namespace hazyard
