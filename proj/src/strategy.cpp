#include "hazyard/strategy.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "text.hpp"

namespace hazyard {

namespace {

// A configuration hash seen this many times under CABS aborts the run.
constexpr int kCycleOccurrences = 5;

std::vector<std::size_t> nearest_first(const YardConfiguration& cfg, Coordinate from,
                                       const std::vector<Coordinate>& cells) {
  const auto& dims = cfg.dims();
  std::vector<double> xs(cells.size()), ys(cells.size()), zs(cells.size()), d2(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto p = cell_center(dims, cells[i]);
    xs[i] = p.x;
    ys[i] = p.y;
    zs[i] = p.z;
  }
  kernels::squared_distances({xs.data(), ys.data(), zs.data(), cells.size()}, cell_center(dims, from), d2);
  std::vector<std::size_t> order(cells.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (d2[a] != d2[b]) return d2[a] < d2[b];
    return cells[a] < cells[b];
  });
  return order;
}

std::optional<Coordinate> nearest_destination(const YardConfiguration& cfg, ContainerId id) {
  const auto dests = cfg.destinations(id);
  if (dests.empty()) return std::nullopt;
  return dests[nearest_first(cfg, cfg.position(id), dests).front()];
}

std::size_t require_destinations(const std::vector<Coordinate>& dests, ContainerId id) {
  if (dests.empty()) {
    throw ConfigurationFullError("no placeable cell available to move container " + std::to_string(id));
  }
  return dests.size();
}

RunOutcome finish(RunStatus status, MoveLog& log, const FitnessEvaluator& eval,
                  std::vector<RoundDiagnostics> diagnostics) {
  RunOutcome out;
  const auto bf = eval.block_fitness();
  out.status = bf.safe() ? RunStatus::safe : status;
  out.final_worst = bf.worst;
  out.final_sum = bf.sum;
  out.trace = log.take();
  out.movements = out.trace.size();
  out.diagnostics = std::move(diagnostics);
  return out;
}

}  // namespace

std::string_view strategy_name(Strategy s) { return s == Strategy::schelling ? "schelling" : "cabs"; }

std::optional<Strategy> parse_strategy(std::string_view name) {
  if (name == "schelling") return Strategy::schelling;
  if (name == "cabs") return Strategy::cabs;
  return std::nullopt;
}

StrategyParams StrategyParams::defaults(Strategy s) {
  StrategyParams p;
  p.strategy = s;
  p.movement_budget = s == Strategy::schelling ? 10000 : 1000;
  return p;
}

void StrategyParams::validate() const {
  if (movement_budget < 1) throw DomainError("movement budget must be >= 1");
  if (candidate_set_size < 1) throw DomainError("candidate set size must be >= 1");
}

std::string_view cause_name(MoveCause c) {
  switch (c) {
    case MoveCause::selected:
      return "selected";
    case MoveCause::unbury:
      return "unbury";
    case MoveCause::neutral_relocate:
      return "neutral_relocate";
  }
  return "unknown";
}

std::optional<MoveCause> parse_cause(std::string_view name) {
  for (auto c : {MoveCause::selected, MoveCause::unbury, MoveCause::neutral_relocate}) {
    if (cause_name(c) == name) return c;
  }
  return std::nullopt;
}

std::string_view status_name(RunStatus s) {
  switch (s) {
    case RunStatus::safe:
      return "safe";
    case RunStatus::budget_exhausted:
      return "budget_exhausted";
    case RunStatus::local_minimum:
      return "local_minimum";
    case RunStatus::cycle_abort:
      return "cycle_abort";
  }
  return "unknown";
}

std::optional<RunStatus> parse_status(std::string_view name) {
  for (auto s : {RunStatus::safe, RunStatus::budget_exhausted, RunStatus::local_minimum, RunStatus::cycle_abort}) {
    if (status_name(s) == name) return s;
  }
  return std::nullopt;
}

bool MoveLog::execute(YardState& state, ContainerId id, Coordinate to, MoveCause cause, std::size_t tabu_capacity) {
  if (exhausted()) return false;
  const Coordinate from = state.cfg().position(id);
  state.move(id, to, tabu_capacity);
  moves_.push_back({moves_.size() + 1, id, from, to, cause});
  return true;
}

// Schelling -------------------------------------------------------------------

RunOutcome run_schelling(YardConfiguration& cfg, const RuleMatrix& m, const StrategyParams& params) {
  params.validate();
  YardState state(cfg, m);
  MoveLog log(params.movement_budget);
  Rng rng(params.seed);
  std::vector<RoundDiagnostics> diagnostics;

  auto random_move = [&](ContainerId id, MoveCause cause) {
    const auto dests = state.cfg().destinations(id);
    const auto n = require_destinations(dests, id);
    return log.execute(state, id, dests[rng.uniform_index(n)], cause, params.tabu_capacity);
  };

  for (std::size_t tick = 1;; ++tick) {
    const auto& eval = state.eval();
    double max_weighted = 0.0;
    std::vector<std::pair<ContainerId, double>> weighted;
    for (ContainerId id : eval.ids()) {
      if (eval.is_neutral(id)) continue;
      const double w = eval.weighted_fitness(id, params.weighting);
      if (w > 0.0) weighted.emplace_back(id, w);
      max_weighted = std::max(max_weighted, w);
    }
    if (max_weighted == 0.0) return finish(RunStatus::safe, log, eval, std::move(diagnostics));
    if (log.exhausted()) return finish(RunStatus::budget_exhausted, log, eval, std::move(diagnostics));

    RoundDiagnostics diag;
    diag.round = tick;
    diag.max_weighted = max_weighted;
    for (const auto& [id, w] : weighted) {
      if (w == max_weighted) diag.selected.push_back(id);
    }
    diag.first_move = log.size() + 1;

    bool budget_left = true;
    for (ContainerId id : diag.selected) {
      for (ContainerId above : state.cfg().containers_above(id)) {
        budget_left = random_move(above, MoveCause::unbury);
        if (!budget_left) break;
      }
      if (budget_left) budget_left = random_move(id, MoveCause::selected);
      if (!budget_left) break;
    }
    diag.moves = log.size() + 1 - diag.first_move;
    if (diag.moves == 0) diag.first_move = 0;
    diagnostics.push_back(std::move(diag));
    if (!budget_left) return finish(RunStatus::budget_exhausted, log, state.eval(), std::move(diagnostics));
  }
}

// CABS ------------------------------------------------------------------------

std::optional<PlaceSearch> search_place(const YardState& state, ContainerId id, bool respect_tabu) {
  const auto& cfg = state.cfg();
  const auto& rec = cfg.record(id);
  auto dests = cfg.destinations(id);
  if (dests.empty()) return std::nullopt;

  PlaceSearch result;
  if (respect_tabu && !rec.tabu.empty()) {
    std::vector<Coordinate> allowed;
    for (const auto& c : dests) {
      if (!rec.in_tabu(c)) allowed.push_back(c);
    }
    if (allowed.empty()) {
      result.aspiration = true;
    } else {
      dests = std::move(allowed);
    }
  }

  bool found = false;
  for (std::size_t i : nearest_first(cfg, *rec.position, dests)) {
    const int f = state.eval().fitness_at(id, dests[i]);
    ++result.evaluated;
    if (!found || f < result.fitness) {
      found = true;
      result.place = dests[i];
      result.fitness = f;
    }
    if (f == 0) break;
  }
  return result;
}

std::optional<PlaceSearch> search_place(const YardConfiguration& cfg, const RuleMatrix& m, ContainerId id,
                                        bool respect_tabu) {
  YardConfiguration copy = cfg;
  const YardState state(copy, m);
  return search_place(state, id, respect_tabu);
}

std::vector<ContainerId> cabs_candidates(const FitnessEvaluator& eval, const StrategyParams& params) {
  std::vector<std::pair<double, ContainerId>> scored;
  for (ContainerId id : eval.ids()) {
    if (eval.is_neutral(id)) continue;
    const double w = eval.weighted_fitness(id, params.weighting);
    if (w > 0.0) scored.emplace_back(w, id);
  }
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  if (scored.size() > params.candidate_set_size) scored.resize(params.candidate_set_size);
  std::vector<ContainerId> out;
  out.reserve(scored.size());
  for (const auto& [w, id] : scored) out.push_back(id);
  return out;
}

std::vector<ContainerId> cabs_candidates(const YardConfiguration& cfg, const RuleMatrix& m,
                                         const StrategyParams& params) {
  return cabs_candidates(FitnessEvaluator(cfg, m), params);
}

std::optional<Election> cabs_elect(const std::vector<Candidate>& candidates, const FitnessEvaluator& eval, Rng& rng) {
  std::vector<const Candidate*> pool;
  for (const auto& c : candidates) {
    if (c.best) pool.push_back(&c);
  }
  if (pool.empty()) return std::nullopt;

  int best_utility = pool.front()->utility();
  for (const auto* c : pool) best_utility = std::max(best_utility, c->utility());
  if (best_utility < 0) return std::nullopt;
  std::erase_if(pool, [&](const Candidate* c) { return c->utility() != best_utility; });

  std::vector<int> neighbourhood_max(pool.size(), 0);
  for (std::size_t i = 0; i < pool.size(); ++i) {
    for (ContainerId n : eval.neighbourhood(pool[i]->id)) {
      neighbourhood_max[i] = std::max(neighbourhood_max[i], eval.fitness(n));
    }
  }
  const int highest = *std::max_element(neighbourhood_max.begin(), neighbourhood_max.end());
  std::vector<const Candidate*> finalists;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (neighbourhood_max[i] == highest) finalists.push_back(pool[i]);
  }
  std::sort(finalists.begin(), finalists.end(), [](const Candidate* a, const Candidate* b) { return a->id < b->id; });

  const Candidate* winner = finalists.size() == 1 ? finalists.front() : finalists[rng.uniform_index(finalists.size())];
  return Election{winner->id, *winner->best, best_utility};
}

ExecuteResult cabs_execute(YardState& state, const Election& elected, const StrategyParams& params, MoveLog& log) {
  ExecuteResult result;
  for (ContainerId above : state.cfg().containers_above(elected.id)) {
    Coordinate to;
    MoveCause cause;
    if (state.eval().is_neutral(above)) {
      const auto nearest = nearest_destination(state.cfg(), above);
      if (!nearest) throw ConfigurationFullError("no placeable cell to unbury container " + std::to_string(above));
      to = *nearest;
      cause = MoveCause::neutral_relocate;
    } else {
      const auto found = search_place(state, above, true);
      if (!found) throw ConfigurationFullError("no placeable cell to unbury container " + std::to_string(above));
      if (found->aspiration) result.aspiration.push_back(above);
      to = found->place;
      cause = MoveCause::unbury;
    }
    if (!log.execute(state, above, to, cause, params.tabu_capacity)) return result;
  }

  Coordinate to = elected.place.place;
  if (!state.cfg().is_placeable(to)) {
    result.place_stolen = true;
    const auto found = search_place(state, elected.id, true);
    if (!found) throw ConfigurationFullError("no placeable cell for container " + std::to_string(elected.id));
    if (found->aspiration) result.aspiration.push_back(elected.id);
    to = found->place;
  }
  if (!log.execute(state, elected.id, to, MoveCause::selected, params.tabu_capacity)) return result;
  result.completed = true;
  return result;
}

RunOutcome run_cabs(YardConfiguration& cfg, const RuleMatrix& m, const StrategyParams& params) {
  params.validate();
  YardState state(cfg, m);
  MoveLog log(params.movement_budget);
  Rng rng(params.seed);
  std::vector<RoundDiagnostics> diagnostics;
  std::unordered_map<std::uint64_t, int> seen;
  ++seen[cfg.layout_hash()];

  for (std::size_t round = 1;; ++round) {
    const auto& eval = state.eval();
    if (eval.block_fitness().safe()) return finish(RunStatus::safe, log, eval, std::move(diagnostics));
    if (log.exhausted()) return finish(RunStatus::budget_exhausted, log, eval, std::move(diagnostics));

    RoundDiagnostics diag;
    diag.round = round;
    diag.candidates = cabs_candidates(eval, params);
    std::vector<Candidate> candidates;
    candidates.reserve(diag.candidates.size());
    for (ContainerId id : diag.candidates) {
      candidates.push_back({id, eval.fitness(id), search_place(state, id, true)});
    }

    const auto elected = cabs_elect(candidates, eval, rng);
    if (!elected) {
      diagnostics.push_back(std::move(diag));
      return finish(RunStatus::local_minimum, log, eval, std::move(diagnostics));
    }
    diag.elected = elected->id;
    diag.utility = elected->utility;
    diag.chosen_place = elected->place.place;
    if (elected->place.aspiration) diag.aspiration.push_back(elected->id);
    diag.first_move = log.size() + 1;

    const auto executed = cabs_execute(state, *elected, params, log);
    diag.place_stolen = executed.place_stolen;
    diag.aspiration.insert(diag.aspiration.end(), executed.aspiration.begin(), executed.aspiration.end());
    diag.moves = log.size() + 1 - diag.first_move;
    if (diag.moves == 0) diag.first_move = 0;
    diagnostics.push_back(std::move(diag));

    if (!executed.completed) return finish(RunStatus::budget_exhausted, log, state.eval(), std::move(diagnostics));
    if (++seen[cfg.layout_hash()] >= kCycleOccurrences) {
      return finish(RunStatus::cycle_abort, log, state.eval(), std::move(diagnostics));
    }
  }
}

RunOutcome run_strategy(YardConfiguration& cfg, const RuleMatrix& m, const StrategyParams& params) {
  return params.strategy == Strategy::schelling ? run_schelling(cfg, m, params) : run_cabs(cfg, m, params);
}

// Trace text --------------------------------------------------------------------

std::string format_trace(const YardConfiguration& initial, const RunOutcome& outcome) {
  std::ostringstream out;
  out << save_snapshot(initial);
  out << "# outcome " << status_name(outcome.status) << ' ' << outcome.movements << ' ' << outcome.final_worst << ' '
      << outcome.final_sum << '\n';
  for (const auto& mv : outcome.trace) {
    out << "m " << mv.seq << ' ' << mv.id << ' ' << mv.from.x << ' ' << mv.from.y << ' ' << mv.from.z << ' '
        << mv.to.x << ' ' << mv.to.y << ' ' << mv.to.z << ' ' << cause_name(mv.cause) << '\n';
  }
  return out.str();
}

ParsedTrace parse_trace(std::string_view input) {
  const auto lines = text::split_lines(input);
  std::string snapshot;
  std::vector<MoveRecord> moves;
  std::optional<RunStatus> status;
  std::optional<std::size_t> movements;
  std::optional<BlockFitness> final_fitness;

  for (std::size_t n = 0; n < lines.size(); ++n) {
    const std::size_t line_no = n + 1;
    const auto trimmed = text::trim(lines[n]);
    const auto tok = text::split_ws(trimmed);
    if (!tok.empty() && tok[0] == "m") {
      if (tok.size() != 10) throw ParseError(line_no, "expected 'm <seq> <id> <from xyz> <to xyz> <cause>'");
      MoveRecord mv;
      mv.seq = text::parse_uint(tok[1], line_no);
      mv.id = static_cast<ContainerId>(text::parse_uint(tok[2], line_no));
      mv.from = {text::parse_int(tok[3], line_no), text::parse_int(tok[4], line_no), text::parse_int(tok[5], line_no)};
      mv.to = {text::parse_int(tok[6], line_no), text::parse_int(tok[7], line_no), text::parse_int(tok[8], line_no)};
      const auto cause = parse_cause(tok[9]);
      if (!cause) throw ParseError(line_no, "unknown move cause '" + std::string(tok[9]) + "'");
      mv.cause = *cause;
      moves.push_back(mv);
      snapshot += '\n';
      continue;
    }
    if (tok.size() == 6 && tok[0] == "#" && tok[1] == "outcome") {
      status = parse_status(tok[2]);
      if (!status) throw ParseError(line_no, "unknown status '" + std::string(tok[2]) + "'");
      movements = text::parse_uint(tok[3], line_no);
      final_fitness = BlockFitness{text::parse_int(tok[4], line_no), static_cast<long>(text::parse_uint(tok[5], line_no))};
    }
    snapshot.append(lines[n]);
    snapshot += '\n';
  }
  return ParsedTrace{load_snapshot(snapshot), std::move(moves), status, movements, final_fitness};
}

}  // namespace hazyard
