#include "hazyard/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace hazyard::oracle {

namespace {

struct Placed {
  ContainerType type;
  Coordinate at;
};

bool violates(const RuleMatrix& m, const YardDimensions& dims, const Placed& a, const Placed& b) {
  const auto& rule = m.rule(a.type, b.type);
  const int dx = a.at.x - b.at.x;
  const int dy = a.at.y - b.at.y;
  const int dz = a.at.z - b.at.z;
  auto meters = [&] {
    const double rx = dx * dims.row_pitch;
    const double ry = dy * dims.slot_pitch;
    const double rz = dz * dims.tier_pitch;
    return std::sqrt(rx * rx + ry * ry + rz * rz);
  };
  switch (rule.kind) {
    case RuleKind::none:
      return false;
    case RuleKind::metric:
      return meters() < rule.min_distance;
    case RuleKind::explosive:
      return meters() < 4.8 * std::cbrt(rule.net_weight_kg);
    case RuleKind::von_neumann:
      return std::abs(dx) + std::abs(dy) + std::abs(dz) == 1;
  }
  return false;
}

bool safe_placement(const RuleMatrix& m, const YardDimensions& dims, const std::vector<Placed>& placed) {
  for (std::size_t i = 0; i < placed.size(); ++i) {
    for (std::size_t j = i + 1; j < placed.size(); ++j) {
      if (violates(m, dims, placed[i], placed[j]) || violates(m, dims, placed[j], placed[i])) return false;
    }
  }
  return true;
}

// Calls visit(heights) for every column height vector summing to `remaining`.
template <typename Visit>
bool for_each_heights(std::vector<int>& heights, std::size_t column, int remaining, int tiers, Visit&& visit) {
  if (column == heights.size()) return remaining == 0 ? visit(heights) : false;
  const int max_here = std::min(tiers, remaining);
  for (int h = 0; h <= max_here; ++h) {
    heights[column] = h;
    if (for_each_heights(heights, column + 1, remaining - h, tiers, visit)) return true;
  }
  heights[column] = 0;
  return false;
}

}  // namespace

int brute_fitness(const YardConfiguration& cfg, const RuleMatrix& m, ContainerId id) {
  const auto& self = cfg.record(id);
  if (!self.position) throw UnknownContainerError("container " + std::to_string(id) + " is not positioned");
  const Placed a{self.type, *self.position};
  int n = 0;
  for (const auto& [other_id, rec] : cfg.containers()) {
    if (other_id == id || !rec.position) continue;
    if (violates(m, cfg.dims(), a, {rec.type, *rec.position})) ++n;
  }
  return n;
}

BlockFitness brute_block_fitness(const YardConfiguration& cfg, const RuleMatrix& m) {
  BlockFitness out;
  for (const auto& [id, rec] : cfg.containers()) {
    if (!rec.position) continue;
    const int f = brute_fitness(cfg, m, id);
    out.worst = std::max(out.worst, f);
    out.sum += f;
  }
  return out;
}

bool exhaustive_safe_exists(const YardDimensions& dims, std::vector<ContainerType> types, const RuleMatrix& m,
                            EnumerationBounds bounds) {
  dims.validate();
  if (dims.capacity() > bounds.max_cells || types.size() > bounds.max_containers) {
    throw EnumerationBoundError("exhaustive search limited to " + std::to_string(bounds.max_cells) + " cells and " +
                                std::to_string(bounds.max_containers) + " containers");
  }
  if (types.size() > dims.capacity()) throw CapacityError("more containers than cells");
  for (auto t : types) m.rule(t, t);  // rejects undeclared types

  std::sort(types.begin(), types.end());
  std::vector<int> heights(dims.columns(), 0);
  return for_each_heights(heights, 0, static_cast<int>(types.size()), dims.tiers, [&](const std::vector<int>& h) {
    std::vector<Coordinate> cells;
    for (int x = 0; x < dims.rows; ++x) {
      for (int y = 0; y < dims.slots; ++y) {
        for (int z = 0; z < h[static_cast<std::size_t>(x * dims.slots + y)]; ++z) cells.push_back({x, y, z});
      }
    }
    auto order = types;
    do {
      std::vector<Placed> placed;
      for (std::size_t i = 0; i < cells.size(); ++i) placed.push_back({order[i], cells[i]});
      if (safe_placement(m, dims, placed)) return true;
    } while (std::next_permutation(order.begin(), order.end()));
    return false;
  });
}

std::string VerificationReport::summary() const {
  std::ostringstream out;
  out << (passed() ? "PASS" : "FAIL") << ": " << moves_replayed << " moves replayed";
  for (const auto& [name, n] : checked) out << ", " << name << '=' << n;
  if (final_fitness) out << ", final worst=" << final_fitness->worst << " sum=" << final_fitness->sum;
  for (const auto& f : failures) out << "\n  " << f.location << ": " << f.description;
  return out.str();
}

VerificationReport verify_trace(const YardConfiguration& initial, const std::vector<MoveRecord>& moves,
                                const RuleMatrix& m, const ClaimedOutcome& claim) {
  VerificationReport report;
  const auto& dims = initial.dims();
  constexpr ContainerId kEmpty = ~ContainerId{0};
  auto index = [&](Coordinate c) {
    return (static_cast<std::size_t>(c.x) * static_cast<std::size_t>(dims.slots) + static_cast<std::size_t>(c.y)) *
               static_cast<std::size_t>(dims.tiers) +
           static_cast<std::size_t>(c.z);
  };
  auto inside = [&](Coordinate c) {
    return c.x >= 0 && c.x < dims.rows && c.y >= 0 && c.y < dims.slots && c.z >= 0 && c.z < dims.tiers;
  };

  std::vector<ContainerId> grid(dims.capacity(), kEmpty);
  std::map<ContainerId, Placed> where;
  for (const auto& [id, rec] : initial.containers()) {
    if (!rec.position) continue;
    grid[index(*rec.position)] = id;
    where[id] = {rec.type, *rec.position};
  }

  auto fail = [&](std::string what, std::string location) {
    report.failures.push_back({std::move(what), std::move(location)});
  };
  auto check_grid = [&](const std::string& location) {
    ++report.checked["gravity"];
    ++report.checked["bijection"];
    std::size_t occupied = 0;
    for (int x = 0; x < dims.rows; ++x) {
      for (int y = 0; y < dims.slots; ++y) {
        for (int z = 0; z < dims.tiers; ++z) {
          const ContainerId id = grid[index({x, y, z})];
          if (id == kEmpty) continue;
          ++occupied;
          if (z > 0 && grid[index({x, y, z - 1})] == kEmpty) {
            fail("floating container " + std::to_string(id) + " at " + to_string({x, y, z}), location);
            return false;
          }
          const auto it = where.find(id);
          if (it == where.end() || it->second.at != Coordinate{x, y, z}) {
            fail("cell " + to_string({x, y, z}) + " disagrees with container " + std::to_string(id), location);
            return false;
          }
        }
      }
    }
    if (occupied != where.size()) {
      fail("container count and occupied cells differ", location);
      return false;
    }
    return true;
  };

  if (!check_grid("initial")) return report;

  for (std::size_t i = 0; i < moves.size(); ++i) {
    const auto& mv = moves[i];
    const std::string location = "move " + std::to_string(i + 1) + " (seq " + std::to_string(mv.seq) + ")";
    ++report.checked["seq"];
    if (mv.seq != i + 1) {
      fail("sequence number " + std::to_string(mv.seq) + " where " + std::to_string(i + 1) + " expected", location);
      return report;
    }
    ++report.checked["source"];
    if (!inside(mv.from) || grid[index(mv.from)] != mv.id) {
      fail("source " + to_string(mv.from) + " does not hold container " + std::to_string(mv.id), location);
      return report;
    }
    ++report.checked["unburied"];
    if (mv.from.z + 1 < dims.tiers && grid[index({mv.from.x, mv.from.y, mv.from.z + 1})] != kEmpty) {
      fail("container " + std::to_string(mv.id) + " is buried", location);
      return report;
    }
    ++report.checked["destination"];
    if (!inside(mv.to)) {
      fail("destination " + to_string(mv.to) + " outside the yard", location);
      return report;
    }
    if (mv.to == mv.from) {
      fail("destination equals source", location);
      return report;
    }
    if (grid[index(mv.to)] != kEmpty) {
      fail("destination " + to_string(mv.to) + " is occupied", location);
      return report;
    }
    const Coordinate below{mv.to.x, mv.to.y, mv.to.z - 1};
    if (mv.to.z > 0 && (grid[index(below)] == kEmpty || below == mv.from)) {
      fail("destination " + to_string(mv.to) + " is floating", location);
      return report;
    }
    grid[index(mv.from)] = kEmpty;
    grid[index(mv.to)] = mv.id;
    where[mv.id].at = mv.to;
    ++report.moves_replayed;
    if (!check_grid(location)) return report;
  }

  YardConfiguration final_cfg(dims);
  std::vector<std::pair<ContainerId, Placed>> ordered(where.begin(), where.end());
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const auto& a, const auto& b) { return a.second.at.z < b.second.at.z; });
  for (const auto& [id, p] : ordered) final_cfg.place(id, p.type, p.at);
  const auto final_fitness = brute_block_fitness(final_cfg, m);
  report.final_fitness = final_fitness;

  if (claim.movements) {
    ++report.checked["claim"];
    if (*claim.movements != moves.size()) {
      fail("claimed " + std::to_string(*claim.movements) + " movements but trace has " + std::to_string(moves.size()),
           "outcome");
    }
  }
  if (claim.final_fitness) {
    ++report.checked["claim"];
    if (*claim.final_fitness != final_fitness) {
      fail("claimed final fitness (" + std::to_string(claim.final_fitness->worst) + ", " +
               std::to_string(claim.final_fitness->sum) + ") but replay gives (" + std::to_string(final_fitness.worst) +
               ", " + std::to_string(final_fitness.sum) + ")",
           "outcome");
    }
  }
  if (claim.status) {
    ++report.checked["claim"];
    if ((*claim.status == RunStatus::safe) != final_fitness.safe()) {
      fail("claimed status " + std::string(status_name(*claim.status)) + " disagrees with final fitness", "outcome");
    }
  }
  return report;
}

VerificationReport verify_trace(const ParsedTrace& trace, const RuleMatrix& m) {
  return verify_trace(trace.initial, trace.moves, m,
                      ClaimedOutcome{trace.claimed_movements, trace.claimed_final, trace.claimed_status});
}

}  // namespace hazyard::oracle
