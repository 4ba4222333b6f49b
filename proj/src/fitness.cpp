#include "hazyard/fitness.hpp"

#include <algorithm>

namespace hazyard {

namespace {

constexpr std::array<Coordinate, 6> kVonNeumannOffsets = {
    Coordinate{-1, 0, 0}, Coordinate{1, 0, 0},  Coordinate{0, -1, 0},
    Coordinate{0, 1, 0},  Coordinate{0, 0, -1}, Coordinate{0, 0, 1}};

// Same operation order as the kernels so self-exclusion agrees bit for bit.
double kernel_squared_distance(kernels::Point3 q, kernels::Point3 p) {
  const double dx = q.x - p.x;
  const double dy = q.y - p.y;
  const double dz = q.z - p.z;
  double acc = dx * dx;
  acc = acc + dy * dy;
  acc = acc + dz * dz;
  return acc;
}

}  // namespace

std::string_view WeightingPolicy::name() const {
  switch (mode) {
    case Mode::inverse_neighbourhood:
      return "inverse_neighbourhood";
    case Mode::unit:
      return "unit";
  }
  return "unknown";
}

std::optional<WeightingPolicy> WeightingPolicy::parse(std::string_view name) {
  if (name == "inverse_neighbourhood") return WeightingPolicy{Mode::inverse_neighbourhood};
  if (name == "unit") return WeightingPolicy{Mode::unit};
  return std::nullopt;
}

FitnessEvaluator::FitnessEvaluator(const YardConfiguration& cfg, const RuleMatrix& m)
    : rules_(m), dims_(cfg.dims()) {
  for (auto a : rules_.types()) {
    auto& tr = type_rules_[a.index()];
    const double r = rules_.radius(a);
    tr.radius_sq = r * r;
    for (auto b : rules_.types()) {
      const auto resolved = resolved_distance(rules_, a, b);
      if (const double* meters = std::get_if<double>(&resolved)) {
        tr.metric.emplace_back(b.index(), *meters * *meters);
      } else if (std::holds_alternative<VonNeumannMarker>(resolved)) {
        tr.vn[b.index()] = true;
        tr.has_vn = true;
      }
    }
  }

  cells_.assign(dims_.capacity(), kEmpty);
  entries_.reserve(cfg.size());
  for (const auto& [id, rec] : cfg.containers()) {
    if (!rec.position) continue;
    if (!rules_.declared(rec.type)) {
      throw DomainError("container " + std::to_string(id) + " has type " + rec.type.label() +
                        " which the rule matrix does not declare");
    }
    const Coordinate at = *rec.position;
    const auto p = center(at);
    auto& bucket = buckets_[rec.type.index()];
    Entry e{rec.type, at, static_cast<std::uint32_t>(bucket.ids.size()),
            static_cast<std::uint32_t>(all_.ids.size())};
    for (Bucket* b : {&bucket, &all_}) {
      b->xs.push_back(p.x);
      b->ys.push_back(p.y);
      b->zs.push_back(p.z);
      b->ids.push_back(id);
    }
    entries_.emplace(id, e);
    cells_[cell_index(at)] = id;
    ids_.push_back(id);
  }
}

const FitnessEvaluator::Entry& FitnessEvaluator::entry(ContainerId id) const {
  const auto it = entries_.find(id);
  if (it == entries_.end()) throw UnknownContainerError("unknown container " + std::to_string(id));
  return it->second;
}

std::size_t FitnessEvaluator::cell_index(Coordinate c) const {
  return (static_cast<std::size_t>(c.x) * static_cast<std::size_t>(dims_.slots) +
          static_cast<std::size_t>(c.y)) *
             static_cast<std::size_t>(dims_.tiers) +
         static_cast<std::size_t>(c.z);
}

kernels::Point3 FitnessEvaluator::center(Coordinate c) const {
  return {c.x * dims_.row_pitch, c.y * dims_.slot_pitch, c.z * dims_.tier_pitch};
}

int FitnessEvaluator::fitness(ContainerId id) const { return fitness_at(id, entry(id).at); }

int FitnessEvaluator::fitness_at(ContainerId id, Coordinate to) const {
  const Entry& self = entry(id);
  const auto& tr = type_rules_[self.type.index()];
  const auto p = center(to);
  long n = 0;
  for (const auto& [b, r2] : tr.metric) {
    const Bucket& bucket = buckets_[b];
    if (bucket.ids.empty()) continue;
    n += static_cast<long>(kernels::count_within(bucket.view(), p, r2));
    if (b == self.type.index() && kernel_squared_distance(center(self.at), p) < r2) --n;
  }
  if (tr.has_vn) {
    for (const auto& off : kVonNeumannOffsets) {
      const Coordinate q{to.x + off.x, to.y + off.y, to.z + off.z};
      if (!contains(dims_, q)) continue;
      const ContainerId other = cells_[cell_index(q)];
      if (other == kEmpty || other == id) continue;
      if (tr.vn[entries_.at(other).type.index()]) ++n;
    }
  }
  return static_cast<int>(n);
}

bool FitnessEvaluator::vn_neighbour_within_radius(kernels::Point3 p, Coordinate q, double radius_sq) const {
  return kernel_squared_distance(center(q), p) < radius_sq;
}

std::vector<ContainerId> FitnessEvaluator::neighbourhood(ContainerId id) const {
  const Entry& self = entry(id);
  const auto& tr = type_rules_[self.type.index()];
  std::vector<ContainerId> out;
  const auto p = center(self.at);
  if (tr.radius_sq > 0.0 && !all_.ids.empty()) {
    std::vector<double> d2(all_.ids.size());
    kernels::squared_distances(all_.view(), p, d2);
    for (std::size_t i = 0; i < d2.size(); ++i) {
      if (d2[i] < tr.radius_sq && all_.ids[i] != id) out.push_back(all_.ids[i]);
    }
  }
  if (tr.has_vn) {
    for (const auto& off : kVonNeumannOffsets) {
      const Coordinate q{self.at.x + off.x, self.at.y + off.y, self.at.z + off.z};
      if (!contains(dims_, q)) continue;
      const ContainerId other = cells_[cell_index(q)];
      if (other == kEmpty || vn_neighbour_within_radius(p, q, tr.radius_sq)) continue;
      out.push_back(other);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t FitnessEvaluator::neighbourhood_size(ContainerId id) const {
  const Entry& self = entry(id);
  const auto& tr = type_rules_[self.type.index()];
  const auto p = center(self.at);
  std::size_t n = 0;
  if (tr.radius_sq > 0.0 && !all_.ids.empty()) {
    // Self sits at distance 0 < radius.
    n = kernels::count_within(all_.view(), p, tr.radius_sq) - 1;
  }
  if (tr.has_vn) {
    for (const auto& off : kVonNeumannOffsets) {
      const Coordinate q{self.at.x + off.x, self.at.y + off.y, self.at.z + off.z};
      if (!contains(dims_, q)) continue;
      if (cells_[cell_index(q)] == kEmpty || vn_neighbour_within_radius(p, q, tr.radius_sq)) continue;
      ++n;
    }
  }
  return n;
}

double FitnessEvaluator::weight(int fitness, std::size_t neighbourhood_size, WeightingPolicy policy) {
  if (fitness == 0) return 0.0;
  switch (policy.mode) {
    case WeightingPolicy::Mode::inverse_neighbourhood:
      return neighbourhood_size == 0 ? static_cast<double>(fitness)
                                     : static_cast<double>(fitness) / static_cast<double>(neighbourhood_size);
    case WeightingPolicy::Mode::unit:
      return static_cast<double>(fitness);
  }
  return static_cast<double>(fitness);
}

double FitnessEvaluator::weighted_fitness(ContainerId id, WeightingPolicy policy) const {
  const int f = fitness(id);
  if (f == 0) return 0.0;
  return weight(f, neighbourhood_size(id), policy);
}

BlockFitness FitnessEvaluator::block_fitness() const {
  BlockFitness out;
  for (ContainerId id : ids_) {
    const Entry& e = entries_.at(id);
    if (type_rules_[e.type.index()].metric.empty() && !type_rules_[e.type.index()].has_vn) continue;
    const int f = fitness_at(id, e.at);
    out.worst = std::max(out.worst, f);
    out.sum += f;
  }
  return out;
}

void FitnessEvaluator::move(ContainerId id, Coordinate to) {
  auto it = entries_.find(id);
  if (it == entries_.end()) throw UnknownContainerError("unknown container " + std::to_string(id));
  Entry& e = it->second;
  cells_[cell_index(e.at)] = kEmpty;
  cells_[cell_index(to)] = id;
  e.at = to;
  const auto p = center(to);
  buckets_[e.type.index()].set(e.type_slot, p);
  all_.set(e.all_slot, p);
}

int fitness(const YardConfiguration& cfg, const RuleMatrix& m, ContainerId id) {
  cfg.position(id);
  return FitnessEvaluator(cfg, m).fitness(id);
}

std::vector<ContainerId> neighbourhood(const YardConfiguration& cfg, const RuleMatrix& m, ContainerId id) {
  cfg.position(id);
  return FitnessEvaluator(cfg, m).neighbourhood(id);
}

double weighted_fitness(const YardConfiguration& cfg, const RuleMatrix& m, WeightingPolicy policy, ContainerId id) {
  cfg.position(id);
  return FitnessEvaluator(cfg, m).weighted_fitness(id, policy);
}

BlockFitness block_fitness(const YardConfiguration& cfg, const RuleMatrix& m) {
  return FitnessEvaluator(cfg, m).block_fitness();
}

int hypothetical_fitness(const YardConfiguration& cfg, const RuleMatrix& m, ContainerId id, Coordinate to) {
  const Coordinate from = cfg.position(id);
  check_bounds(cfg.dims(), to);
  if (to != from) {
    if (cfg.occupied(to)) {
      throw MoveError(MoveError::Kind::occupied_destination, "destination " + to_string(to) + " is occupied");
    }
    const bool rests_on_self = to.x == from.x && to.y == from.y && to.z == from.z + 1;
    if (!cfg.supported(to) || rests_on_self) {
      throw MoveError(MoveError::Kind::unsupported_destination, "destination " + to_string(to) + " is unsupported");
    }
  }
  return FitnessEvaluator(cfg, m).fitness_at(id, to);
}

}  // namespace hazyard
