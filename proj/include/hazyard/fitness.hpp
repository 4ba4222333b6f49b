#pragma once
// Per-container fitness (number of violated separation rules), weighted
// fitness, neighbourhoods and block-level well-being.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hazyard/rules.hpp"
#include "hazyard/yard.hpp"

namespace hazyard {

struct WeightingPolicy {
  enum class Mode {
    inverse_neighbourhood,  // fitness / |neighbourhood| (factor 1 when the neighbourhood is empty)
    unit,                   // fitness unchanged
  };
  Mode mode = Mode::inverse_neighbourhood;

  std::string_view name() const;
  static std::optional<WeightingPolicy> parse(std::string_view name);

  friend bool operator==(const WeightingPolicy&, const WeightingPolicy&) = default;
};

struct BlockFitness {
  int worst = 0;
  long sum = 0;

  bool safe() const { return worst == 0; }
  friend bool operator==(const BlockFitness&, const BlockFitness&) = default;
};

// Spatial index over one configuration: cell occupancy plus, for every type,
// the cell centers of its containers in structure-of-arrays form so that
// "how many containers of type B lie within r of p" is one kernel call.
// The index is a snapshot; callers that mutate the configuration keep it in
// sync through move().
class FitnessEvaluator {
 public:
  FitnessEvaluator(const YardConfiguration& cfg, const RuleMatrix& m);

  const RuleMatrix& rules() const { return rules_; }
  const YardDimensions& dims() const { return dims_; }

  bool has(ContainerId id) const { return entries_.contains(id); }
  ContainerType type_of(ContainerId id) const { return entry(id).type; }
  Coordinate position(ContainerId id) const { return entry(id).at; }
  bool is_neutral(ContainerId id) const { return rules_.is_neutral(type_of(id)); }

  int fitness(ContainerId id) const;

  // Fitness id would have at `to` with id lifted from its cell and everything
  // else unchanged. No legality check on `to`.
  int fitness_at(ContainerId id, Coordinate to) const;

  // Ids within the type's rule radius, plus Von Neumann neighbours when the
  // type has a VN rule; ascending, excluding id.
  std::vector<ContainerId> neighbourhood(ContainerId id) const;
  std::size_t neighbourhood_size(ContainerId id) const;

  double weighted_fitness(ContainerId id, WeightingPolicy policy) const;
  static double weight(int fitness, std::size_t neighbourhood_size, WeightingPolicy policy);

  BlockFitness block_fitness() const;

  // Ascending ids of all indexed containers.
  const std::vector<ContainerId>& ids() const { return ids_; }

  void move(ContainerId id, Coordinate to);

 private:
  struct Bucket {
    std::vector<double> xs, ys, zs;
    std::vector<ContainerId> ids;

    kernels::PointsView view() const { return {xs.data(), ys.data(), zs.data(), xs.size()}; }
    void set(std::size_t slot, kernels::Point3 p) {
      xs[slot] = p.x;
      ys[slot] = p.y;
      zs[slot] = p.z;
    }
  };

  struct Entry {
    ContainerType type;
    Coordinate at;
    std::uint32_t type_slot = 0;
    std::uint32_t all_slot = 0;
  };

  struct TypeRules {
    std::vector<std::pair<std::size_t, double>> metric;  // (type index, squared distance)
    std::array<bool, ContainerType::kCount> vn{};
    bool has_vn = false;
    double radius_sq = 0.0;
  };

  const Entry& entry(ContainerId id) const;
  std::size_t cell_index(Coordinate c) const;
  kernels::Point3 center(Coordinate c) const;
  bool vn_neighbour_within_radius(kernels::Point3 p, Coordinate q, double radius_sq) const;

  static constexpr ContainerId kEmpty = ~ContainerId{0};

  RuleMatrix rules_;
  YardDimensions dims_;
  std::array<TypeRules, ContainerType::kCount> type_rules_{};
  std::array<Bucket, ContainerType::kCount> buckets_{};
  Bucket all_;
  std::vector<ContainerId> cells_;
  std::unordered_map<ContainerId, Entry> entries_;
  std::vector<ContainerId> ids_;
};

// Convenience entry points; each builds a FitnessEvaluator for the call.
int fitness(const YardConfiguration& cfg, const RuleMatrix& m, ContainerId id);
std::vector<ContainerId> neighbourhood(const YardConfiguration& cfg, const RuleMatrix& m, ContainerId id);
double weighted_fitness(const YardConfiguration& cfg, const RuleMatrix& m, WeightingPolicy policy, ContainerId id);
BlockFitness block_fitness(const YardConfiguration& cfg, const RuleMatrix& m);

// `to` must be id's current cell or a cell that is empty and supported once
// id is lifted; otherwise MoveError.
int hypothetical_fitness(const YardConfiguration& cfg, const RuleMatrix& m, ContainerId id, Coordinate to);

}  // namespace hazyard
