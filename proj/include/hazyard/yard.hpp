#pragma once
// Block geometry and occupancy: a rows x slots x tiers grid of cells where
// containers stack under gravity.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hazyard/error.hpp"
#include "hazyard/kernels.hpp"

namespace hazyard {

using ContainerId = std::uint32_t;

inline constexpr std::size_t kDefaultTabuCapacity = 5;

// Container type label. The universe is fixed: the five simplified classes
// T1..T5 followed by the nine IMDG classes IMDG1..IMDG9.
class ContainerType {
 public:
  static constexpr std::size_t kCount = 14;

  constexpr ContainerType() = default;
  constexpr explicit ContainerType(std::uint8_t index) : index_(index) {}

  static std::optional<ContainerType> parse(std::string_view label);
  static constexpr ContainerType simplified(int n) { return ContainerType(static_cast<std::uint8_t>(n - 1)); }
  static constexpr ContainerType imdg(int n) { return ContainerType(static_cast<std::uint8_t>(4 + n)); }

  std::string label() const;
  constexpr std::size_t index() const { return index_; }

  friend constexpr auto operator<=>(ContainerType, ContainerType) = default;

 private:
  std::uint8_t index_ = 0;
};

inline constexpr ContainerType T1 = ContainerType::simplified(1);
inline constexpr ContainerType T2 = ContainerType::simplified(2);
inline constexpr ContainerType T3 = ContainerType::simplified(3);
inline constexpr ContainerType T4 = ContainerType::simplified(4);
inline constexpr ContainerType T5 = ContainerType::simplified(5);

struct YardDimensions {
  int rows = 10;
  int slots = 10;
  int tiers = 4;
  double row_pitch = 4.5;
  double slot_pitch = 6.5;
  double tier_pitch = 2.6;

  std::size_t capacity() const {
    return static_cast<std::size_t>(rows) * static_cast<std::size_t>(slots) *
           static_cast<std::size_t>(tiers);
  }
  std::size_t columns() const { return static_cast<std::size_t>(rows) * static_cast<std::size_t>(slots); }

  // Throws DomainError unless all counts >= 1 and all pitches > 0.
  void validate() const;

  friend bool operator==(const YardDimensions&, const YardDimensions&) = default;
};

// Lexicographic (x, y, z) ordering is the enumeration order everywhere.
struct Coordinate {
  int x = 0;  // row
  int y = 0;  // slot
  int z = 0;  // tier

  friend constexpr auto operator<=>(const Coordinate&, const Coordinate&) = default;
};

std::string to_string(Coordinate c);

bool contains(const YardDimensions& dims, Coordinate c);
void check_bounds(const YardDimensions& dims, Coordinate c);

// Cell center in meters.
kernels::Point3 cell_center(const YardDimensions& dims, Coordinate c);

// Euclidean distance between cell centers in meters.
double distance(const YardDimensions& dims, Coordinate a, Coordinate b);
double squared_distance(const YardDimensions& dims, Coordinate a, Coordinate b);

// True when a and b differ by exactly one on exactly one axis.
bool von_neumann_adjacent(Coordinate a, Coordinate b);

struct ContainerRecord {
  ContainerId id = 0;
  ContainerType type;
  std::optional<Coordinate> position;
  std::vector<Coordinate> tabu;  // oldest first

  bool in_tabu(Coordinate c) const;

  friend bool operator==(const ContainerRecord&, const ContainerRecord&) = default;
};

class YardConfiguration {
 public:
  explicit YardConfiguration(YardDimensions dims);

  const YardDimensions& dims() const { return dims_; }

  // Adds a new container on a placeable cell.
  void place(ContainerId id, ContainerType type, Coordinate c);

  std::optional<ContainerId> occupant(Coordinate c) const;
  bool occupied(Coordinate c) const { return occupant(c).has_value(); }
  bool supported(Coordinate c) const;
  bool is_placeable(Coordinate c) const;
  int stack_height(int x, int y) const;

  bool has(ContainerId id) const { return registry_.contains(id); }
  const ContainerRecord& record(ContainerId id) const;
  Coordinate position(ContainerId id) const;
  const std::map<ContainerId, ContainerRecord>& containers() const { return registry_; }
  std::size_t size() const { return registry_.size(); }

  // Empty and supported cells, lexicographic order.
  std::vector<Coordinate> placeable_cells() const;

  // Placeable cells a container may move to: every placeable cell outside its
  // own stack. Cells in its own stack are either its current cell or would be
  // unsupported once it (and anything above it) is lifted.
  std::vector<Coordinate> destinations(ContainerId id) const;

  // Ids stacked above id, highest first.
  std::vector<ContainerId> containers_above(ContainerId id) const;
  bool is_top_of_stack(ContainerId id) const;

  // Moves a top-of-stack container and records the vacated cell in its FIFO
  // tabu list (at most tabu_capacity entries, no duplicates).
  void apply_move(ContainerId id, Coordinate to, std::size_t tabu_capacity = kDefaultTabuCapacity);

  // Throws InvariantError on double occupancy, a broken cell/registry
  // bijection, or a floating container.
  void check_invariants() const;

  // Order-independent fingerprint of the occupancy (ids, types and cells).
  std::uint64_t layout_hash() const;

  // Same dims and same (id, type, cell) triples; tabu memory is ignored.
  bool same_layout(const YardConfiguration& other) const;

  friend bool operator==(const YardConfiguration&, const YardConfiguration&) = default;

 private:
  std::size_t cell_index(Coordinate c) const;

  static constexpr ContainerId kEmpty = ~ContainerId{0};

  YardDimensions dims_;
  std::vector<ContainerId> cells_;
  std::vector<int> heights_;
  std::map<ContainerId, ContainerRecord> registry_;
};

// Snapshot text format:
//   # hazyard v1
//   dims <rows> <slots> <tiers>
//   pitch <row> <slot> <tier>
//   c <id> <type> <x> <y> <z>      (zero or more)
// '#' lines after the header are comments.
std::string save_snapshot(const YardConfiguration& cfg);
YardConfiguration load_snapshot(std::string_view text);

}  // namespace hazyard
