#pragma once

#include <initializer_list>

#include "hazyard/random.hpp"
#include "hazyard/yard.hpp"

namespace hazyard::testing {

struct Placement {
  ContainerId id;
  ContainerType type;
  Coordinate at;
};

inline YardDimensions dims(int rows, int slots, int tiers) {
  YardDimensions d;
  d.rows = rows;
  d.slots = slots;
  d.tiers = tiers;
  return d;
}

// Placements must be listed bottom-up within each stack.
inline YardConfiguration yard(const YardDimensions& d, std::initializer_list<Placement> placements) {
  YardConfiguration cfg(d);
  for (const auto& p : placements) cfg.place(p.id, p.type, p.at);
  return cfg;
}

// Random gravity-valid configuration with types drawn uniformly from T1..T5.
inline YardConfiguration random_yard(const YardDimensions& d, std::size_t count, Rng& rng) {
  YardConfiguration cfg(d);
  for (std::size_t i = 0; i < count; ++i) {
    const auto cells = cfg.placeable_cells();
    const auto type = ContainerType::simplified(static_cast<int>(1 + rng.uniform_index(5)));
    cfg.place(static_cast<ContainerId>(i), type, cells[rng.uniform_index(cells.size())]);
  }
  return cfg;
}

}  // namespace hazyard::testing
