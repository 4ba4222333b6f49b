#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "hazyard/error.hpp"
#include "hazyard/yard.hpp"
#include "support.hpp"

using namespace hazyard;
using hazyard::testing::dims;
using hazyard::testing::random_yard;
using hazyard::testing::yard;

TEST_CASE("container type labels") {
  CHECK(ContainerType::parse("T1") == T1);
  CHECK(ContainerType::parse("IMDG7") == ContainerType::imdg(7));
  CHECK(ContainerType::imdg(9).label() == "IMDG9");
  CHECK(T5.label() == "T5");
  CHECK_FALSE(ContainerType::parse("T6").has_value());
  CHECK_FALSE(ContainerType::parse("IMDG0").has_value());
  CHECK_FALSE(ContainerType::parse("t1").has_value());
}

TEST_CASE("dimensions") {
  CHECK(YardDimensions{}.capacity() == 400);
  CHECK(dims(2, 3, 4).columns() == 6);
  CHECK_THROWS_AS(dims(0, 3, 4).validate(), DomainError);
  auto d = dims(1, 1, 1);
  d.tier_pitch = 0.0;
  CHECK_THROWS_AS(d.validate(), DomainError);
}

TEST_CASE("cell_center") {
  const YardDimensions d;
  CHECK(cell_center(d, {0, 0, 0}) == kernels::Point3{0, 0, 0});
  CHECK(cell_center(d, {1, 0, 0}) == kernels::Point3{4.5, 0, 0});
  CHECK(cell_center(d, {1, 1, 1}) == kernels::Point3{4.5, 6.5, 2.6});
  CHECK_THROWS_AS(cell_center(d, {10, 0, 0}), BoundsError);
  CHECK_THROWS_AS(cell_center(d, {0, -1, 0}), BoundsError);
}

TEST_CASE("distance") {
  const YardDimensions d;
  CHECK(distance(d, {3, 4, 1}, {3, 4, 1}) == 0.0);
  CHECK(distance(d, {0, 0, 0}, {0, 1, 0}) == 6.5);
  CHECK(distance(d, {0, 0, 0}, {1, 1, 0}) == doctest::Approx(7.906).epsilon(1e-4));
  CHECK(distance(d, {0, 0, 0}, {1, 1, 0}) == std::hypot(4.5, 6.5));
  CHECK_THROWS_AS(distance(d, {0, 0, 0}, {0, 0, 4}), BoundsError);
}

TEST_CASE("distance is a metric on cell centers") {
  const YardDimensions d;
  Rng rng(3);
  auto pick = [&] {
    return Coordinate{static_cast<int>(rng.uniform_index(10)), static_cast<int>(rng.uniform_index(10)),
                      static_cast<int>(rng.uniform_index(4))};
  };
  for (int i = 0; i < 2000; ++i) {
    const auto a = pick(), b = pick(), c = pick();
    CHECK(distance(d, a, b) == distance(d, b, a));
    CHECK((distance(d, a, b) == 0.0) == (a == b));
    CHECK(distance(d, a, c) <= distance(d, a, b) + distance(d, b, c) + 1e-9);
  }
}

TEST_CASE("von Neumann adjacency is one step on one axis") {
  CHECK(von_neumann_adjacent({1, 1, 1}, {1, 1, 2}));
  CHECK(von_neumann_adjacent({1, 1, 1}, {0, 1, 1}));
  CHECK_FALSE(von_neumann_adjacent({1, 1, 1}, {1, 1, 1}));
  CHECK_FALSE(von_neumann_adjacent({1, 1, 1}, {2, 2, 1}));
  CHECK_FALSE(von_neumann_adjacent({1, 1, 1}, {1, 3, 1}));
}

TEST_CASE("placeable cells") {
  CHECK(YardConfiguration(dims(2, 1, 2)).placeable_cells() == std::vector<Coordinate>{{0, 0, 0}, {1, 0, 0}});
  CHECK(yard(dims(1, 1, 2), {{1, T5, {0, 0, 0}}}).placeable_cells() == std::vector<Coordinate>{{0, 0, 1}});
  CHECK(yard(dims(1, 2, 1), {{1, T5, {0, 0, 0}}, {2, T5, {0, 1, 0}}}).placeable_cells().empty());
}

TEST_CASE("placeable cells are sorted, empty and supported") {
  Rng rng(8);
  for (int i = 0; i < 100; ++i) {
    const auto cfg = random_yard(dims(4, 3, 3), rng.uniform_index(36), rng);
    const auto cells = cfg.placeable_cells();
    CHECK(std::adjacent_find(cells.begin(), cells.end(), std::greater_equal<>()) == cells.end());
    for (const auto& c : cells) {
      CHECK_FALSE(cfg.occupied(c));
      CHECK(cfg.supported(c));
    }
  }
}

TEST_CASE("destinations leave out the container's own column") {
  const auto cfg = yard(dims(1, 2, 3), {{1, T2, {0, 0, 0}}, {2, T5, {0, 0, 1}}});
  CHECK(cfg.destinations(2) == std::vector<Coordinate>{{0, 1, 0}});
  CHECK(cfg.destinations(1) == std::vector<Coordinate>{{0, 1, 0}});
}

TEST_CASE("containers_above is top-down") {
  const auto cfg = yard(dims(1, 2, 3), {{1, T5, {0, 0, 0}}, {2, T5, {0, 0, 1}}, {3, T5, {0, 0, 2}}});
  CHECK(cfg.containers_above(3).empty());
  CHECK(cfg.containers_above(1) == std::vector<ContainerId>{3, 2});
  CHECK(cfg.containers_above(2) == std::vector<ContainerId>{3});
  CHECK(cfg.is_top_of_stack(3));
  CHECK_THROWS_AS(cfg.containers_above(9), UnknownContainerError);
}

TEST_CASE("apply_move") {
  auto cfg = yard(dims(2, 2, 2), {{1, T5, {0, 0, 0}}, {2, T2, {0, 0, 1}}});

  SUBCASE("top of stack to the ground") {
    cfg.apply_move(2, {1, 1, 0});
    CHECK(cfg.position(2) == Coordinate{1, 1, 0});
    CHECK_FALSE(cfg.occupied({0, 0, 1}));
    CHECK(cfg.record(2).tabu == std::vector<Coordinate>{{0, 0, 1}});
    cfg.check_invariants();
  }
  SUBCASE("buried") {
    try {
      cfg.apply_move(1, {1, 0, 0});
      FAIL("expected MoveError");
    } catch (const MoveError& e) {
      CHECK(e.kind() == MoveError::Kind::buried_container);
    }
  }
  SUBCASE("floating destination") {
    try {
      cfg.apply_move(2, {1, 0, 1});
      FAIL("expected MoveError");
    } catch (const MoveError& e) {
      CHECK(e.kind() == MoveError::Kind::unsupported_destination);
    }
  }
  SUBCASE("occupied destination") {
    CHECK_THROWS_AS(cfg.apply_move(2, {0, 0, 0}), MoveError);
  }
  SUBCASE("same cell") {
    CHECK_THROWS_AS(cfg.apply_move(2, {0, 0, 1}), MoveError);
  }
  SUBCASE("the cell above itself is not supported once lifted") {
    auto single = yard(dims(1, 1, 2), {{1, T5, {0, 0, 0}}});
    CHECK_THROWS_AS(single.apply_move(1, {0, 0, 1}), MoveError);
  }
  SUBCASE("failed moves leave the configuration untouched") {
    const auto before = cfg;
    CHECK_THROWS(cfg.apply_move(1, {1, 0, 0}));
    CHECK(cfg == before);
  }
}

TEST_CASE("tabu list is a bounded FIFO without duplicates") {
  auto cfg = yard(dims(1, 4, 1), {{1, T2, {0, 0, 0}}});
  cfg.apply_move(1, {0, 1, 0}, 2);
  cfg.apply_move(1, {0, 2, 0}, 2);
  CHECK(cfg.record(1).tabu == std::vector<Coordinate>{{0, 0, 0}, {0, 1, 0}});
  cfg.apply_move(1, {0, 3, 0}, 2);
  CHECK(cfg.record(1).tabu == std::vector<Coordinate>{{0, 1, 0}, {0, 2, 0}});
  cfg.apply_move(1, {0, 1, 0}, 2);
  cfg.apply_move(1, {0, 3, 0}, 2);
  CHECK(cfg.record(1).tabu == std::vector<Coordinate>{{0, 3, 0}, {0, 1, 0}});
  cfg.apply_move(1, {0, 0, 0}, 0);
  CHECK(cfg.record(1).tabu.empty());
}

TEST_CASE("random legal moves preserve the invariants") {
  Rng rng(21);
  auto cfg = random_yard(dims(3, 3, 3), 18, rng);
  for (int i = 0; i < 500; ++i) {
    std::vector<ContainerId> movable;
    for (const auto& [id, rec] : cfg.containers()) {
      if (cfg.is_top_of_stack(id) && !cfg.destinations(id).empty()) movable.push_back(id);
    }
    const ContainerId id = movable[rng.uniform_index(movable.size())];
    const auto dests = cfg.destinations(id);
    cfg.apply_move(id, dests[rng.uniform_index(dests.size())]);
    cfg.check_invariants();
    CHECK(cfg.record(id).tabu.size() <= kDefaultTabuCapacity);
  }
}

TEST_CASE("layout hash ignores tabu memory") {
  auto a = yard(dims(1, 3, 1), {{1, T2, {0, 0, 0}}, {2, T3, {0, 2, 0}}});
  auto b = a;
  b.apply_move(1, {0, 1, 0});
  b.apply_move(1, {0, 0, 0});
  CHECK(a.same_layout(b));
  CHECK(a.layout_hash() == b.layout_hash());
  CHECK_FALSE(a == b);
  b.apply_move(2, {0, 1, 0});
  CHECK_FALSE(a.same_layout(b));
}

TEST_CASE("snapshot round trip") {
  const YardConfiguration empty(dims(3, 2, 2));
  CHECK(load_snapshot(save_snapshot(empty)) == empty);

  Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    auto d = dims(4, 4, 3);
    d.row_pitch = 4.1 + 0.01 * i;
    const auto cfg = random_yard(d, rng.uniform_index(48), rng);
    CHECK(load_snapshot(save_snapshot(cfg)) == cfg);
  }
}

TEST_CASE("snapshot format") {
  const auto cfg = yard(dims(2, 1, 2), {{4, T2, {1, 0, 0}}, {7, ContainerType::imdg(3), {1, 0, 1}}});
  CHECK(save_snapshot(cfg) ==
        "# hazyard v1\n"
        "dims 2 1 2\n"
        "pitch 4.5 6.5 2.6\n"
        "c 4 T2 1 0 0\n"
        "c 7 IMDG3 1 0 1\n");
  // Containers may be listed in any order; comments are skipped.
  const auto loaded = load_snapshot("# hazyard v1\ndims 2 1 2\npitch 4.5 6.5 2.6\n# note\nc 7 IMDG3 1 0 1\nc 4 T2 1 0 0\n");
  CHECK(loaded == cfg);
}

TEST_CASE("snapshot errors") {
  auto parse_line = [](const std::string& text) -> std::size_t {
    try {
      load_snapshot(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  CHECK(parse_line("hazyard v1\n") == 1);
  CHECK(parse_line("# hazyard v1\ndims 2 2\npitch 4.5 6.5 2.6\n") == 2);
  CHECK(parse_line("# hazyard v1\ndims 2 2 2\npitch 4.5 x 2.6\n") == 3);
  CHECK(parse_line("# hazyard v1\ndims 2 2 2\npitch 4.5 6.5 2.6\nc 1 T9 0 0 0\n") == 4);
  CHECK(parse_line("# hazyard v1\ndims 2 2 2\npitch 4.5 6.5 2.6\nc 1 T1 5 0 0\n") == 4);

  CHECK_THROWS_AS(load_snapshot("# hazyard v1\ndims 2 2 2\npitch 4.5 6.5 2.6\nc 1 T1 0 0 1\n"), InvariantError);
  CHECK_THROWS_AS(load_snapshot("# hazyard v1\ndims 2 2 2\npitch 4.5 6.5 2.6\nc 1 T1 0 0 0\nc 2 T1 0 0 0\n"),
                  InvariantError);
  CHECK_THROWS_WITH_AS(load_snapshot("# hazyard v1\ndims 2 2 2\npitch 4.5 6.5 2.6\nc 1 T1 0 0 0\nc 1 T2 1 0 0\n"),
                       doctest::Contains("line 5"), InvariantError);
}
