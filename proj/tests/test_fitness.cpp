#include "doctest.h"
#include "hazyard/error.hpp"
#include "hazyard/fitness.hpp"
#include "hazyard/oracle.hpp"
#include "support.hpp"

using namespace hazyard;
using hazyard::testing::dims;
using hazyard::testing::random_yard;
using hazyard::testing::yard;

namespace {
const RuleMatrix kRules = RuleMatrix::default_matrix();
}

TEST_CASE("neighbourhood") {
  CHECK(neighbourhood(yard(dims(3, 3, 1), {{1, T1, {1, 1, 0}}}), kRules, 1).empty());
  CHECK(neighbourhood(yard(dims(1, 2, 1), {{1, T2, {0, 0, 0}}, {2, T5, {0, 1, 0}}}), kRules, 1) ==
        std::vector<ContainerId>{2});

  // 25 m along the slot axis with a 12.5 m pitch.
  auto far = dims(1, 3, 1);
  far.slot_pitch = 12.5;
  CHECK(neighbourhood(yard(far, {{1, T1, {0, 0, 0}}, {2, T5, {0, 2, 0}}}), kRules, 1).empty());

  // A type with only a Von Neumann rule sees its adjacent cells.
  const auto cfg = yard(dims(3, 3, 2), {{1, T4, {1, 1, 0}}, {2, T5, {1, 1, 1}}, {3, T5, {0, 1, 0}}, {4, T5, {0, 0, 0}}});
  CHECK(neighbourhood(cfg, kRules, 1) == std::vector<ContainerId>{2, 3});
  CHECK(neighbourhood(cfg, kRules, 2).empty());
  CHECK_THROWS_AS(neighbourhood(cfg, kRules, 99), UnknownContainerError);
}

TEST_CASE("fitness examples") {
  const auto pair12 = yard(dims(1, 2, 1), {{1, T1, {0, 0, 0}}, {2, T2, {0, 1, 0}}});
  CHECK(fitness(pair12, kRules, 1) == 1);
  CHECK(fitness(pair12, kRules, 2) == 1);
  CHECK(block_fitness(pair12, kRules) == BlockFitness{1, 2});

  const auto pair23 = yard(dims(1, 2, 1), {{1, T2, {0, 0, 0}}, {2, T3, {0, 1, 0}}});
  CHECK(fitness(pair23, kRules, 1) == 0);
  CHECK(fitness(pair23, kRules, 2) == 0);

  // Stacked 2.6 m apart: inside the 6 m rule.
  const auto stacked = yard(dims(1, 1, 2), {{1, T2, {0, 0, 0}}, {2, T3, {0, 0, 1}}});
  CHECK(fitness(stacked, kRules, 2) == 1);

  const auto food = yard(dims(2, 2, 2), {{1, T4, {0, 0, 0}}, {2, T2, {0, 0, 1}}, {3, T1, {1, 1, 0}}});
  CHECK(fitness(food, kRules, 1) == 1);
  CHECK(fitness(food, kRules, 3) == 1);  // the T2, not the diagonal T4

  CHECK(block_fitness(YardConfiguration(dims(2, 2, 2)), kRules) == BlockFitness{0, 0});
}

TEST_CASE("neutral containers always score zero") {
  Rng rng(9);
  for (int i = 0; i < 20; ++i) {
    const auto cfg = random_yard(dims(3, 3, 2), 14, rng);
    for (const auto& [id, rec] : cfg.containers()) {
      if (rec.type == T5) CHECK(fitness(cfg, kRules, id) == 0);
    }
  }
}

TEST_CASE("weighted fitness") {
  CHECK(FitnessEvaluator::weight(0, 7, {}) == 0.0);
  CHECK(FitnessEvaluator::weight(2, 4, {}) == 0.5);
  CHECK(FitnessEvaluator::weight(1, 1, {}) == 1.0);
  CHECK(FitnessEvaluator::weight(3, 0, {}) == 3.0);
  CHECK(FitnessEvaluator::weight(2, 4, {WeightingPolicy::Mode::unit}) == 2.0);

  // T4 with a T2 on top and two neutral side neighbours.
  const auto cfg = yard(dims(3, 1, 2), {{1, T5, {0, 0, 0}}, {2, T4, {1, 0, 0}}, {3, T5, {2, 0, 0}}, {4, T2, {1, 0, 1}}});
  CHECK(weighted_fitness(cfg, kRules, {}, 2) == doctest::Approx(1.0 / 3.0));
  CHECK(weighted_fitness(cfg, kRules, {}, 1) == 0.0);
  CHECK(WeightingPolicy::parse("unit")->mode == WeightingPolicy::Mode::unit);
  CHECK_FALSE(WeightingPolicy::parse("squared").has_value());
}

TEST_CASE("engine fitness equals the brute-force oracle") {
  Rng rng(1234);
  for (int i = 0; i < 200; ++i) {
    const auto cfg = random_yard(dims(4, 4, 2), 1 + rng.uniform_index(32), rng);
    const FitnessEvaluator eval(cfg, kRules);
    long sum = 0;
    for (const auto& [id, rec] : cfg.containers()) {
      const int f = eval.fitness(id);
      REQUIRE(f == oracle::brute_fitness(cfg, kRules, id));
      sum += f;

      const double w = eval.weighted_fitness(id, {});
      CHECK(w >= 0.0);
      CHECK(w <= f);
      CHECK((w == 0.0) == (f == 0));
    }
    CHECK(sum % 2 == 0);
    CHECK(eval.block_fitness() == oracle::brute_block_fitness(cfg, kRules));
  }
}

TEST_CASE("hypothetical fitness") {
  const auto cfg = yard(dims(1, 8, 1), {{1, T1, {0, 0, 0}}, {2, T2, {0, 1, 0}}});
  CHECK(hypothetical_fitness(cfg, kRules, 2, {0, 3, 0}) == 1);  // 19.5 m: still too close
  CHECK(hypothetical_fitness(cfg, kRules, 2, {0, 4, 0}) == 0);  // 26 m
  CHECK(hypothetical_fitness(cfg, kRules, 2, {0, 7, 0}) == 0);
  CHECK(hypothetical_fitness(cfg, kRules, 1, {0, 2, 0}) == 1);
  CHECK(hypothetical_fitness(cfg, kRules, 1, {0, 0, 0}) == 1);

  CHECK_THROWS_AS(hypothetical_fitness(cfg, kRules, 1, {0, 1, 0}), MoveError);
  const auto single = yard(dims(1, 1, 2), {{1, T1, {0, 0, 0}}});
  CHECK_THROWS_AS(hypothetical_fitness(single, kRules, 1, {0, 0, 1}), MoveError);
}

TEST_CASE("hypothetical fitness matches the oracle after the move") {
  Rng rng(77);
  for (int i = 0; i < 100; ++i) {
    const auto cfg = random_yard(dims(4, 4, 2), 20, rng);
    const FitnessEvaluator eval(cfg, kRules);
    for (const auto& [id, rec] : cfg.containers()) {
      CHECK(hypothetical_fitness(cfg, kRules, id, *rec.position) == eval.fitness(id));
      if (!cfg.is_top_of_stack(id)) continue;
      for (const auto& to : cfg.destinations(id)) {
        auto moved = cfg;
        moved.apply_move(id, to);
        REQUIRE(eval.fitness_at(id, to) == oracle::brute_fitness(moved, kRules, id));
      }
    }
  }
}

TEST_CASE("incremental index follows moves") {
  Rng rng(31);
  auto cfg = random_yard(dims(5, 4, 3), 40, rng);
  FitnessEvaluator eval(cfg, kRules);
  for (int i = 0; i < 300; ++i) {
    std::vector<ContainerId> movable;
    for (const auto& [id, rec] : cfg.containers()) {
      if (cfg.is_top_of_stack(id)) movable.push_back(id);
    }
    const ContainerId id = movable[rng.uniform_index(movable.size())];
    const auto dests = cfg.destinations(id);
    const auto to = dests[rng.uniform_index(dests.size())];
    cfg.apply_move(id, to);
    eval.move(id, to);
    if (i % 25 == 0) {
      const FitnessEvaluator fresh(cfg, kRules);
      for (ContainerId c : eval.ids()) {
        REQUIRE(eval.fitness(c) == oracle::brute_fitness(cfg, kRules, c));
        CHECK(eval.neighbourhood(c) == fresh.neighbourhood(c));
      }
    }
  }
}

TEST_CASE("custom matrices with explosives and IMDG labels") {
  RuleMatrix m;
  const auto explosive = ContainerType::imdg(1);
  const auto gas = ContainerType::imdg(2);
  m.declare(explosive);
  m.declare(gas);
  m.declare(T5);
  m.set_rule(explosive, gas, SeparationRule::explosive(27.0));  // 14.4 m
  m.set_rule(gas, T5, SeparationRule::von_neumann());
  Rng rng(4);
  for (int i = 0; i < 100; ++i) {
    YardConfiguration cfg(dims(4, 4, 2));
    for (ContainerId id = 0; id < 20; ++id) {
      const auto cells = cfg.placeable_cells();
      const ContainerType types[] = {explosive, gas, T5};
      cfg.place(id, types[rng.uniform_index(3)], cells[rng.uniform_index(cells.size())]);
    }
    const FitnessEvaluator eval(cfg, m);
    for (ContainerId id = 0; id < 20; ++id) REQUIRE(eval.fitness(id) == oracle::brute_fitness(cfg, m, id));
  }
}
