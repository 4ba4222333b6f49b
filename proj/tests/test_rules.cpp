#include "doctest.h"
#include "hazyard/error.hpp"
#include "hazyard/rules.hpp"

using namespace hazyard;

TEST_CASE("explosive separation") {
  CHECK(explosive_separation(1.0) == 4.8);
  CHECK(explosive_separation(1000.0) == 48.0);
  CHECK(explosive_separation(8000.0) == 96.0);
  CHECK_THROWS_AS(explosive_separation(0.0), DomainError);
  CHECK_THROWS_AS(explosive_separation(-5.0), DomainError);
}

TEST_CASE("rule constructors check their parameters") {
  CHECK_THROWS_AS(SeparationRule::metric(0.0), DomainError);
  CHECK_THROWS_AS(SeparationRule::explosive(-1.0), DomainError);
  CHECK(SeparationRule::metric(6.0).min_distance == 6.0);
}

TEST_CASE("default matrix") {
  const auto m = RuleMatrix::default_matrix();
  CHECK(std::get<double>(resolved_distance(m, T2, T1)) == 20.0);
  CHECK(std::get<double>(resolved_distance(m, T1, T3)) == 20.0);
  CHECK(std::get<double>(resolved_distance(m, T2, T3)) == 6.0);
  CHECK(std::holds_alternative<VonNeumannMarker>(resolved_distance(m, T4, T1)));
  CHECK(std::holds_alternative<VonNeumannMarker>(resolved_distance(m, T3, T4)));
  for (auto t : {T1, T2, T3, T4, T5}) {
    CHECK(std::holds_alternative<std::monostate>(resolved_distance(m, t, t)));
    CHECK(std::holds_alternative<std::monostate>(resolved_distance(m, T5, t)));
    for (auto u : {T1, T2, T3, T4, T5}) CHECK(m.rule(t, u) == m.rule(u, t));
  }
  CHECK(m.radius(T1) == 20.0);
  CHECK(m.radius(T3) == 20.0);
  CHECK(m.radius(T4) == 0.0);
  CHECK(m.has_von_neumann(T4));
  CHECK_FALSE(m.has_von_neumann(T5));
  CHECK(m.is_neutral(T5));
  CHECK_FALSE(m.is_neutral(T4));
  CHECK_THROWS_AS(m.rule(T1, ContainerType::imdg(1)), DomainError);
  CHECK_THROWS_AS(resolved_distance(m, ContainerType::imdg(2), T1), DomainError);
}

TEST_CASE("explosive rules resolve through the formula") {
  RuleMatrix m;
  m.declare(ContainerType::imdg(1));
  m.declare(T5);
  m.set_rule(ContainerType::imdg(1), T5, SeparationRule::explosive(1000.0));
  CHECK(std::get<double>(resolved_distance(m, T5, ContainerType::imdg(1))) == 48.0);
  CHECK(m.radius(T5) == 48.0);
  CHECK_THROWS_AS(m.set_rule(T1, T5, SeparationRule::none()), DomainError);
}

TEST_CASE("rules file") {
  const auto m = parse_rules(
      "# two classes\n"
      "type IMDG1\n"
      "type IMDG3\n"
      "type T5\n"
      "rule IMDG1 IMDG3 explosive 125\n"
      "rule IMDG3 T5 vn\n");
  CHECK(std::get<double>(resolved_distance(m, ContainerType::imdg(3), ContainerType::imdg(1))) == 24.0);
  CHECK(std::holds_alternative<VonNeumannMarker>(resolved_distance(m, T5, ContainerType::imdg(3))));
  CHECK(std::holds_alternative<std::monostate>(resolved_distance(m, T5, ContainerType::imdg(1))));
  CHECK(parse_rules(format_rules(m)) == m);
  CHECK(parse_rules(format_rules(RuleMatrix::default_matrix())) == RuleMatrix::default_matrix());

  auto error_line = [](const char* text) -> std::size_t {
    try {
      parse_rules(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  CHECK(error_line("type T1\nrule T1 T2 metric 5\n") == 2);
  CHECK(error_line("type T1\ntype T2\nrule T1 T2 metric -5\n") == 3);
  CHECK(error_line("type T1\ntype T2\nrule T1 T2 far\n") == 3);
  CHECK(error_line("type TX\n") == 1);
}
