#pragma once
// Pairwise separation rules between container types.

#include <array>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hazyard/yard.hpp"

namespace hazyard {

enum class RuleKind { none, metric, von_neumann, explosive };

struct SeparationRule {
  RuleKind kind = RuleKind::none;
  double min_distance = 0.0;   // meters, metric only
  double net_weight_kg = 0.0;  // explosive only

  static SeparationRule none() { return {}; }
  static SeparationRule metric(double meters);
  static SeparationRule von_neumann() { return {RuleKind::von_neumann, 0.0, 0.0}; }
  static SeparationRule explosive(double net_weight_kg);

  friend bool operator==(const SeparationRule&, const SeparationRule&) = default;
};

// Quantity-distance for explosives: 4.8 * Q^(1/3) meters for a net explosive
// weight of Q kilograms. Throws DomainError for Q <= 0.
double explosive_separation(double net_weight_kg);

struct VonNeumannMarker {
  friend bool operator==(VonNeumannMarker, VonNeumannMarker) = default;
};

// monostate: no constraint; double: minimum distance in meters.
using ResolvedDistance = std::variant<std::monostate, double, VonNeumannMarker>;

class RuleMatrix {
 public:
  RuleMatrix() = default;

  // The simplified five-class table used by the experiments:
  //        T1   T2   T3   T4   T5
  //   T1   -    20m  20m  VN   -
  //   T2   20m  -    6m   VN   -
  //   T3   20m  6m   -    VN   -
  //   T4   VN   VN   VN   -    -
  static RuleMatrix default_matrix();

  void declare(ContainerType type);
  bool declared(ContainerType type) const { return declared_[type.index()]; }
  const std::vector<ContainerType>& types() const { return types_; }

  // Sets rule(a, b) and rule(b, a). Both types must be declared.
  void set_rule(ContainerType a, ContainerType b, SeparationRule rule);

  // Throws DomainError for undeclared types.
  const SeparationRule& rule(ContainerType a, ContainerType b) const;

  // Largest metric (or explosive) distance involving the type; 0 if none.
  double radius(ContainerType type) const;
  bool has_von_neumann(ContainerType type) const;
  // No rule of any kind involves the type.
  bool is_neutral(ContainerType type) const;

  friend bool operator==(const RuleMatrix&, const RuleMatrix&) = default;

 private:
  void require(ContainerType type) const;

  std::vector<ContainerType> types_;
  std::array<bool, ContainerType::kCount> declared_{};
  std::array<std::array<SeparationRule, ContainerType::kCount>, ContainerType::kCount> rules_{};
};

ResolvedDistance resolved_distance(const RuleMatrix& m, ContainerType a, ContainerType b);

// Rules file: 'type <label>' declarations, then
//   rule <a> <b> metric <meters> | vn | explosive <kg> | none
// Undeclared pairs have no constraint. '#' starts a comment line.
RuleMatrix parse_rules(std::string_view text);
std::string format_rules(const RuleMatrix& m);

}  // namespace hazyard
