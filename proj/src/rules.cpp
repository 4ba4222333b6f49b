#include "hazyard/rules.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "text.hpp"

namespace hazyard {

SeparationRule SeparationRule::metric(double meters) {
  if (!(meters > 0.0)) throw DomainError("metric separation must be > 0 m");
  return {RuleKind::metric, meters, 0.0};
}

SeparationRule SeparationRule::explosive(double net_weight_kg) {
  if (!(net_weight_kg > 0.0)) throw DomainError("explosive net weight must be > 0 kg");
  return {RuleKind::explosive, 0.0, net_weight_kg};
}

double explosive_separation(double net_weight_kg) {
  if (!(net_weight_kg > 0.0)) throw DomainError("explosive net weight must be > 0 kg");
  return 4.8 * std::cbrt(net_weight_kg);
}

RuleMatrix RuleMatrix::default_matrix() {
  RuleMatrix m;
  for (auto t : {T1, T2, T3, T4, T5}) m.declare(t);
  m.set_rule(T1, T2, SeparationRule::metric(20.0));
  m.set_rule(T1, T3, SeparationRule::metric(20.0));
  m.set_rule(T2, T3, SeparationRule::metric(6.0));
  m.set_rule(T4, T1, SeparationRule::von_neumann());
  m.set_rule(T4, T2, SeparationRule::von_neumann());
  m.set_rule(T4, T3, SeparationRule::von_neumann());
  return m;
}

void RuleMatrix::declare(ContainerType type) {
  if (declared_[type.index()]) return;
  declared_[type.index()] = true;
  types_.push_back(type);
}

void RuleMatrix::require(ContainerType type) const {
  if (!declared_[type.index()]) throw DomainError("type " + type.label() + " is not in the rule matrix");
}

void RuleMatrix::set_rule(ContainerType a, ContainerType b, SeparationRule rule) {
  require(a);
  require(b);
  rules_[a.index()][b.index()] = rule;
  rules_[b.index()][a.index()] = rule;
}

const SeparationRule& RuleMatrix::rule(ContainerType a, ContainerType b) const {
  require(a);
  require(b);
  return rules_[a.index()][b.index()];
}

double RuleMatrix::radius(ContainerType type) const {
  require(type);
  double r = 0.0;
  for (auto other : types_) {
    const auto resolved = resolved_distance(*this, type, other);
    if (const double* meters = std::get_if<double>(&resolved)) r = std::max(r, *meters);
  }
  return r;
}

bool RuleMatrix::has_von_neumann(ContainerType type) const {
  require(type);
  return std::any_of(types_.begin(), types_.end(), [&](ContainerType other) {
    return rules_[type.index()][other.index()].kind == RuleKind::von_neumann;
  });
}

bool RuleMatrix::is_neutral(ContainerType type) const {
  require(type);
  return std::all_of(types_.begin(), types_.end(), [&](ContainerType other) {
    return rules_[type.index()][other.index()].kind == RuleKind::none;
  });
}

ResolvedDistance resolved_distance(const RuleMatrix& m, ContainerType a, ContainerType b) {
  const auto& r = m.rule(a, b);
  switch (r.kind) {
    case RuleKind::none:
      return std::monostate{};
    case RuleKind::metric:
      return r.min_distance;
    case RuleKind::explosive:
      return explosive_separation(r.net_weight_kg);
    case RuleKind::von_neumann:
      return VonNeumannMarker{};
  }
  return std::monostate{};
}

RuleMatrix parse_rules(std::string_view input) {
  RuleMatrix m;
  const auto lines = text::split_lines(input);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const std::size_t line_no = n + 1;
    const auto trimmed = text::trim(lines[n]);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    const auto tok = text::split_ws(trimmed);
    auto type_at = [&](std::size_t i) {
      const auto t = ContainerType::parse(tok[i]);
      if (!t) throw ParseError(line_no, "unknown container type '" + std::string(tok[i]) + "'");
      return *t;
    };
    if (tok[0] == "type") {
      if (tok.size() != 2) throw ParseError(line_no, "expected 'type <label>'");
      m.declare(type_at(1));
      continue;
    }
    if (tok[0] != "rule") throw ParseError(line_no, "unknown record '" + std::string(tok[0]) + "'");
    if (tok.size() < 4) throw ParseError(line_no, "expected 'rule <a> <b> <kind> [value]'");
    const auto a = type_at(1);
    const auto b = type_at(2);
    if (!m.declared(a) || !m.declared(b)) throw ParseError(line_no, "rule references an undeclared type");
    const auto kind = tok[3];
    SeparationRule rule;
    try {
      if (kind == "metric" && tok.size() == 5) {
        rule = SeparationRule::metric(text::parse_double(tok[4], line_no));
      } else if (kind == "explosive" && tok.size() == 5) {
        rule = SeparationRule::explosive(text::parse_double(tok[4], line_no));
      } else if (kind == "vn" && tok.size() == 4) {
        rule = SeparationRule::von_neumann();
      } else if (kind == "none" && tok.size() == 4) {
        rule = SeparationRule::none();
      } else {
        throw ParseError(line_no, "malformed rule '" + std::string(trimmed) + "'");
      }
    } catch (const DomainError& e) {
      throw ParseError(line_no, e.what());
    }
    m.set_rule(a, b, rule);
  }
  return m;
}

std::string format_rules(const RuleMatrix& m) {
  std::ostringstream out;
  for (auto t : m.types()) out << "type " << t.label() << '\n';
  const auto& types = m.types();
  for (std::size_t i = 0; i < types.size(); ++i) {
    for (std::size_t j = i; j < types.size(); ++j) {
      const auto& r = m.rule(types[i], types[j]);
      if (r.kind == RuleKind::none) continue;
      out << "rule " << types[i].label() << ' ' << types[j].label() << ' ';
      switch (r.kind) {
        case RuleKind::metric:
          out << "metric " << text::format_double(r.min_distance);
          break;
        case RuleKind::explosive:
          out << "explosive " << text::format_double(r.net_weight_kg);
          break;
        case RuleKind::von_neumann:
          out << "vn";
          break;
        case RuleKind::none:
          break;
      }
      out << '\n';
    }
  }
  return out.str();
}

}  // namespace hazyard
