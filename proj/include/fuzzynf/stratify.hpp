#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "fuzzynf/syntax.hpp"

namespace fnf {

/// type(a) = type(b) + delta. Eq constraints are stored with delta 0.
struct StratConstraint {
  enum class Kind : std::uint8_t { Diff, Eq };

  Kind kind = Kind::Diff;
  std::string a;
  std::string b;
  int delta = 0;
  SourcePos origin;
  std::string atom;  // printed source atom, for diagnostics

  static StratConstraint diff(std::string a, std::string b, int delta, SourcePos origin = {},
                              std::string atom = {});
  static StratConstraint eq(std::string a, std::string b, SourcePos origin = {}, std::string atom = {});

  std::string to_string() const;

  friend bool operator==(const StratConstraint& x, const StratConstraint& y) {
    return x.kind == y.kind && x.a == y.a && x.b == y.b && x.delta == y.delta;
  }
};

/// Integer types for set-sorted variables and constants; each connected
/// component is shifted so that its least type is 0.
struct StratTyping {
  std::map<std::string, int> assignment;

  bool satisfies(std::span<const StratConstraint> cs) const;
  friend bool operator==(const StratTyping&, const StratTyping&) = default;
};

/// One traversed constraint of an inconsistent cycle. `step` is the contribution
/// type(to) - type(from) the constraint forces along the direction of travel.
struct CycleStep {
  StratConstraint constraint;
  std::string from;
  std::string to;
  int step = 0;
};

/// A closed walk through the constraints whose forced type differences sum to `sum` != 0.
struct InconsistencyCertificate {
  std::vector<CycleStep> cycle;
  int sum = 0;

  std::string to_string() const;
};

/// Membership-like atoms in(x, z) and mu(x, z) = d yield Diff(x, z, -1); set
/// equalities yield Eq; degree atoms yield nothing. Bound variables are keyed by
/// name, with "name#k" for a later binder reusing a name already in use.
std::vector<StratConstraint> collect_constraints(const Formula& f);

/// Offset union-find over the constraints. `extra` lists variables that appear in
/// no constraint but should still receive a type.
std::variant<StratTyping, InconsistencyCertificate> solve_constraints(
    std::span<const StratConstraint> cs, std::span<const std::string> extra = {});

struct StratResult {
  bool stratified = false;
  std::vector<StratConstraint> constraints;
  std::optional<StratTyping> typing;
  std::optional<InconsistencyCertificate> certificate;
};

StratResult is_stratified(const Formula& f);

}  // namespace fnf
