#pragma once

#include <cstdint>
#include <stdexcept>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "fuzzynf/model.hpp"
#include "fuzzynf/syntax.hpp"

namespace fnf {

using Value = std::variant<DomainElement, Degree>;

/// Variable bindings for evaluation; later bindings shadow earlier ones.
class Env {
 public:
  /// Throws std::invalid_argument when the value's sort differs from the variable's.
  void bind(const Var& v, Value value);
  void pop() { bindings_.pop_back(); }
  const Value* find(std::string_view name) const;
  std::size_t size() const { return bindings_.size(); }
  const std::vector<std::pair<Var, Value>>& bindings() const { return bindings_; }

 private:
  std::vector<std::pair<Var, Value>> bindings_;
};

struct EvalOptions {
  MuOnCrisp mu_on_crisp = MuOnCrisp::Reject;
};

struct EvalStats {
  std::uint64_t mu_on_crisp_rejected = 0;
  std::uint64_t mu_on_crisp_characteristic = 0;
};

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Environment-based evaluator: set quantifiers range over V_n ∪ S and degree
/// quantifiers over the grid. Subclasses may intercept table lookups.
class Evaluator {
 public:
  explicit Evaluator(const FuzzyStructure& st, EvalOptions opts = {}) : st_(st), opts_(opts) {}
  virtual ~Evaluator() = default;

  bool eval(const Formula& f, Env& env);

  const EvalStats& stats() const { return stats_; }
  EvalOptions options() const { return opts_; }
  void set_options(EvalOptions opts) { opts_ = opts; }

 protected:
  virtual Degree lookup(std::size_t elem_pos, std::size_t set_index) { return st_.degree(elem_pos, set_index); }

  const FuzzyStructure& st_;

 private:
  DomainElement element_of(const Term& t, const Env& env) const;
  Degree degree_of(const Term& t, const Env& env) const;
  std::optional<Degree> mu_value(DomainElement elem, DomainElement set);

  EvalOptions opts_;
  EvalStats stats_;
};

/// Classical truth value of f under env; free variables of f must be bound.
bool eval(const Formula& f, const FuzzyStructure& st, const Env& env, EvalOptions opts = {},
          EvalStats* stats = nullptr);

/// Largest grid degree d with phi(elem, d) true, or 0 when there is none.
Degree max_satisfying_degree(Evaluator& ev, const Formula& phi, const Var& x, const Var& v,
                             DomainElement elem, const DegreeGrid& grid);

}  // namespace fnf
