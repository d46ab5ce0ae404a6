#pragma once

#include <compare>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "fuzzynf/degree.hpp"

namespace fnf {

/// The two sorts of the fuzzy set-theory languages: set elements (U) and degrees (D).
enum class Sort : std::uint8_t { Set, Degree };

std::string_view sort_name(Sort s);  // "U" / "D"

struct SourcePos {
  int line = 1;
  int column = 1;
};

std::string to_string(SourcePos pos);

class SyntaxError : public std::runtime_error {
 public:
  enum class Code {
    Lexical,
    Parse,
    BadLiteral,
    UnboundVariable,
    SortClash,
    DuplicateLabel,
    MissingDesignation,
    UnknownDirective,
  };

  SyntaxError(Code code, SourcePos pos, const std::string& what);

  Code code() const { return code_; }
  SourcePos pos() const { return pos_; }

 private:
  Code code_;
  SourcePos pos_;
};

/// Raised by sort_check; carries the sort the position required and the sort it had.
class SortClash : public SyntaxError {
 public:
  SortClash(SourcePos pos, Sort expected, Sort found, const std::string& term);
  Sort expected() const { return expected_; }
  Sort found() const { return found_; }

 private:
  Sort expected_;
  Sort found_;
};

struct Var {
  std::string name;
  Sort sort = Sort::Set;

  friend bool operator==(const Var&, const Var&) = default;
  friend auto operator<=>(const Var&, const Var&) = default;
};

/// A term: a variable, a named constant (always set-sorted) or a degree literal.
struct Term {
  enum class Kind : std::uint8_t { Var, Const, Literal };

  Kind kind = Kind::Var;
  std::string name;
  Degree value;
  Sort sort = Sort::Set;
  SourcePos pos;

  static Term var(std::string name, Sort sort, SourcePos pos = {});
  static Term var(const Var& v, SourcePos pos = {}) { return var(v.name, v.sort, pos); }
  static Term constant(std::string name, SourcePos pos = {});
  static Term literal(Degree d, SourcePos pos = {});

  bool is_var() const { return kind == Kind::Var; }
  std::string to_string() const;

  // Positions are ignored: two terms are equal when they denote the same syntax.
  friend bool operator==(const Term& a, const Term& b) {
    return a.kind == b.kind && a.name == b.name && a.value == b.value && a.sort == b.sort;
  }
};

enum class NodeKind : std::uint8_t {
  CrispIn,  // in(a, b)
  MuEq,     // mu(a, b) = t
  MuLt,     // mu(a, b) < t
  DegLt,
  DegEq,
  SetEq,
  Not,
  And,
  Or,
  Implies,
  Iff,
  Forall,
  Exists,
};

bool is_atom(NodeKind k);
bool is_quantifier(NodeKind k);
bool is_binary(NodeKind k);

/// Immutable formula tree over the two-sorted language. Copies share structure.
class Formula {
 public:
  NodeKind kind() const { return node_->kind; }
  SourcePos pos() const { return node_->pos; }

  /// Atom arguments: CrispIn (elem, set); MuEq/MuLt (elem, set, degree); DegLt/DegEq/SetEq (lhs, rhs).
  const std::vector<Term>& terms() const { return node_->terms; }
  const Term& term(std::size_t i) const { return node_->terms.at(i); }

  /// Not has one child; binary connectives have two.
  const std::vector<Formula>& children() const { return node_->children; }
  const Formula& child(std::size_t i = 0) const { return node_->children.at(i); }
  const Formula& lhs() const { return child(0); }
  const Formula& rhs() const { return child(1); }

  const Var& bound() const { return node_->bound; }
  const Formula& body() const { return child(0); }

  static Formula crisp_in(Term elem, Term set, SourcePos pos = {});
  static Formula mu_eq(Term elem, Term set, Term deg, SourcePos pos = {});
  static Formula mu_lt(Term elem, Term set, Term deg, SourcePos pos = {});
  static Formula deg_lt(Term a, Term b, SourcePos pos = {});
  static Formula deg_eq(Term a, Term b, SourcePos pos = {});
  static Formula set_eq(Term a, Term b, SourcePos pos = {});
  static Formula negation(Formula f, SourcePos pos = {});
  static Formula conj(Formula a, Formula b, SourcePos pos = {});
  static Formula disj(Formula a, Formula b, SourcePos pos = {});
  static Formula implies(Formula a, Formula b, SourcePos pos = {});
  static Formula iff(Formula a, Formula b, SourcePos pos = {});
  static Formula forall(Var v, Formula body, SourcePos pos = {});
  static Formula exists(Var v, Formula body, SourcePos pos = {});

  static Formula atom(NodeKind k, std::vector<Term> terms, SourcePos pos = {});
  static Formula binary(NodeKind k, Formula a, Formula b, SourcePos pos = {});
  static Formula quantifier(NodeKind k, Var v, Formula body, SourcePos pos = {});

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  struct Node {
    NodeKind kind;
    std::vector<Term> terms;
    std::vector<Formula> children;
    Var bound;
    SourcePos pos;
  };

  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

/// Renders in the concrete grammar accepted by parse_formula.
std::string print(const Formula& f);

/// Free variables with their sorts. Constants are not variables.
std::set<Var> free_variables(const Formula& f);

/// Names of constants mentioned anywhere in f.
std::set<std::string> constants_of(const Formula& f);

/// Every identifier (variables, binders and constants) occurring in f.
std::set<std::string> all_names(const Formula& f);

/// Validates sorts at every term position and consistency of each variable's sort
/// with its binder (or with its other free occurrences). Returns f unchanged; idempotent.
Formula sort_check(const Formula& f);

/// Replaces free occurrences of variable `from` by `to`. The caller guarantees `to`
/// contains no variable that is bound at an occurrence of `from` (e.g. a fresh name).
Formula substitute(const Formula& f, const std::string& from, const Term& to);

/// Smallest "base", "base_1", "base_2", ... not in `used`.
std::string fresh_name(const std::string& base, const std::set<std::string>& used);

/// Position of every CrispIn atom; the L2 fragment has only mu.
std::vector<SourcePos> crisp_membership_atoms(const Formula& f);

bool mentions_mu(const Formula& f);

}  // namespace fnf
