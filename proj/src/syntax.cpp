#include "fuzzynf/syntax.hpp"

#include <map>
#include <optional>

namespace fnf {

std::string_view sort_name(Sort s) { return s == Sort::Set ? "U" : "D"; }

std::string to_string(SourcePos pos) {
  return std::to_string(pos.line) + ":" + std::to_string(pos.column);
}

SyntaxError::SyntaxError(Code code, SourcePos pos, const std::string& what)
    : std::runtime_error(to_string(pos) + ": " + what), code_(code), pos_(pos) {}

SortClash::SortClash(SourcePos pos, Sort expected, Sort found, const std::string& term)
    : SyntaxError(Code::SortClash, pos,
                  "sort clash at '" + term + "': expected " + std::string(sort_name(expected)) +
                      ", found " + std::string(sort_name(found))),
      expected_(expected),
      found_(found) {}

Term Term::var(std::string name, Sort sort, SourcePos pos) {
  Term t;
  t.kind = Kind::Var;
  t.name = std::move(name);
  t.sort = sort;
  t.pos = pos;
  return t;
}

Term Term::constant(std::string name, SourcePos pos) {
  Term t;
  t.kind = Kind::Const;
  t.name = std::move(name);
  t.sort = Sort::Set;
  t.pos = pos;
  return t;
}

Term Term::literal(Degree d, SourcePos pos) {
  Term t;
  t.kind = Kind::Literal;
  t.value = d;
  t.sort = Sort::Degree;
  t.pos = pos;
  return t;
}

std::string Term::to_string() const { return kind == Kind::Literal ? value.to_string() : name; }

bool is_atom(NodeKind k) { return k <= NodeKind::SetEq; }
bool is_quantifier(NodeKind k) { return k == NodeKind::Forall || k == NodeKind::Exists; }
bool is_binary(NodeKind k) { return k >= NodeKind::And && k <= NodeKind::Iff; }

Formula Formula::atom(NodeKind k, std::vector<Term> terms, SourcePos pos) {
  return Formula(std::make_shared<const Node>(Node{k, std::move(terms), {}, {}, pos}));
}

Formula Formula::binary(NodeKind k, Formula a, Formula b, SourcePos pos) {
  return Formula(std::make_shared<const Node>(Node{k, {}, {std::move(a), std::move(b)}, {}, pos}));
}

Formula Formula::quantifier(NodeKind k, Var v, Formula body, SourcePos pos) {
  return Formula(std::make_shared<const Node>(Node{k, {}, {std::move(body)}, std::move(v), pos}));
}

Formula Formula::crisp_in(Term elem, Term set, SourcePos pos) {
  return atom(NodeKind::CrispIn, {std::move(elem), std::move(set)}, pos);
}
Formula Formula::mu_eq(Term elem, Term set, Term deg, SourcePos pos) {
  return atom(NodeKind::MuEq, {std::move(elem), std::move(set), std::move(deg)}, pos);
}
Formula Formula::mu_lt(Term elem, Term set, Term deg, SourcePos pos) {
  return atom(NodeKind::MuLt, {std::move(elem), std::move(set), std::move(deg)}, pos);
}
Formula Formula::deg_lt(Term a, Term b, SourcePos pos) {
  return atom(NodeKind::DegLt, {std::move(a), std::move(b)}, pos);
}
Formula Formula::deg_eq(Term a, Term b, SourcePos pos) {
  return atom(NodeKind::DegEq, {std::move(a), std::move(b)}, pos);
}
Formula Formula::set_eq(Term a, Term b, SourcePos pos) {
  return atom(NodeKind::SetEq, {std::move(a), std::move(b)}, pos);
}
Formula Formula::negation(Formula f, SourcePos pos) {
  return Formula(std::make_shared<const Node>(Node{NodeKind::Not, {}, {std::move(f)}, {}, pos}));
}
Formula Formula::conj(Formula a, Formula b, SourcePos pos) {
  return binary(NodeKind::And, std::move(a), std::move(b), pos);
}
Formula Formula::disj(Formula a, Formula b, SourcePos pos) {
  return binary(NodeKind::Or, std::move(a), std::move(b), pos);
}
Formula Formula::implies(Formula a, Formula b, SourcePos pos) {
  return binary(NodeKind::Implies, std::move(a), std::move(b), pos);
}
Formula Formula::iff(Formula a, Formula b, SourcePos pos) {
  return binary(NodeKind::Iff, std::move(a), std::move(b), pos);
}
Formula Formula::forall(Var v, Formula body, SourcePos pos) {
  return quantifier(NodeKind::Forall, std::move(v), std::move(body), pos);
}
Formula Formula::exists(Var v, Formula body, SourcePos pos) {
  return quantifier(NodeKind::Exists, std::move(v), std::move(body), pos);
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  return x.kind == y.kind && x.terms == y.terms && x.bound == y.bound && x.children == y.children;
}

namespace {

// Binding strength used by the printer; mirrors the grammar's nesting.
int level(NodeKind k) {
  switch (k) {
    case NodeKind::Forall:
    case NodeKind::Exists:
      return 0;
    case NodeKind::Iff:
      return 1;
    case NodeKind::Implies:
      return 2;
    case NodeKind::Or:
      return 3;
    case NodeKind::And:
      return 4;
    case NodeKind::Not:
      return 5;
    default:
      return 6;
  }
}

std::string_view binary_symbol(NodeKind k) {
  switch (k) {
    case NodeKind::And:
      return " & ";
    case NodeKind::Or:
      return " | ";
    case NodeKind::Implies:
      return " -> ";
    default:
      return " <-> ";
  }
}

void print_into(const Formula& f, int min_level, std::string& out) {
  int lv = level(f.kind());
  bool parens = lv < min_level;
  if (parens) out += '(';
  const auto& t = f.terms();
  switch (f.kind()) {
    case NodeKind::CrispIn:
      out += "in(" + t[0].to_string() + ", " + t[1].to_string() + ")";
      break;
    case NodeKind::MuEq:
    case NodeKind::MuLt:
      out += "mu(" + t[0].to_string() + ", " + t[1].to_string() + ")";
      out += f.kind() == NodeKind::MuEq ? " = " : " < ";
      out += t[2].to_string();
      break;
    case NodeKind::DegLt:
      out += t[0].to_string() + " < " + t[1].to_string();
      break;
    case NodeKind::DegEq:
    case NodeKind::SetEq:
      out += t[0].to_string() + " = " + t[1].to_string();
      break;
    case NodeKind::Not:
      out += '~';
      print_into(f.child(), 5, out);
      break;
    case NodeKind::Implies:
      print_into(f.lhs(), lv + 1, out);
      out += binary_symbol(f.kind());
      print_into(f.rhs(), lv, out);
      break;
    case NodeKind::And:
    case NodeKind::Or:
    case NodeKind::Iff:
      print_into(f.lhs(), lv, out);
      out += binary_symbol(f.kind());
      print_into(f.rhs(), lv + 1, out);
      break;
    case NodeKind::Forall:
    case NodeKind::Exists:
      out += f.kind() == NodeKind::Forall ? "forall " : "exists ";
      out += f.bound().name;
      out += ':';
      out += sort_name(f.bound().sort);
      out += ". ";
      print_into(f.body(), 0, out);
      break;
  }
  if (parens) out += ')';
}

template <class Fn>
void walk_terms(const Formula& f, std::vector<Var>& scope, Fn&& fn) {
  if (is_atom(f.kind())) {
    for (const auto& t : f.terms()) fn(t, scope);
    return;
  }
  if (is_quantifier(f.kind())) {
    scope.push_back(f.bound());
    walk_terms(f.body(), scope, fn);
    scope.pop_back();
    return;
  }
  for (const auto& c : f.children()) walk_terms(c, scope, fn);
}

const Var* lookup(const std::vector<Var>& scope, const std::string& name) {
  for (auto it = scope.rbegin(); it != scope.rend(); ++it) {
    if (it->name == name) return &*it;
  }
  return nullptr;
}

}  // namespace

std::string print(const Formula& f) {
  std::string out;
  print_into(f, 0, out);
  return out;
}

std::set<Var> free_variables(const Formula& f) {
  std::set<Var> out;
  std::vector<Var> scope;
  walk_terms(f, scope, [&](const Term& t, const std::vector<Var>& sc) {
    if (t.is_var() && !lookup(sc, t.name)) out.insert(Var{t.name, t.sort});
  });
  return out;
}

std::set<std::string> constants_of(const Formula& f) {
  std::set<std::string> out;
  std::vector<Var> scope;
  walk_terms(f, scope, [&](const Term& t, const std::vector<Var>&) {
    if (t.kind == Term::Kind::Const) out.insert(t.name);
  });
  return out;
}

std::set<std::string> all_names(const Formula& f) {
  std::set<std::string> out;
  auto rec = [&](auto&& self, const Formula& g) -> void {
    if (is_atom(g.kind())) {
      for (const auto& t : g.terms()) {
        if (t.kind != Term::Kind::Literal) out.insert(t.name);
      }
      return;
    }
    if (is_quantifier(g.kind())) out.insert(g.bound().name);
    for (const auto& c : g.children()) self(self, c);
  };
  rec(rec, f);
  return out;
}

Formula sort_check(const Formula& f) {
  std::map<std::string, Sort> free_sorts;
  std::vector<Var> scope;

  auto check_term = [&](const Term& t, Sort expected) {
    Sort found = t.sort;
    switch (t.kind) {
      case Term::Kind::Literal:
        found = Sort::Degree;
        break;
      case Term::Kind::Const:
        found = Sort::Set;
        break;
      case Term::Kind::Var:
        if (const Var* b = lookup(scope, t.name)) {
          if (b->sort != t.sort) throw SortClash(t.pos, b->sort, t.sort, t.name);
        } else {
          auto [it, fresh] = free_sorts.emplace(t.name, t.sort);
          if (!fresh && it->second != t.sort) throw SortClash(t.pos, it->second, t.sort, t.name);
        }
        break;
    }
    if (found != expected) throw SortClash(t.pos, expected, found, t.to_string());
  };

  auto rec = [&](auto&& self, const Formula& g) -> void {
    const auto& t = g.terms();
    switch (g.kind()) {
      case NodeKind::CrispIn:
      case NodeKind::SetEq:
        check_term(t.at(0), Sort::Set);
        check_term(t.at(1), Sort::Set);
        return;
      case NodeKind::MuEq:
      case NodeKind::MuLt:
        check_term(t.at(0), Sort::Set);
        check_term(t.at(1), Sort::Set);
        check_term(t.at(2), Sort::Degree);
        return;
      case NodeKind::DegLt:
      case NodeKind::DegEq:
        check_term(t.at(0), Sort::Degree);
        check_term(t.at(1), Sort::Degree);
        return;
      case NodeKind::Forall:
      case NodeKind::Exists:
        scope.push_back(g.bound());
        self(self, g.body());
        scope.pop_back();
        return;
      default:
        for (const auto& c : g.children()) self(self, c);
    }
  };
  rec(rec, f);
  return f;
}

Formula substitute(const Formula& f, const std::string& from, const Term& to) {
  if (is_atom(f.kind())) {
    bool touched = false;
    std::vector<Term> terms = f.terms();
    for (auto& t : terms) {
      if (t.is_var() && t.name == from) {
        SourcePos pos = t.pos;
        t = to;
        t.pos = pos;
        touched = true;
      }
    }
    return touched ? Formula::atom(f.kind(), std::move(terms), f.pos()) : f;
  }
  if (is_quantifier(f.kind())) {
    if (f.bound().name == from) return f;
    return Formula::quantifier(f.kind(), f.bound(), substitute(f.body(), from, to), f.pos());
  }
  if (f.kind() == NodeKind::Not) return Formula::negation(substitute(f.child(), from, to), f.pos());
  return Formula::binary(f.kind(), substitute(f.lhs(), from, to), substitute(f.rhs(), from, to),
                         f.pos());
}

std::string fresh_name(const std::string& base, const std::set<std::string>& used) {
  if (!used.count(base)) return base;
  for (int i = 1;; ++i) {
    std::string candidate = base + "_" + std::to_string(i);
    if (!used.count(candidate)) return candidate;
  }
}

std::vector<SourcePos> crisp_membership_atoms(const Formula& f) {
  std::vector<SourcePos> out;
  auto rec = [&](auto&& self, const Formula& g) -> void {
    if (g.kind() == NodeKind::CrispIn) out.push_back(g.pos());
    for (const auto& c : g.children()) self(self, c);
  };
  rec(rec, f);
  return out;
}

bool mentions_mu(const Formula& f) {
  if (f.kind() == NodeKind::MuEq || f.kind() == NodeKind::MuLt) return true;
  for (const auto& c : f.children()) {
    if (mentions_mu(c)) return true;
  }
  return false;
}

}  // namespace fnf
