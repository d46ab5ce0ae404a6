#include "fuzzynf/eval.hpp"

namespace fnf {

void Env::bind(const Var& v, Value value) {
  bool is_set = std::holds_alternative<DomainElement>(value);
  if (is_set != (v.sort == Sort::Set)) {
    throw std::invalid_argument("cannot bind " + v.name + ":" + std::string(sort_name(v.sort)) + " to a value of the other sort");
  }
  bindings_.emplace_back(v, std::move(value));
}

const Value* Env::find(std::string_view name) const {
  for (auto it = bindings_.rbegin(); it != bindings_.rend(); ++it) {
    if (it->first.name == name) return &it->second;
  }
  return nullptr;
}

namespace {

struct Binding {
  Env& env;
  Binding(Env& e, const Var& v, Value val) : env(e) { env.bind(v, std::move(val)); }
  ~Binding() { env.pop(); }
  Binding(const Binding&) = delete;
  Binding& operator=(const Binding&) = delete;
};

}  // namespace

DomainElement Evaluator::element_of(const Term& t, const Env& env) const {
  if (t.kind == Term::Kind::Const) {
    auto e = st_.constant(t.name);
    if (!e) throw EvalError("unknown constant '" + t.name + "'");
    return *e;
  }
  const Value* v = env.find(t.name);
  if (!v) throw EvalError("unbound variable '" + t.name + "'");
  if (auto* e = std::get_if<DomainElement>(v)) return *e;
  throw EvalError("variable '" + t.name + "' is bound to a degree");
}

Degree Evaluator::degree_of(const Term& t, const Env& env) const {
  if (t.kind == Term::Kind::Literal) return t.value;
  const Value* v = env.find(t.name);
  if (!v) throw EvalError("unbound variable '" + t.name + "'");
  if (auto* d = std::get_if<Degree>(v)) return *d;
  throw EvalError("variable '" + t.name + "' is bound to a set element");
}

std::optional<Degree> Evaluator::mu_value(DomainElement elem, DomainElement set) {
  if (set.is_named()) return lookup(st_.position(elem), set.index);
  if (opts_.mu_on_crisp == MuOnCrisp::Reject) {
    ++stats_.mu_on_crisp_rejected;
    return std::nullopt;
  }
  ++stats_.mu_on_crisp_characteristic;
  bool in = elem.is_crisp() && st_.universe().member(elem.index, set.index);
  return in ? Degree::one() : Degree::zero();
}

bool Evaluator::eval(const Formula& f, Env& env) {
  const auto& t = f.terms();
  switch (f.kind()) {
    case NodeKind::CrispIn: {
      auto a = element_of(t[0], env), b = element_of(t[1], env);
      if (!a.is_crisp() || !b.is_crisp()) return false;
      return st_.universe().member(a.index, b.index);
    }
    case NodeKind::MuEq:
    case NodeKind::MuLt: {
      auto d = mu_value(element_of(t[0], env), element_of(t[1], env));
      if (!d) return false;
      Degree rhs = degree_of(t[2], env);
      return f.kind() == NodeKind::MuEq ? *d == rhs : *d < rhs;
    }
    case NodeKind::DegLt:
      return degree_of(t[0], env) < degree_of(t[1], env);
    case NodeKind::DegEq:
      return degree_of(t[0], env) == degree_of(t[1], env);
    case NodeKind::SetEq:
      return element_of(t[0], env) == element_of(t[1], env);
    case NodeKind::Not:
      return !eval(f.child(), env);
    case NodeKind::And:
      return eval(f.lhs(), env) && eval(f.rhs(), env);
    case NodeKind::Or:
      return eval(f.lhs(), env) || eval(f.rhs(), env);
    case NodeKind::Implies:
      return !eval(f.lhs(), env) || eval(f.rhs(), env);
    case NodeKind::Iff:
      return eval(f.lhs(), env) == eval(f.rhs(), env);
    case NodeKind::Forall:
    case NodeKind::Exists: {
      bool want = f.kind() == NodeKind::Exists;
      const Var& v = f.bound();
      if (v.sort == Sort::Set) {
        for (std::size_t pos = 0; pos < st_.domain_size(); ++pos) {
          Binding b(env, v, st_.element(pos));
          if (eval(f.body(), env) == want) return want;
        }
      } else {
        for (const auto& d : st_.grid().values()) {
          Binding b(env, v, d);
          if (eval(f.body(), env) == want) return want;
        }
      }
      return !want;
    }
  }
  return false;
}

bool eval(const Formula& f, const FuzzyStructure& st, const Env& env, EvalOptions opts, EvalStats* stats) {
  Evaluator ev(st, opts);
  Env local = env;
  bool r = ev.eval(f, local);
  if (stats) {
    stats->mu_on_crisp_rejected += ev.stats().mu_on_crisp_rejected;
    stats->mu_on_crisp_characteristic += ev.stats().mu_on_crisp_characteristic;
  }
  return r;
}

Degree max_satisfying_degree(Evaluator& ev, const Formula& phi, const Var& x, const Var& v, DomainElement elem,
                             const DegreeGrid& grid) {
  Env env;
  env.bind(x, elem);
  const auto& values = grid.values();
  for (auto it = values.rbegin(); it != values.rend(); ++it) {
    env.bind(v, *it);
    bool ok = ev.eval(phi, env);
    env.pop();
    if (ok) return *it;
  }
  return Degree::zero();
}

}  // namespace fnf
