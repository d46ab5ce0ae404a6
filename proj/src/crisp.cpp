#include "fuzzynf/crisp.hpp"

#include <sstream>

#include "fuzzynf/eval.hpp"

namespace fnf {

using nlohmann::ordered_json;

std::vector<CrispCandidate> crisp_universe(const FuzzyStructure& st) {
  std::vector<CrispCandidate> out;
  for (std::size_t s = 0; s < st.set_count(); ++s) {
    CrispCandidate c{s, st.set(s).name};
    for (std::size_t p = 0; p < st.domain_size(); ++p) {
      Degree d = st.degree(p, s);
      if (!d.is_zero() && !d.is_one()) {
        c.crisp = false;
        c.witness_element = st.element_name(p);
        c.witness_degree = d;
        break;
      }
    }
    out.push_back(c);
  }
  return out;
}

std::optional<std::size_t> CrispStructure::class_of(std::size_t set) const {
  if (set >= class_of_.size()) return std::nullopt;
  return class_of_[set];
}

std::string CrispStructure::class_name(const FuzzyStructure& st, std::size_t cls) const {
  return "[" + st.set(classes_.at(cls).representative).name + "]";
}

std::string CrispStructure::element_name(const FuzzyStructure& st, std::size_t pos) const {
  if (pos < crisp_count_) return st.element_name(pos);
  return class_name(st, pos - crisp_count_);
}

ordered_json CrispStructure::to_json(const FuzzyStructure& st) const {
  ordered_json j;
  ordered_json cs = ordered_json::array();
  for (std::size_t c = 0; c < classes_.size(); ++c) {
    ordered_json cj;
    cj["id"] = c;
    cj["name"] = class_name(st, c);
    cj["representative"] = st.set(classes_[c].representative).name;
    ordered_json members = ordered_json::array();
    for (auto m : classes_[c].members) members.push_back(st.set(m).name);
    cj["members"] = members;
    ordered_json elems = ordered_json::array();
    for (std::size_t p = 0; p < domain_size(); ++p) {
      if (in(p, c)) elems.push_back(element_name(st, p));
    }
    cj["elements"] = elems;
    cs.push_back(cj);
  }
  j["crisp_elements"] = crisp_count_;
  j["classes"] = cs;
  j["universal_class"] = universal_ ? ordered_json(*universal_) : ordered_json(nullptr);
  ordered_json ds = ordered_json::array();
  for (const auto& d : divergences_) {
    ds.push_back({{"element", st.set(d.element).name}, {"set", st.set(d.set).name}, {"member", d.member}});
  }
  j["divergences"] = ds;
  return j;
}

CrispStructure quotient(const FuzzyStructure& st, const std::vector<CrispCandidate>& cands) {
  CrispStructure ns;
  ns.crisp_count_ = st.crisp_count();
  ns.class_of_.assign(st.set_count(), std::nullopt);
  auto n = static_cast<std::ptrdiff_t>(st.crisp_count());
  for (const auto& c : cands) {
    if (!c.crisp) continue;
    const auto& t = st.set(c.set).table;
    bool placed = false;
    for (std::size_t k = 0; k < ns.classes_.size() && !placed; ++k) {
      const auto& r = st.set(ns.classes_[k].representative).table;
      if (std::equal(t.begin(), t.begin() + n, r.begin())) {
        ns.classes_[k].members.push_back(c.set);
        ns.class_of_[c.set] = k;
        placed = true;
      }
    }
    if (!placed) {
      ns.class_of_[c.set] = ns.classes_.size();
      ns.classes_.push_back(EquivClass{c.set, {c.set}});
    }
  }

  std::size_t nc = ns.classes_.size();
  ns.members_.assign(nc, std::vector<bool>(ns.domain_size(), false));
  for (std::size_t c = 0; c < nc; ++c) {
    std::size_t rep = ns.classes_[c].representative;
    for (std::size_t p = 0; p < ns.crisp_count_; ++p) ns.members_[c][p] = st.degree(p, rep).is_one();
    for (std::size_t e = 0; e < nc; ++e) {
      std::size_t epos = st.crisp_count() + ns.classes_[e].representative;
      ns.members_[c][ns.crisp_count_ + e] = st.degree(epos, rep).is_one();
    }
  }

  // Membership between classes read through every pair of members, not just the representatives.
  for (std::size_t c = 0; c < nc; ++c) {
    for (std::size_t e = 0; e < nc; ++e) {
      bool expected = ns.members_[c][ns.crisp_count_ + e];
      for (auto ms : ns.classes_[c].members) {
        for (auto me : ns.classes_[e].members) {
          bool got = st.degree(st.crisp_count() + me, ms).is_one();
          if (got != expected) ns.divergences_.push_back({me, ms, got});
        }
      }
    }
  }

  for (std::size_t c = 0; c < nc && !ns.universal_; ++c) {
    bool all = true;
    for (std::size_t p = 0; p < ns.domain_size() && all; ++p) all = ns.members_[c][p];
    if (all) ns.universal_ = c;
  }
  return ns;
}

namespace {

Formula crispify(const Formula& f) {
  switch (f.kind()) {
    case NodeKind::CrispIn:
      return Formula::mu_eq(f.term(0), f.term(1), Term::literal(Degree::one()), f.pos());
    case NodeKind::SetEq:
      return f;
    case NodeKind::MuEq:
    case NodeKind::MuLt:
      throw TranslationError("classical formula already mentions mu at " + to_string(f.pos()));
    case NodeKind::DegLt:
    case NodeKind::DegEq:
      throw TranslationError("classical formula mentions degrees at " + to_string(f.pos()));
    case NodeKind::Not:
      return Formula::negation(crispify(f.child()), f.pos());
    case NodeKind::Forall:
    case NodeKind::Exists:
      if (f.bound().sort == Sort::Degree) {
        throw TranslationError("classical formula quantifies over degrees at " + to_string(f.pos()));
      }
      return Formula::quantifier(f.kind(), f.bound(), crispify(f.body()), f.pos());
    default:
      return Formula::binary(f.kind(), crispify(f.lhs()), crispify(f.rhs()), f.pos());
  }
}

}  // namespace

Formula translate_crisp(const Formula& psi, const std::string& degree_name) {
  std::string d = fresh_name(degree_name, all_names(psi));
  Formula body = crispify(psi);
  return Formula::conj(Formula::deg_eq(Term::var(d, Sort::Degree), Term::literal(Degree::one())), body);
}

SetDefinition classical_definition(const TheoryEntry& entry) {
  Formula f = translate_crisp(entry.formula, "v");
  Var degree{"v", Sort::Degree};
  for (const auto& v : free_variables(f)) {
    if (v.sort == Sort::Degree) degree = v;
  }
  return SetDefinition{entry.label, f, *entry.element_var, degree, MuOnCrisp::Characteristic};
}

namespace {

class QuotientEvaluator {
 public:
  QuotientEvaluator(const CrispStructure& ns, const FuzzyStructure& st) : ns_(ns), st_(st) {}

  bool eval(const Formula& f, std::vector<std::pair<std::string, std::size_t>>& env) {
    switch (f.kind()) {
      case NodeKind::CrispIn: {
        std::size_t u = value(f.term(0), env), w = value(f.term(1), env);
        if (w < ns_.crisp_count()) return u < ns_.crisp_count() && st_.universe().member(u, w);
        return ns_.in(u, w - ns_.crisp_count());
      }
      case NodeKind::SetEq:
        return value(f.term(0), env) == value(f.term(1), env);
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
        if (f.bound().sort != Sort::Set) throw EvalError("degree quantifier in a classical formula");
        bool want = f.kind() == NodeKind::Exists;
        for (std::size_t p = 0; p < ns_.domain_size(); ++p) {
          env.emplace_back(f.bound().name, p);
          bool r = eval(f.body(), env);
          env.pop_back();
          if (r == want) return want;
        }
        return !want;
      }
      default:
        throw EvalError("formula " + print(f) + " is not classical");
    }
  }

 private:
  std::size_t value(const Term& t, const std::vector<std::pair<std::string, std::size_t>>& env) const {
    if (t.kind == Term::Kind::Var) {
      for (auto it = env.rbegin(); it != env.rend(); ++it) {
        if (it->first == t.name) return it->second;
      }
      throw EvalError("unbound variable '" + t.name + "'");
    }
    auto e = st_.constant(t.name);
    if (!e) throw EvalError("unknown constant '" + t.name + "'");
    if (e->is_crisp()) return e->index;
    auto cls = ns_.class_of(e->index);
    if (!cls) throw EvalError("constant '" + t.name + "' names a set outside the crisp universe");
    return ns_.crisp_count() + *cls;
  }

  const CrispStructure& ns_;
  const FuzzyStructure& st_;
};

}  // namespace

bool eval_in_quotient(const Formula& psi, const CrispStructure& ns, const FuzzyStructure& st,
                      const std::vector<std::pair<std::string, std::size_t>>& env) {
  auto local = env;
  return QuotientEvaluator(ns, st).eval(psi, local);
}

bool NFReport::holds() const {
  for (const auto& v : verdicts) {
    if (!v.holds) return false;
  }
  return true;
}

ordered_json NFReport::to_json() const {
  ordered_json j;
  ordered_json vs = ordered_json::array();
  for (const auto& v : verdicts) vs.push_back(v.to_json());
  j["verdicts"] = vs;
  ordered_json rs = ordered_json::array();
  for (const auto& r : represented) {
    ordered_json rj;
    rj["label"] = r.label;
    rj["formula"] = r.formula;
    rj["class"] = r.cls ? ordered_json(*r.cls) : ordered_json(nullptr);
    rj["universal"] = r.universal;
    rj["members"] = r.members;
    rs.push_back(rj);
  }
  j["represented"] = rs;
  j["status"] = holds() ? "PASS" : "FAIL";
  return j;
}

std::string NFReport::to_text() const {
  std::ostringstream out;
  for (const auto& v : verdicts) {
    out << "  " << v.name << ": " << (v.holds ? "holds" : "FAILS") << " (" << v.instances << " instances)";
    if (!v.holds) {
      out << "\n    counterexample:";
      for (const auto& [k, val] : v.counterexample) out << " " << k << "=" << val;
      if (!v.message.empty()) out << "\n    " << v.message;
    }
    out << "\n";
  }
  for (const auto& r : represented) {
    out << "  " << r.label << " := " << r.formula << "\n    class ";
    out << (r.cls ? std::to_string(*r.cls) : std::string("none")) << (r.universal ? " (universal)" : "")
        << ", members {";
    for (std::size_t i = 0; i < r.members.size(); ++i) out << (i ? " " : "") << r.members[i];
    out << "}\n";
  }
  return out.str();
}

NFReport verify_nf(const CrispStructure& ns, const std::vector<const TheoryEntry*>& corpus,
                   const FuzzyStructure& st) {
  NFReport report;
  const auto& classes = ns.classes();
  auto n = static_cast<std::ptrdiff_t>(st.crisp_count());

  Verdict ext{"nf extensionality"};
  for (std::size_t a = 0; a < classes.size() && ext.holds; ++a) {
    for (std::size_t b = a + 1; b < classes.size(); ++b) {
      ++ext.instances;
      const auto& ta = st.set(classes[a].representative).table;
      const auto& tb = st.set(classes[b].representative).table;
      if (std::equal(ta.begin(), ta.begin() + n, tb.begin())) {
        ext.holds = false;
        ext.counterexample = {{"A", ns.class_name(st, a)}, {"B", ns.class_name(st, b)}};
        ext.message = "distinct classes agree on every crisp element";
        break;
      }
    }
  }
  report.verdicts.push_back(ext);

  for (const auto* entry : corpus) {
    Verdict v{"representation " + entry->label};
    RepresentedSet rep{entry->label, print(entry->formula)};
    auto fail = [&](std::vector<std::pair<std::string, std::string>> ce, std::string msg) {
      v.holds = false;
      v.counterexample = std::move(ce);
      v.message = std::move(msg);
    };
    auto idx = st.set_index(entry->label);
    if (!idx) {
      fail({{"set", entry->label}}, "the classical formula was not materialized");
    } else {
      const auto& table = st.set(*idx).table;
      FuzzySet again = materialize_comprehension(classical_definition(*entry), st);
      for (std::size_t p = 0; p < st.domain_size() && v.holds; ++p) {
        ++v.instances;
        if (again.table[p] != table[p]) {
          fail({{"set", entry->label}, {"x", st.element_name(p)}, {"table", table[p].to_string()},
                {"recomputed", again.table[p].to_string()}},
               "the stored table differs from a fresh materialization");
        } else if (!table[p].is_zero() && !table[p].is_one()) {
          fail({{"set", entry->label}, {"x", st.element_name(p)}, {"degree", table[p].to_string()}},
               "the set is not crisp");
        }
      }
      auto cls = ns.class_of(*idx);
      if (v.holds && !cls) fail({{"set", entry->label}}, "the set has no class in the quotient");
      if (v.holds) {
        rep.cls = cls;
        rep.universal = ns.universal_class() == cls;
        for (std::size_t x = 0; x < ns.crisp_count() && v.holds; ++x) {
          ++v.instances;
          bool member = ns.in(x, *cls);
          bool sat = eval_in_quotient(entry->formula, ns, st, {{entry->element_var->name, x}});
          if (member) rep.members.push_back(st.element_name(x));
          if (member != sat) {
            fail({{"set", entry->label}, {"x", st.element_name(x)}, {"member", member ? "true" : "false"},
                  {"formula", sat ? "true" : "false"}},
                 "membership in the class disagrees with the formula evaluated in the quotient");
          }
        }
      }
    }
    report.verdicts.push_back(v);
    report.represented.push_back(rep);
  }

  Verdict uni{"nf universality"};
  auto u = ns.universal_class();
  if (!u) {
    uni.holds = false;
    // Name what keeps the class of V from being universal.
    auto cv = ns.class_of(0);
    for (std::size_t p = 0; cv && p < ns.domain_size(); ++p) {
      if (!ns.in(p, *cv)) {
        uni.counterexample = {{"class", ns.class_name(st, *cv)}, {"missing", ns.element_name(st, p)}};
        break;
      }
    }
    if (!cv) uni.counterexample = {{"set", st.set(0).name}};
    uni.message = "no class contains every element of the quotient";
  } else {
    std::size_t self = ns.crisp_count() + *u;
    for (std::size_t p = 0; p < ns.domain_size() && uni.holds; ++p) {
      ++uni.instances;
      if (!ns.in(p, *u)) {
        uni.holds = false;
        uni.counterexample = {{"class", ns.class_name(st, *u)}, {"missing", ns.element_name(st, p)}};
      }
    }
    std::size_t rep = classes[*u].representative;
    ++uni.instances;
    if (uni.holds && (!ns.in(self, *u) || !st.degree(st.crisp_count() + rep, rep).is_one())) {
      uni.holds = false;
      uni.counterexample = {{"class", ns.class_name(st, *u)}};
      uni.message = "the universal class is not a member of itself";
    }
  }
  report.verdicts.push_back(uni);
  return report;
}

std::vector<SetDefinition> extraction_definitions(const TheoryFragment& frag) {
  auto defs = comprehension_definitions(frag);
  for (const auto* e : frag.of_kind(EntryKind::Classical)) defs.push_back(classical_definition(*e));
  return defs;
}

bool ExtractResult::holds() const {
  if (base && !base->holds()) return false;
  return extended.holds() && nf.holds();
}

ExtractResult extract_from(FuzzyStructure st, const TheoryFragment& frag) {
  CheckReport extended = check_structure(st, frag, false);
  for (auto& v : extended.verdicts) {
    if (v.name == "extensionality") v.informational = true;
  }
  auto cands = crisp_universe(st);
  CrispStructure q = quotient(st, cands);
  NFReport nf = verify_nf(q, frag.of_kind(EntryKind::Classical), st);
  return ExtractResult{std::nullopt, std::move(st), std::move(extended), std::move(cands), std::move(q), std::move(nf)};
}

ExtractResult extract(const TheoryFragment& frag, unsigned n, unsigned k_grid, BuildOptions opts) {
  CheckReport base = run_fragment(frag, n, k_grid, opts);
  FuzzyStructure st = build_structure(build_vn(n, opts.allow_large), build_grid(k_grid), frag.constants,
                                      extraction_definitions(frag));
  ExtractResult r = extract_from(std::move(st), frag);
  r.base = std::move(base);
  return r;
}

}  // namespace fnf
