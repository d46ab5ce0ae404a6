#include "fuzzynf/checker.hpp"

#include <chrono>
#include <functional>
#include <sstream>

namespace fnf {

using nlohmann::ordered_json;

ordered_json Verdict::to_json() const {
  ordered_json j;
  j["name"] = name;
  j["holds"] = holds;
  if (informational) j["informational"] = true;
  j["instances"] = instances;
  ordered_json ce = ordered_json::object();
  for (const auto& [k, v] : counterexample) ce[k] = v;
  j["counterexample"] = holds ? ordered_json(nullptr) : ce;
  if (!message.empty()) j["message"] = message;
  return j;
}

ordered_json certificate_json(const InconsistencyCertificate& cert) {
  ordered_json j;
  ordered_json cycle = ordered_json::array();
  for (const auto& s : cert.cycle) {
    ordered_json step;
    step["atom"] = s.constraint.atom.empty() ? s.constraint.to_string() : s.constraint.atom;
    step["constraint"] = s.constraint.to_string();
    step["from"] = s.from;
    step["to"] = s.to;
    step["delta"] = s.step;
    cycle.push_back(step);
  }
  j["cycle"] = cycle;
  j["sum"] = cert.sum;
  return j;
}

bool CheckReport::holds() const {
  if (rejected) return false;
  for (const auto& v : verdicts) {
    if (!v.holds && !v.informational) return false;
  }
  return true;
}

ordered_json CheckReport::to_json() const {
  ordered_json j;
  j["fragment"] = fragment;
  j["level"] = level;
  j["grid"] = grid;
  j["comprehensions"] = comprehensions;
  j["sets"] = sets;
  if (rejected) {
    ordered_json r;
    r["reason"] = *rejected;
    if (!rejected_label.empty()) r["label"] = rejected_label;
    if (certificate) r["certificate"] = certificate_json(*certificate);
    j["rejected"] = r;
  } else {
    j["rejected"] = nullptr;
  }
  ordered_json vs = ordered_json::array();
  for (const auto& v : verdicts) vs.push_back(v.to_json());
  j["verdicts"] = vs;
  j["mu_on_crisp"] = {{"rejected", stats.mu_on_crisp_rejected},
                      {"characteristic", stats.mu_on_crisp_characteristic}};
  j["notes"] = {"mu(x, A) = d and mu(x, A) < d are typed like x in A for stratification",
                "mu with a crisp second argument makes the atom false (counted under mu_on_crisp.rejected)"};
  j["status"] = holds() ? "PASS" : "FAIL";
  return j;
}

std::string CheckReport::to_text() const {
  std::ostringstream out;
  out << "fragment " << fragment << " (n=" << level << ", grid=" << grid << ", k=" << comprehensions
      << ", |S|=" << sets.size() << ")\n";
  if (rejected) {
    out << "  rejected: " << *rejected << "\n";
  }
  for (const auto& v : verdicts) {
    out << "  " << v.name << ": " << (v.holds ? "holds" : v.informational ? "fails (informational)" : "FAILS") << " ("
        << v.instances << " instances)";
    if (!v.holds) {
      out << "\n    counterexample:";
      for (const auto& [k, val] : v.counterexample) out << " " << k << "=" << val;
      if (!v.message.empty()) out << "\n    " << v.message;
    }
    out << "\n";
  }
  if (!rejected) {
    out << "  mu on crisp sets: " << stats.mu_on_crisp_rejected << " rejected, "
        << stats.mu_on_crisp_characteristic << " characteristic\n";
  }
  out << "  status: " << (holds() ? "PASS" : "FAIL") << "\n";
  return out.str();
}

Verdict check_extensionality(const FuzzyStructure& st) {
  Verdict v{"extensionality"};
  std::size_t n = st.crisp_count();
  for (std::size_t i = 0; i < st.set_count(); ++i) {
    for (std::size_t j = i + 1; j < st.set_count(); ++j) {
      ++v.instances;
      const auto& a = st.set(i).table;
      const auto& b = st.set(j).table;
      if (std::equal(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(n), b.begin())) {
        v.holds = false;
        v.counterexample = {{"A", st.set(i).name}, {"B", st.set(j).name}};
        v.message = "distinct sets with the same degrees on every element of V_" + std::to_string(st.universe().level());
        return v;
      }
    }
  }
  return v;
}

Verdict check_universality(const FuzzyStructure& st) {
  Verdict v{"universality"};
  for (std::size_t p = 0; p < st.domain_size(); ++p) {
    ++v.instances;
    Degree d = st.degree(p, 0);
    if (!d.is_one()) {
      v.holds = false;
      v.counterexample = {{"x", st.element_name(p)}, {"degree", d.to_string()}};
      v.message = "mu(" + st.element_name(p) + ", V) = " + d.to_string();
      return v;
    }
  }
  return v;
}

Formula comprehension_instance(const SetDefinition& def) {
  const Formula& phi = *def.formula;
  std::set<std::string> used = all_names(phi);
  used.insert(def.label);
  std::string xn = fresh_name("x", used);
  used.insert(xn);
  std::string dn = fresh_name("d", used);
  used.insert(dn);
  std::string wn = fresh_name("w", used);

  Term x = Term::var(xn, Sort::Set);
  Term d = Term::var(dn, Sort::Degree);
  Term w = Term::var(wn, Sort::Degree);
  Var wv{wn, Sort::Degree};

  Formula phi_x = substitute(phi, def.element_var.name, x);
  Formula at_d = substitute(phi_x, def.degree_var.name, d);
  Formula at_w = substitute(phi_x, def.degree_var.name, w);

  Formula greatest = Formula::conj(
      Formula::conj(at_d, Formula::forall(wv, Formula::implies(Formula::deg_lt(d, w), Formula::negation(at_w)))),
      Formula::exists(wv, Formula::conj(Formula::disj(Formula::deg_lt(w, d), Formula::deg_eq(w, d)), at_w)));
  Formula none = Formula::conj(Formula::deg_eq(d, Term::literal(Degree::zero())),
                               Formula::forall(wv, Formula::negation(at_w)));
  Formula body = Formula::iff(Formula::mu_eq(x, Term::constant(def.label), d), Formula::disj(greatest, none));
  return sort_check(Formula::forall(Var{xn, Sort::Set}, Formula::forall(Var{dn, Sort::Degree}, body)));
}

Verdict check_sentence(std::string name, const Formula& f, const FuzzyStructure& st, EvalOptions opts,
                       EvalStats* stats) {
  Verdict v{std::move(name)};
  std::vector<Var> vars;
  const Formula* body = &f;
  while (body->kind() == NodeKind::Forall) {
    vars.push_back(body->bound());
    body = &body->body();
  }
  Evaluator ev(st, opts);
  Env env;
  std::function<bool(std::size_t)> walk = [&](std::size_t depth) -> bool {
    if (depth == vars.size()) {
      ++v.instances;
      if (ev.eval(*body, env)) return true;
      v.holds = false;
      for (const auto& [var, val] : env.bindings()) {
        if (auto* e = std::get_if<DomainElement>(&val)) {
          v.counterexample.emplace_back(var.name, st.element_name(*e));
        } else {
          v.counterexample.emplace_back(var.name, std::get<Degree>(val).to_string());
        }
      }
      return false;
    }
    const Var& var = vars[depth];
    bool ok = true;
    if (var.sort == Sort::Set) {
      for (std::size_t p = 0; ok && p < st.domain_size(); ++p) {
        env.bind(var, st.element(p));
        ok = walk(depth + 1);
        env.pop();
      }
    } else {
      for (std::size_t i = 0; ok && i < st.grid().size(); ++i) {
        env.bind(var, st.grid().values()[i]);
        ok = walk(depth + 1);
        env.pop();
      }
    }
    return ok;
  };
  walk(0);
  if (!v.holds && vars.empty()) v.message = "the sentence is false";
  if (stats) {
    stats->mu_on_crisp_rejected += ev.stats().mu_on_crisp_rejected;
    stats->mu_on_crisp_characteristic += ev.stats().mu_on_crisp_characteristic;
  }
  return v;
}

Verdict check_comprehension(const FuzzyStructure& st, EvalStats* stats) {
  Verdict out{"comprehension"};
  for (std::size_t i = 1; i < st.set_count(); ++i) {
    const SetDefinition& def = st.definitions()[i];
    if (!def.formula) continue;
    Verdict v = check_sentence("comprehension", comprehension_instance(def), st, {def.mu_on_crisp}, stats);
    out.instances += v.instances;
    if (!v.holds) {
      out.holds = false;
      out.counterexample.emplace_back("set", def.label);
      // Report the instance by its role rather than the generated variable names.
      out.counterexample.emplace_back("x", v.counterexample.at(0).second);
      out.counterexample.emplace_back("d", v.counterexample.at(1).second);
      const std::string& elem = v.counterexample.at(0).second;
      for (std::size_t p = 0; p < st.domain_size(); ++p) {
        if (st.element_name(p) != elem) continue;
        out.message = "mu(" + elem + ", " + def.label + ") = " + st.degree(p, i).to_string() +
                      " disagrees with the comprehension formula at degree " + v.counterexample.at(1).second;
        break;
      }
      return out;
    }
  }
  return out;
}

CheckReport check_structure(const FuzzyStructure& st, const TheoryFragment& frag, bool axioms) {
  CheckReport r;
  r.fragment = frag.name;
  r.level = st.universe().level();
  r.grid = st.grid().resolution();
  r.comprehensions = st.set_count() - 1;
  for (const auto& s : st.sets()) r.sets.push_back(s.name);
  r.verdicts.push_back(check_extensionality(st));
  r.verdicts.push_back(check_comprehension(st, &r.stats));
  r.verdicts.push_back(check_universality(st));
  if (!axioms) return r;
  for (const auto* e : frag.of_kind(EntryKind::Axiom)) {
    std::string name = "axiom " + e->label;
    auto crisp = crisp_membership_atoms(e->formula);
    if (!crisp.empty()) {
      Verdict v{name, false};
      v.counterexample.emplace_back("atom", to_string(crisp.front()));
      v.message = "crisp membership is not part of the fuzzy language; use mu(x, A) = 1 or a classical entry";
      r.verdicts.push_back(v);
      continue;
    }
    bool known = true;
    for (const auto& c : constants_of(e->formula)) {
      if (!st.constant(c)) {
        Verdict v{name, false};
        v.counterexample.emplace_back("constant", c);
        v.message = "the structure has no element named " + c;
        r.verdicts.push_back(v);
        known = false;
        break;
      }
    }
    if (known) r.verdicts.push_back(check_sentence(name, e->formula, st, {}, &r.stats));
  }
  return r;
}

CheckReport run_fragment(const TheoryFragment& frag, unsigned n, unsigned k_grid, BuildOptions opts) {
  auto start = std::chrono::steady_clock::now();
  CheckReport r;
  try {
    FuzzyStructure st = build_model(frag, n, k_grid, opts);
    r = check_structure(st, frag);
  } catch (const StratificationError& e) {
    r.fragment = frag.name;
    r.level = n;
    r.grid = k_grid;
    r.comprehensions = frag.comprehension_count();
    r.rejected = e.what();
    r.rejected_label = e.label();
    r.certificate = e.certificate();
  } catch (const ModelError& e) {
    r.fragment = frag.name;
    r.level = n;
    r.grid = k_grid;
    r.comprehensions = frag.comprehension_count();
    r.rejected = e.what();
  }
  r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

TheoryFragment fragment_prefix(const TheoryFragment& frag, std::size_t count) {
  TheoryFragment out;
  out.name = frag.name + "[" + std::to_string(count) + "]";
  out.constants = frag.constants;
  std::set<std::string> names{std::string(kUniversalSet)};
  for (const auto& c : frag.constants) names.insert(c.name);
  std::size_t taken = 0;
  for (const auto& e : frag.entries) {
    if (e.kind == EntryKind::Comprehension && taken < count) {
      out.entries.push_back(e);
      names.insert(e.label);
      ++taken;
    }
  }
  for (const auto& e : frag.entries) {
    if (e.kind != EntryKind::Axiom) continue;
    bool ok = true;
    for (const auto& c : constants_of(e.formula)) ok = ok && names.count(c);
    if (ok) out.entries.push_back(e);
  }
  return out;
}

std::vector<CheckReport> growing_fragments(const TheoryFragment& frag, unsigned n, unsigned k_grid,
                                           BuildOptions opts) {
  std::vector<CheckReport> out;
  std::size_t k = frag.comprehension_count();
  for (std::size_t j = k == 0 ? 0 : 1; j <= k; ++j) {
    out.push_back(run_fragment(fragment_prefix(frag, j), n, k_grid, opts));
    if (!out.back().holds()) break;
  }
  return out;
}

ordered_json StabilityProbe::to_json() const {
  ordered_json j;
  j["level"] = level;
  j["compared_with"] = level + 1;
  ordered_json cs = ordered_json::array();
  for (const auto& c : changes) {
    cs.push_back({{"set", c.set}, {"element", c.element}, {"at_n", c.at_n.to_string()},
                  {"at_next", c.at_next.to_string()}});
  }
  j["changes"] = cs;
  j["stable"] = changes.empty();
  return j;
}

StabilityProbe stability_probe(const TheoryFragment& frag, unsigned n, unsigned k_grid, BuildOptions opts) {
  StabilityProbe probe;
  probe.level = n;
  FuzzyStructure a = build_model(frag, n, k_grid, opts);
  FuzzyStructure b = build_model(frag, n + 1, k_grid, opts);
  for (std::size_t s = 0; s < a.set_count(); ++s) {
    for (std::size_t p = 0; p < a.crisp_count(); ++p) {
      // V_n sits at the front of V_{n+1} with the same indices.
      Degree x = a.degree(p, s), y = b.degree(p, s);
      if (x != y) probe.changes.push_back({a.set(s).name, a.element_name(p), x, y});
    }
  }
  return probe;
}

}  // namespace fnf
