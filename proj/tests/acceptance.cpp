#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "commands.hpp"
#include "fuzzynf/checker.hpp"
#include "fuzzynf/crisp.hpp"
#include "fuzzynf/parser.hpp"
#include "json.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace fnf;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt_seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f s", s);
  return buf;
}

Outcome stratification_oracle() {
  auto t0 = Clock::now();
  std::mt19937 rng(20240601);
  int cases = 6000, mismatches = 0, stratified = 0;
  std::string first;
  for (int i = 0; i < cases; ++i) {
    Formula f = oracle::random_strat_formula(rng, 1 + i % 4, 1 + (i / 4) % 5);
    bool lib = is_stratified(f).stratified;
    bool brute = oracle::brute_force_stratified(f, -4, 4);
    stratified += brute;
    if (lib != brute) {
      if (mismatches++ == 0) first = print(f);
    }
  }
  double s = seconds_since(t0);
  Outcome o;
  o.pass = mismatches == 0 && s < 60;
  o.detail = std::to_string(cases) + " formulas (" + std::to_string(stratified) + " stratified), " +
             std::to_string(mismatches) + " mismatches, " + fmt_seconds(s);
  if (!first.empty()) o.detail += ", first: " + first;
  return o;
}

Outcome comprehension_maximality() {
  FuzzyStructure st = build_model(test_support::default_corpus(), 3, 4);
  std::size_t entries = 0, wrong = 0;
  for (std::size_t i = 1; i < st.set_count(); ++i) {
    auto expected = oracle::max_oracle_table(st, st.definitions()[i]);
    for (std::size_t p = 0; p < st.domain_size(); ++p) {
      ++entries;
      wrong += expected[p] != st.degree(p, i);
    }
  }
  TheoryFragment never = parse_theory(
      "comprehension lt (x, v): v < v\n"
      "comprehension none (x, v): v = 1 & ~(x = x)\n");
  FuzzyStructure z = build_model(never, 3, 4);
  std::size_t nonzero = 0;
  for (std::size_t i = 1; i < z.set_count(); ++i) {
    for (const auto& d : z.set(i).table) nonzero += !d.is_zero();
  }
  Outcome o;
  o.pass = wrong == 0 && nonzero == 0;
  o.detail = std::to_string(entries) + " entries, " + std::to_string(wrong) + " differ from the max oracle; " +
             "unsatisfiable sets: " + std::to_string(nonzero) + " nonzero entries";
  return o;
}

Outcome fragment_satisfiability() {
  auto t0 = Clock::now();
  cli::RunConfig cfg;
  cfg.grow = true;
  cfg.format = cli::Format::Json;
  cli::CommandResult r = cli::cmd_check(cfg);
  auto j = nlohmann::json::parse(r.report);
  std::size_t passing = 0;
  for (const auto& rep : j["reports"]) {
    bool ok = rep["status"] == "PASS";
    for (const char* name : {"extensionality", "comprehension", "universality"}) {
      bool seen = false;
      for (const auto& v : rep["verdicts"]) {
        if (v["name"] == name) seen = v["holds"] == true;
      }
      ok = ok && seen;
    }
    if (!ok) break;
    ++passing;
  }
  double s = seconds_since(t0);
  Outcome o;
  o.pass = r.exit_code == 0 && j["reports"].size() == 10 && passing == 10 && s < 300;
  o.detail = std::to_string(passing) + "/" + std::to_string(j["reports"].size()) + " consecutive PASS reports, " +
             fmt_seconds(s);
  return o;
}

bool universal_exact(const FuzzyStructure& st) {
  for (std::size_t p = 0; p < st.domain_size(); ++p) {
    if (!st.degree(p, 0).is_one()) return false;
  }
  return st.mu(DomainElement::named(0), DomainElement::named(0)).is_one() && check_universality(st).holds;
}

Outcome universality() {
  TheoryFragment frag = test_support::default_corpus();
  std::size_t models = 0, failing = 0;
  for (unsigned n : {3u, 4u}) {
    for (unsigned k : {1u, 2u, 3u, 4u}) {
      for (std::size_t c = 0; c <= frag.comprehension_count(); ++c) {
        ++models;
        failing += !universal_exact(build_model(fragment_prefix(frag, c), n, k));
      }
      ++models;
      failing += !universal_exact(
          build_structure(build_vn(n), build_grid(k), frag.constants, extraction_definitions(frag)));
    }
  }
  for (unsigned n : {1u, 2u}) {
    ++models;
    failing += !universal_exact(build_model(parse_theory("comprehension h (x, v): v = 1/2\n"), n, 2));
  }
  Outcome o;
  o.pass = failing == 0;
  o.detail = std::to_string(models) + " models, " + std::to_string(failing) + " violate mu(x, V) = 1";
  return o;
}

// Membership in N read straight from the tables: HF membership for a crisp set,
// degree 1 in the representative's table for a class.
class IndependentN {
 public:
  IndependentN(const FuzzyStructure& st, const CrispStructure& ns) : st_(st), ns_(ns) {
    for (const auto& c : ns.classes()) reps_.push_back(c.representative);
  }

  std::size_t size() const { return st_.crisp_count() + reps_.size(); }

  bool in(std::size_t u, std::size_t w) const {
    std::size_t n = st_.crisp_count();
    if (w < n) return u < n && oracle::ackermann_member(code(u), code(w));
    std::size_t rep = reps_[w - n];
    std::size_t elem = u < n ? u : n + reps_[u - n];
    return st_.degree(elem, rep).is_one();
  }

  bool eval(const Formula& f, std::map<std::string, std::size_t>& env) const {
    switch (f.kind()) {
      case NodeKind::CrispIn:
        return in(value(f.term(0), env), value(f.term(1), env));
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
        bool any = false, all = true;
        auto saved = env;
        for (std::size_t p = 0; p < size(); ++p) {
          env[f.bound().name] = p;
          bool r = eval(f.body(), env);
          any = any || r;
          all = all && r;
        }
        env = saved;
        return f.kind() == NodeKind::Exists ? any : all;
      }
      default:
        throw std::runtime_error("not a classical formula: " + print(f));
    }
  }

 private:
  std::uint64_t code(std::size_t pos) const { return *st_.universe().element(pos).ackermann_code(); }

  std::size_t value(const Term& t, const std::map<std::string, std::size_t>& env) const {
    if (t.kind == Term::Kind::Var) return env.at(t.name);
    for (const auto& c : st_.crisp_constants()) {
      if (c.name == t.name) return *st_.universe().index_of(HFSet::parse(c.literal));
    }
    auto idx = *st_.set_index(t.name);
    for (std::size_t c = 0; c < reps_.size(); ++c) {
      for (std::size_t m : ns_.classes()[c].members) {
        if (m == idx) return st_.crisp_count() + c;
      }
    }
    throw std::runtime_error("constant outside N: " + t.name);
  }

  const FuzzyStructure& st_;
  const CrispStructure& ns_;
  std::vector<std::size_t> reps_;
};

Outcome crisp_extraction() {
  auto t0 = Clock::now();
  cli::RunConfig cfg;
  cfg.format = cli::Format::Json;
  cli::CommandResult cmd = cli::cmd_extract(cfg);

  TheoryFragment frag = test_support::default_corpus();
  ExtractResult r = extract(frag, 3, 4);
  const FuzzyStructure& st = r.structure;
  const CrispStructure& ns = r.quotient;
  IndependentN n(st, ns);
  std::size_t crisp = st.crisp_count();

  std::size_t classes = ns.classes().size(), same_pairs = 0;
  for (std::size_t a = 0; a < classes; ++a) {
    for (std::size_t b = a + 1; b < classes; ++b) {
      bool differ = false;
      for (std::size_t x = 0; x < crisp; ++x) {
        differ = differ || n.in(x, crisp + a) != n.in(x, crisp + b);
      }
      same_pairs += !differ;
    }
  }

  std::size_t psi_count = 0, psi_bad = 0;
  for (const auto* e : frag.of_kind(EntryKind::Classical)) {
    ++psi_count;
    auto idx = st.set_index(e->label);
    bool ok = idx.has_value();
    for (std::size_t p = 0; ok && p < st.domain_size(); ++p) {
      Degree d = st.degree(p, *idx);
      ok = d.is_zero() || d.is_one();
    }
    for (std::size_t x = 0; ok && x < crisp; ++x) {
      std::map<std::string, std::size_t> env{{e->element_var->name, x}};
      ok = st.degree(x, *idx).is_one() == n.eval(e->formula, env);
    }
    psi_bad += !ok;
  }

  std::size_t universal = 0;
  for (std::size_t c = 0; c < classes; ++c) {
    bool all = true;
    for (std::size_t p = 0; p < n.size(); ++p) all = all && n.in(p, crisp + c);
    universal += all;
  }

  double s = seconds_since(t0);
  Outcome o;
  o.pass = cmd.exit_code == 0 && r.holds() && same_pairs == 0 && psi_count > 0 && psi_bad == 0 && universal > 0 &&
           s < 60;
  o.detail = std::to_string(classes) + " classes, " + std::to_string(same_pairs) + " indistinguishable pairs; " +
             std::to_string(psi_count - psi_bad) + "/" + std::to_string(psi_count) +
             " classical sets match; " + std::to_string(universal) + " universal class(es); " + fmt_seconds(s);
  return o;
}

Outcome hierarchy_sanity() {
  const std::vector<std::size_t> expected{1, 2, 4, 16};
  bool sizes = true, codes = true, acyclic = true;
  std::string got;
  for (unsigned n = 1; n <= 4; ++n) {
    HFUniverse u = build_vn(n);
    sizes = sizes && u.size() == expected[n - 1] && u.size() == oracle::vn_size(n);
    got += (n > 1 ? "," : "") + std::to_string(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
      codes = codes && u.element(i).to_string() == oracle::ackermann_braces(i);
      for (std::size_t j = 0; j < u.size(); ++j) codes = codes && u.member(i, j) == oracle::ackermann_member(i, j);
    }
    // Depth-first search over the membership graph looking for a back edge.
    std::vector<int> colour(u.size(), 0);
    std::function<void(std::size_t)> visit = [&](std::size_t v) {
      colour[v] = 1;
      for (std::size_t m : u.members_of(v)) {
        if (colour[m] == 1) acyclic = false;
        if (colour[m] == 0) visit(m);
      }
      colour[v] = 2;
    };
    for (std::size_t v = 0; v < u.size(); ++v) {
      if (colour[v] == 0) visit(v);
    }
  }
  Outcome o;
  o.pass = sizes && codes && acyclic;
  o.detail = "sizes " + got + (codes ? ", encoding matches" : ", encoding differs") +
             (acyclic ? ", no membership cycles" : ", membership cycle found");
  return o;
}

Outcome mutation_detection() {
  TheoryFragment frag = test_support::default_corpus();
  FuzzyStructure st = build_structure(build_vn(3), build_grid(4), frag.constants, extraction_definitions(frag));
  std::mt19937 rng(777);
  int detected = 0, total = 20;
  std::string missed;
  for (int i = 0; i < total; ++i) {
    FuzzyStructure bad = st;
    std::size_t set = rng() % bad.set_count();
    std::size_t pos = rng() % bad.domain_size();
    const auto& values = bad.grid().values();
    Degree old = bad.degree(pos, set), d = old;
    while (d == old) d = values[rng() % values.size()];
    bad.set_degree(pos, set, d);

    ExtractResult r = extract_from(bad, frag);
    bool witnessed = false;
    for (const auto* verdicts : {&r.extended.verdicts, &r.nf.verdicts}) {
      for (const auto& v : *verdicts) {
        if (!v.holds && !v.informational && !v.counterexample.empty()) witnessed = true;
      }
    }
    if (witnessed) {
      ++detected;
    } else if (missed.empty()) {
      missed = bad.set(set).name + " at " + bad.element_name(pos);
    }
  }
  Outcome o;
  o.pass = detected == total;
  o.detail = std::to_string(detected) + "/" + std::to_string(total) + " corruptions detected with a witness";
  if (!missed.empty()) o.detail += ", first missed: " + missed;
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"stratification agrees with brute-force typing", stratification_oracle},
      {"comprehension tables are maximal", comprehension_maximality},
      {"growing fragments are satisfied", fragment_satisfiability},
      {"universality holds in every model", universality},
      {"crisp extraction", crisp_extraction},
      {"hierarchy sanity", hierarchy_sanity},
      {"mutation detection", mutation_detection},
  };
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all = all && o.pass;
    std::printf("%zu %s %s: %s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
