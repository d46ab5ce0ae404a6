#include <algorithm>
#include <random>

#include "doctest.h"
#include "fuzzynf/checker.hpp"
#include "fuzzynf/eval.hpp"
#include "fuzzynf/parser.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace fnf;

namespace {

ParseContext context_for(const FuzzyStructure& st) {
  ParseContext ctx;
  for (const auto& s : st.sets()) ctx.constants.insert(s.name);
  for (const auto& c : st.crisp_constants()) ctx.constants.insert(c.name);
  return ctx;
}

bool holds(const std::string& text, const FuzzyStructure& st) {
  return eval(parse_formula(text, context_for(st)), st, Env{});
}

}  // namespace

TEST_CASE("evaluation examples") {
  FuzzyStructure st = build_model(test_support::default_corpus(), 3, 4);
  CHECK(holds("forall x:U. mu(x, V) = 1", st));
  CHECK(holds("1/2 < 1", st));
  CHECK(!holds("1 < 1/2", st));
  CHECK(holds("mu(V, V) = 1", st));
  CHECK(holds("in(e0, e1) & ~in(e1, e0)", st));
  // Crisp membership is false once a member of S is involved.
  CHECK(!holds("exists x:U. in(x, V)", st));
  CHECK(!holds("in(V, e1)", st));
  // mu with a crisp second argument is false, and counted.
  EvalStats stats;
  CHECK(!eval(parse_formula("mu(e0, e1) = 1", context_for(st)), st, Env{}, {}, &stats));
  CHECK(stats.mu_on_crisp_rejected == 1);
  EvalStats chr;
  CHECK(eval(parse_formula("mu(e0, e1) = 1", context_for(st)), st, Env{}, {MuOnCrisp::Characteristic}, &chr));
  CHECK(chr.mu_on_crisp_characteristic == 1);
  // Degree quantifiers range over the grid only.
  CHECK(holds("forall d:D. d = 0 | d = 1/4 | d = 1/2 | d = 3/4 | d = 1", st));
  CHECK(!holds("exists d:D. d = 1/3", st));
  CHECK(holds("exists x:U. x = contains_empty", st));
}

TEST_CASE("environment evaluator agrees with substitution on random closed formulas") {
  TheoryFragment frag = test_support::default_corpus();
  std::mt19937 rng(31337);
  for (unsigned k : {2u, 4u}) {
    FuzzyStructure st = build_model(frag, 3, k);
    REQUIRE(st.domain_size() <= 100);
    oracle::SubstitutionEvaluator naive(st);
    std::vector<std::string> consts{"V", "e0", "e1", "contains_empty", "quarter", "graded_pair"};
    std::vector<Degree> degs = st.grid().values();
    degs.push_back(Degree(1, 3));
    for (int i = 0; i < 600; ++i) {
      Formula f = oracle::random_closed_formula(rng, consts, degs, 1 + i % 5);
      REQUIRE_MESSAGE(eval(f, st, Env{}) == naive.eval(f), print(f));
    }
  }
}

TEST_CASE("extensionality") {
  FuzzyStructure st = build_model(
      parse_theory("constant e0 = {}\ncomprehension A1 (x, v): v = 1 & in(e0, x)\n"), 3, 4);
  CHECK(check_extensionality(st).holds);

  FuzzyStructure dup = build_model(parse_theory("constant e0 = {}\n"
                                                "comprehension A1 (x, v): v = 1 & in(e0, x)\n"
                                                "comprehension A2 (x, v): v = 1/2 & x = x\n"
                                                "comprehension A3 (x, v): in(e0, x) & v = 1\n"),
                                    3, 4);
  Verdict v = check_extensionality(dup);
  CHECK(!v.holds);
  REQUIRE(v.counterexample.size() == 2);
  CHECK(v.counterexample[0].second == "A1");
  CHECK(v.counterexample[1].second == "A3");

  CHECK(check_extensionality(build_model(parse_theory(""), 3, 4)).holds);
}

TEST_CASE("comprehension check") {
  FuzzyStructure st = build_model(test_support::default_corpus(), 3, 4);
  Verdict ok = check_comprehension(st);
  CHECK(ok.holds);
  CHECK(ok.instances == 10 * 15 * 5);

  FuzzyStructure bad = st;
  auto i = *bad.set_index("graded_pair");
  bad.set_degree(3, i, Degree(3, 4));
  Verdict v = check_comprehension(bad);
  CHECK(!v.holds);
  REQUIRE(v.counterexample.size() == 3);
  CHECK(v.counterexample[0] == std::pair<std::string, std::string>{"set", "graded_pair"});
  CHECK(v.counterexample[1] == std::pair<std::string, std::string>{"x", "{{},{{}}}"});
  CHECK(v.counterexample[2] == std::pair<std::string, std::string>{"d", "3/4"});

  FuzzyStructure never = build_model(parse_theory("comprehension A (x, v): v < v\n"), 3, 4);
  CHECK(check_comprehension(never).holds);
}

TEST_CASE("comprehension check agrees with the max oracle") {
  // Corrupt entries one by one; the check fails exactly when the table differs from the oracle.
  FuzzyStructure st = build_model(test_support::default_corpus(), 3, 2);
  std::mt19937 rng(8);
  for (int trial = 0; trial < 40; ++trial) {
    FuzzyStructure m = st;
    std::size_t s = 1 + rng() % (m.set_count() - 1);
    std::size_t p = rng() % m.domain_size();
    Degree d = m.grid().values()[rng() % m.grid().size()];
    m.set_degree(p, s, d);
    bool matches = true;
    for (std::size_t i = 1; i < m.set_count(); ++i) {
      matches = matches && oracle::max_oracle_table(m, m.definitions()[i]) == m.set(i).table;
    }
    CHECK(check_comprehension(m).holds == matches);
  }
}

TEST_CASE("universality check") {
  FuzzyStructure st = build_model(test_support::default_corpus(), 3, 4);
  CHECK(check_universality(st).holds);
  FuzzyStructure bad = st;
  bad.set_degree(2, 0, Degree::zero());
  Verdict v = check_universality(bad);
  CHECK(!v.holds);
  CHECK(v.counterexample.at(0).second == "{{{}}}");
  FuzzyStructure self = st;
  self.set_degree(self.crisp_count(), 0, Degree(1, 2));
  Verdict w = check_universality(self);
  CHECK(!w.holds);
  CHECK(w.counterexample.at(0).second == "V");
  CHECK(check_universality(build_model(parse_theory(""), 1, 1)).holds);
}

TEST_CASE("run_fragment") {
  TheoryFragment frag = test_support::default_corpus();
  CheckReport r = run_fragment(fragment_prefix(frag, 3), 3, 4);
  CHECK(r.holds());
  CHECK(r.comprehensions == 3);

  CheckReport bad = run_fragment(parse_theory("comprehension R (x, v): v = 1 & ~in(x, x)\n"), 3, 4);
  CHECK(!bad.holds());
  REQUIRE(bad.certificate);
  CHECK(bad.rejected_label == "R");
  CHECK(bad.verdicts.empty());
  CHECK(bad.to_json()["rejected"]["certificate"]["sum"] == -1);

  CheckReport again = run_fragment(frag, 3, 4);
  CheckReport once = run_fragment(frag, 3, 4);
  CHECK(again.to_json().dump() == once.to_json().dump());
  CHECK(again.to_text() == once.to_text());
}

TEST_CASE("axiom entries with crisp membership are flagged") {
  CheckReport r = run_fragment(parse_theory("axiom bad: forall x:U. ~in(x, x)\n"), 2, 2);
  CHECK(!r.holds());
  CHECK(r.verdicts.back().name == "axiom bad");
  CHECK(!r.verdicts.back().holds);
}

TEST_CASE("growing fragments") {
  TheoryFragment frag = test_support::default_corpus();
  auto reports = growing_fragments(frag, 3, 4);
  REQUIRE(reports.size() == 10);
  for (std::size_t i = 0; i < reports.size(); ++i) {
    CHECK(reports[i].holds());
    CHECK(reports[i].comprehensions == i + 1);
  }
  auto empty = growing_fragments(parse_theory("axiom univ: forall x:U. mu(x, V) = 1\n"), 3, 4);
  REQUIRE(empty.size() == 1);
  CHECK(empty[0].holds());
  CHECK(empty[0].verdicts.size() == 4);

  // Stops at the first failing prefix.
  TheoryFragment broken = parse_theory(
      "comprehension A (x, v): v = 1/2\ncomprehension B (x, v): v = 1/2 & x = x\ncomprehension C (x, v): v = 0\n");
  auto stopped = growing_fragments(broken, 2, 2);
  CHECK(stopped.size() == 2);
  CHECK(!stopped.back().holds());
}

TEST_CASE("prefix order does not change satisfiability") {
  TheoryFragment frag = test_support::default_corpus();
  std::mt19937 rng(4);
  for (int round = 0; round < 3; ++round) {
    TheoryFragment shuffled = frag;
    std::vector<TheoryEntry> comps, rest;
    for (const auto& e : frag.entries) (e.kind == EntryKind::Comprehension ? comps : rest).push_back(e);
    std::shuffle(comps.begin(), comps.end(), rng);
    shuffled.entries = rest;
    shuffled.entries.insert(shuffled.entries.end(), comps.begin(), comps.end());
    auto reports = growing_fragments(shuffled, 3, 4);
    CHECK(reports.size() == 10);
    for (const auto& r : reports) CHECK(r.holds());
  }
}

TEST_CASE("subfragments of a satisfied fragment are satisfied") {
  TheoryFragment frag = test_support::default_corpus();
  REQUIRE(run_fragment(frag, 3, 4).holds());
  std::mt19937 rng(12);
  for (int round = 0; round < 10; ++round) {
    TheoryFragment sub = frag;
    sub.entries.clear();
    for (const auto& e : frag.entries) {
      if (e.kind != EntryKind::Comprehension || rng() % 2) sub.entries.push_back(e);
    }
    CHECK(run_fragment(fragment_prefix(sub, sub.comprehension_count()), 3, 4).holds());
  }
}

TEST_CASE("stability probe") {
  TheoryFragment frag = test_support::default_corpus();
  StabilityProbe p = stability_probe(frag, 3, 4);
  // empty_set's formula quantifies over the domain, but crisp members only come from V_n.
  CHECK(p.level == 3);
  for (const auto& c : p.changes) CHECK(c.at_n != c.at_next);
  StabilityProbe flat = stability_probe(parse_theory("comprehension A (x, v): v = 1 & x = x\n"), 2, 2);
  CHECK(flat.changes.empty());
}
