#include <random>

#include "doctest.h"
#include "fuzzynf/parser.hpp"
#include "fuzzynf/stratify.hpp"
#include "oracles.hpp"

using namespace fnf;

namespace {

StratResult strat(const std::string& text) { return is_stratified(parse_formula(text)); }

void check_certificate(const InconsistencyCertificate& cert, const std::vector<StratConstraint>& cs) {
  REQUIRE(!cert.cycle.empty());
  CHECK(cert.sum != 0);
  int sum = 0;
  for (std::size_t i = 0; i < cert.cycle.size(); ++i) {
    const auto& s = cert.cycle[i];
    sum += s.step;
    // Each step is one of the constraints, walked in one direction.
    bool known = false;
    for (const auto& c : cs) known = known || c == s.constraint;
    CHECK(known);
    bool forward = s.constraint.a == s.to && s.constraint.b == s.from && s.step == s.constraint.delta;
    bool backward = s.constraint.a == s.from && s.constraint.b == s.to && s.step == -s.constraint.delta;
    CHECK((forward || backward));
    // Consecutive steps connect and the walk closes.
    const auto& next = cert.cycle[(i + 1) % cert.cycle.size()];
    CHECK(s.to == next.from);
  }
  CHECK(sum == cert.sum);
}

}  // namespace

TEST_CASE("constraint collection") {
  auto cs = collect_constraints(parse_formula("in(x,y)"));
  REQUIRE(cs.size() == 1);
  CHECK(cs[0] == StratConstraint::diff("x", "y", -1));

  cs = collect_constraints(parse_formula("in(x,x)"));
  REQUIRE(cs.size() == 1);
  CHECK(cs[0] == StratConstraint::diff("x", "x", -1));

  cs = collect_constraints(parse_formula("mu(x,A)=d & mu(A,B)=v"));
  REQUIRE(cs.size() == 2);
  CHECK(cs[0] == StratConstraint::diff("x", "A", -1));
  CHECK(cs[1] == StratConstraint::diff("A", "B", -1));

  cs = collect_constraints(parse_formula("x = y & d < 1/2 & d = v"));
  REQUIRE(cs.size() == 1);
  CHECK(cs[0] == StratConstraint::eq("x", "y"));

  cs = collect_constraints(parse_formula("mu(x, A) < 1/2"));
  REQUIRE(cs.size() == 1);
  CHECK(cs[0] == StratConstraint::diff("x", "A", -1));
}

TEST_CASE("solving") {
  std::vector<StratConstraint> one{StratConstraint::diff("x", "y", -1)};
  auto r = solve_constraints(one);
  REQUIRE(std::holds_alternative<StratTyping>(r));
  CHECK(std::get<StratTyping>(r).assignment == std::map<std::string, int>{{"x", 0}, {"y", 1}});

  std::vector<StratConstraint> russell{StratConstraint::diff("x", "x", -1)};
  r = solve_constraints(russell);
  REQUIRE(std::holds_alternative<InconsistencyCertificate>(r));
  CHECK(std::get<InconsistencyCertificate>(r).sum == -1);
  check_certificate(std::get<InconsistencyCertificate>(r), russell);

  std::vector<StratConstraint> tri{StratConstraint::diff("x", "A", -1), StratConstraint::diff("A", "B", -1),
                                   StratConstraint::eq("x", "B")};
  r = solve_constraints(tri);
  REQUIRE(std::holds_alternative<InconsistencyCertificate>(r));
  auto cert = std::get<InconsistencyCertificate>(r);
  CHECK(std::abs(cert.sum) == 2);
  check_certificate(cert, tri);
  CHECK(!oracle::brute_force_stratified(parse_formula("mu(x,A)=d & mu(A,B)=v & x = B"), -3, 3));
}

TEST_CASE("is_stratified examples") {
  auto r = strat("in(x,y)");
  CHECK(r.stratified);
  CHECK(r.typing->assignment == std::map<std::string, int>{{"x", 0}, {"y", 1}});
  CHECK(r.typing->satisfies(r.constraints));

  r = strat("~in(x,x)");
  CHECK(!r.stratified);
  REQUIRE(r.certificate);
  check_certificate(*r.certificate, r.constraints);

  // The crisp translation (d = 1 & psi) keeps psi's verdict.
  for (std::string psi : {"in(x, y)", "forall y:U. in(y, x)", "in(x, x)", "exists y:U. in(y, x) & in(x, y)"}) {
    auto plain = strat(psi);
    auto with_degree = strat("d = 1 & (" + psi + ")");
    CHECK(plain.stratified == with_degree.stratified);
  }
}

TEST_CASE("separately bound variables with one name are typed apart") {
  // Each y is its own variable; the formula is stratified.
  auto r = strat("(exists y:U. in(y, x)) & (exists y:U. in(x, y))");
  CHECK(r.stratified);
  CHECK(r.typing->satisfies(r.constraints));
}

TEST_CASE("solver agrees with brute force on random formulas") {
  std::mt19937 rng(2024);
  for (int i = 0; i < 1500; ++i) {
    Formula f = oracle::random_strat_formula(rng, 1 + i % 4, 1 + i % 5);
    auto r = is_stratified(f);
    REQUIRE_MESSAGE(r.stratified == oracle::brute_force_stratified(f), print(f));
    if (r.stratified) {
      CHECK(r.typing->satisfies(r.constraints));
      int least = 1000;
      for (const auto& [k, v] : r.typing->assignment) least = std::min(least, v);
      CHECK(least == 0);
    } else {
      check_certificate(*r.certificate, r.constraints);
    }
  }
}

TEST_CASE("degree atoms never change the verdict") {
  std::mt19937 rng(99);
  for (int i = 0; i < 300; ++i) {
    Formula f = oracle::random_strat_formula(rng, 4, 1 + i % 5);
    Formula g = Formula::conj(f, Formula::deg_lt(Term::var("w", Sort::Degree), Term::literal(Degree(1, 2))));
    Formula h = Formula::disj(Formula::deg_eq(Term::literal(Degree::one()), Term::var("w", Sort::Degree)), f);
    CHECK(is_stratified(f).stratified == is_stratified(g).stratified);
    CHECK(is_stratified(f).stratified == is_stratified(h).stratified);
  }
}

TEST_CASE("conjunction of variable-disjoint stratified formulas stays stratified") {
  std::mt19937 rng(5);
  int checked = 0;
  for (int i = 0; i < 400 && checked < 100; ++i) {
    Formula f = oracle::random_strat_formula(rng, 2, 1 + i % 3);
    Formula g = oracle::random_strat_formula(rng, 2, 1 + i % 3);
    // Move g onto the other two variable names.
    for (auto [from, to] : {std::pair{"a", "c"}, std::pair{"b", "e"}}) {
      g = parse_formula(print(substitute(g, from, Term::var(to, Sort::Set))));
    }
    if (!is_stratified(f).stratified || !is_stratified(g).stratified) continue;
    std::set<std::string> nf, ng;
    for (const auto& e : oracle::edges_of(f)) nf.insert({e.a, e.b});
    bool disjoint = true;
    for (const auto& e : oracle::edges_of(g)) disjoint = disjoint && !nf.count(e.a) && !nf.count(e.b);
    if (!disjoint) continue;
    ++checked;
    CHECK(is_stratified(Formula::conj(f, g)).stratified);
  }
  CHECK(checked > 20);
}
