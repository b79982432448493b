#include <random>

#include "doctest.h"
#include "twosort/error.hpp"
#include "twosort/randgen.hpp"
#include "twosort/ref_eval.hpp"
#include "twosort/semantics.hpp"
#include "twosort/transforms.hpp"

using namespace twosort;

namespace {

const char* kTwoElem =
    "[sig] funS g/1\n"
    "[domain] a b\n"
    "[funS g] a->1/4 b->3/4\n";

Structure two_elem() { return load_structure(kTwoElem); }

}  // namespace

TEST_CASE("home-sort quantifiers are decided exactly") {
  Structure m = two_elem();
  Verdict ex = eval(m, parse_formula("(existsH x (in ((g x)) (box (0 1/2))))", &m.sig), {});
  CHECK(ex.is_true());
  CHECK(ex.resolution == Rat(1));

  Verdict fa = eval(m, parse_formula("(forallH x (in ((g x)) (box (0 1/2))))", &m.sig), {});
  CHECK(fa.is_false());
  REQUIRE(!fa.witness.empty());
  CHECK(fa.witness[0] == std::pair<std::string, std::string>{"x", "b"});
}

TEST_CASE("branch-and-bound decides the clamped-sum sentence") {
  // Grid oracle at step 1/256: for eta <= 1/2 the cut sum 1/4+eta stays
  // within [0,3/4], and above 1/2 the first disjunct holds, so the sentence
  // is true everywhere.
  for (int k = 0; k <= 256; ++k) {
    Rat eta(k, 256);
    bool in_upper = eta >= Rat(1, 2);
    bool sum_small = cut_sum(Rat(1, 4), eta) <= Rat(3, 4);
    CHECK((in_upper || sum_small));
  }

  Structure m = two_elem();
  Formula phi = parse_formula(
      "(forallS e (or (in (e) (box (1/2 1))) (in ((csum (g a) e)) (box (0 3/4)))))", &m.sig,
      &m.domain);
  EvalOptions opt;
  opt.delta = Rat(1, 64);
  Verdict v = eval(m, phi, {}, opt);
  CHECK(v.is_true());
  CHECK(v.resolution < Rat(1));  // at least one split was needed
}

TEST_CASE("sup-recovery formula from the running example") {
  Structure m = two_elem();
  TermS t = TermS::cross("g", {TermH::var("x")});
  // Brute force: the largest table value is 3/4.
  Rat best = 0;
  for (const auto& [k, v] : m.cross_tables[0]) {
    (void)k;
    best = std::max(best, v);
  }
  CHECK(best == Rat(3, 4));

  CHECK(eval(m, build_sup_formula(t, Rat(3, 4)), {}).is_true());
  CHECK(eval(m, build_sup_formula(t, Rat(1, 2)), {}).is_false());
  CHECK(eval(m, build_sup_formula(t, Rat(1, 4)), {}).is_false());
}

TEST_CASE("space-sort counterexamples come with rational witnesses") {
  Structure m = two_elem();
  Formula phi = parse_formula("(forallS e (in (e) (box (0 1/2))))");
  Verdict v = eval(m, phi, {});
  CHECK(v.is_false());
  REQUIRE(v.witness.size() == 1);
  CHECK(v.witness[0].first == "e");
  Rat w = parse_rational(v.witness[0].second);
  CHECK(w > Rat(1, 2));  // the witness point really refutes the atom
}

TEST_CASE("verdict bookkeeping: budget exhaustion and delta validation") {
  Structure m = two_elem();
  // Certifiable only below width 1/4; a two-box budget gives up first.
  Formula phi = parse_formula("(forallS e (or (in (e) (box (0 1/8))) (in (e) (box (1/8 1)))))");
  EvalOptions tiny;
  tiny.max_boxes = 2;
  Verdict v = eval(m, phi, {}, tiny);
  CHECK(v.is_unknown());
  CHECK(v.budget_hit);

  EvalOptions bad;
  bad.delta = Rat(0);
  CHECK_THROWS_AS(eval(m, phi, {}, bad), Error);
  CHECK_THROWS_AS(eval(m, parse_formula("(in ((g x)) (point 0))", &m.sig), {}), Error);
}

TEST_CASE("evaluator agrees with the serial reference on the exact fragment") {
  std::mt19937_64 rng(37);
  for (int it = 0; it < 400; ++it) {
    Structure m = random_structure(rng, {});
    FormulaGenParams p;
    p.max_depth = 4;
    p.allow_squant = false;
    p.fancy_builtins = true;
    Formula phi = random_formula(rng, m, p);
    Env env = random_env(rng, m, phi);
    Verdict v = eval(m, phi, env);
    REQUIRE(!v.is_unknown());
    CHECK(v.is_true() == ref_eval(m, phi, env));
  }
}

TEST_CASE("verdicts survive resolution refinement") {
  std::mt19937_64 rng(41);
  int decided = 0;
  for (int it = 0; it < 150; ++it) {
    Structure m = random_structure(rng, {});
    Formula phi = random_formula(rng, m, {});
    Env env = random_env(rng, m, phi);
    EvalOptions coarse, fine;
    coarse.delta = Rat(1, 8);
    fine.delta = Rat(1, 128);
    Verdict vc = eval(m, phi, env, coarse);
    if (vc.is_unknown()) continue;
    ++decided;
    CHECK(eval(m, phi, env, fine).value == vc.value);
  }
  CHECK(decided > 50);
}

TEST_CASE("approximate satisfaction on atoms") {
  Structure m = two_elem();
  EpsSchedule sched = EpsSchedule::standard();
  Binding bind;
  bind.hvals["x"] = "a";

  Formula hit = substitute(parse_formula("(in ((g x)) (point 1/4))", &m.sig), bind);
  ApproxSatResult ok = eval_approx_sat(m, hit, {}, sched);
  CHECK(ok.verdict.is_true());
  CHECK(!ok.refuting_eps);

  Formula miss = substitute(parse_formula("(in ((g x)) (point 3/4))", &m.sig), bind);
  ApproxSatResult bad = eval_approx_sat(m, miss, {}, sched);
  CHECK(bad.verdict.is_false());
  REQUIRE(bad.refuting_eps);
  CHECK(*bad.refuting_eps == Rat(1, 4));  // first radius below the distance 1/2
}

TEST_CASE("approximate satisfaction matches plain truth on the exact fragment") {
  std::mt19937_64 rng(43);
  EpsSchedule sched = EpsSchedule::standard();
  for (int it = 0; it < 200; ++it) {
    Structure m = random_structure(rng, {});
    FormulaGenParams p;
    p.max_depth = 2;
    p.allow_squant = false;
    p.allow_hquant = false;
    Formula phi = random_formula(rng, m, p);
    Env env = random_env(rng, m, phi);
    bool truth = eval(m, phi, env).is_true();
    Verdict approx = eval_approx_sat(m, phi, env, sched).verdict;
    REQUIRE(!approx.is_unknown());
    CHECK(approx.is_true() == truth);
  }
}

TEST_CASE("schedule validation") {
  EpsSchedule sched = EpsSchedule::standard();
  CHECK(sched.steps.front() == Rat(1, 2));
  CHECK(sched.finest() == Rat(1, 64));
  EpsSchedule bad;
  bad.steps = {Rat(1, 4), Rat(1, 2)};
  CHECK_THROWS_AS(bad.validate(), Error);
  EpsSchedule empty;
  CHECK_THROWS_AS(empty.validate(), Error);
}

TEST_CASE("kleene negation is sound under interval uncertainty") {
  Structure m = two_elem();
  // not (forallS s: s in [0,1]) is certainly false.
  Verdict v = eval(m, parse_formula("(not (forallS s (in (s) (box (0 1)))))"), {});
  CHECK(v.is_false());
  // Negating an undecidable body stays unknown.
  Verdict u = eval(m, parse_formula("(not (forallS s (in (s s) (diag 2))))"), {});
  CHECK(u.is_unknown());
}
