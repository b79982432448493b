#include <functional>
#include <random>

#include "doctest.h"
#include "twosort/error.hpp"
#include "twosort/randgen.hpp"
#include "twosort/structures.hpp"

using namespace twosort;

namespace {

const char* kTwoElem =
    "# two-element example\n"
    "[sig] rel R/2 ; funH f/1 ; funH c/0 ; funS g/1 ; funS d/2\n"
    "[domain] a b\n"
    "[rel R] (a b) (b b)\n"
    "[funH f] a->b b->a\n"
    "[funH c] ->a\n"
    "[funS g] a->1/4 b->3/4\n"
    "[funS d] (a a)->0 (a b)->1/2 (b a)->1/2 (b b)->0\n";

}  // namespace

TEST_CASE("loading a valid structure") {
  Structure m = load_structure(kTwoElem);
  CHECK(m.size() == 2);
  CHECK(m.rel_tables[0].count({0, 1}) == 1);
  CHECK(m.rel_tables[0].count({1, 0}) == 0);
  CHECK(m.cross_tables[m.cross_index("g")].at({0}) == Rat(1, 4));
  CHECK(m.cross_tables[m.cross_index("d")].at({0, 1}) == Rat(1, 2));
}

TEST_CASE("loader rejects partial and out-of-range tables") {
  CHECK_THROWS_AS(load_structure("[sig] funS g/1\n[domain] a b\n[funS g] a->1/4\n"), Error);
  try {
    load_structure("[sig] funS g/1\n[domain] a b\n[funS g] a->1/4\n");
  } catch (const Error& e) {
    CHECK(e.kind == Error::Kind::Totality);
  }
  CHECK_THROWS_AS(load_structure("[sig] funS g/1\n[domain] a\n[funS g] a->3/2\n"), Error);
  CHECK_THROWS_AS(load_structure("[sig] funS g/1\n[domain] a a\n[funS g] a->0\n"), Error);
  CHECK_THROWS_AS(load_structure("[sig] funS g/1\n[domain] a\n[funS q] a->0\n"), Error);
  CHECK_THROWS_AS(load_structure("[sig] funH f/1\n[domain] a\n[funH f] a->z\n"), Error);
  // Cross-sort symbols need at least one home-sort argument.
  CHECK_THROWS_AS(load_structure("[sig] funS g/0\n[domain] a\n"), Error);
}

TEST_CASE("home-sort terms evaluate by table lookup") {
  Structure m = load_structure(kTwoElem);
  Env env;
  CHECK(term_eval_H(m, TermH::func("c", {}), env) == 0);
  CHECK(term_eval_H(m, TermH::func("f", {TermH::param("a")}), env) == 1);
  CHECK(term_eval_H(m, TermH::func("f", {TermH::func("f", {TermH::param("a")})}), env) == 0);
  env.hvals["x"] = 1;
  CHECK(term_eval_H(m, TermH::var("x"), env) == 1);
  CHECK_THROWS_AS(term_eval_H(m, TermH::var("y"), env), Error);
}

TEST_CASE("space-sort terms evaluate exactly") {
  Structure m = load_structure(kTwoElem);
  Env env;
  CHECK(term_eval_S(m, parse_sterm("(cdiff 7/10 1/5)"), env) == Rat(1, 2));
  CHECK(term_eval_S(m, parse_sterm("(csum 3/10 9/10)"), env) == Rat(1));
  CHECK(term_eval_S(m, TermS::cross("g", {TermH::param("a")}), {}) == Rat(1, 4));

  env.svals["t"] = Rat(2, 5);
  CHECK(term_eval_S(m, parse_sterm("(compl t)"), env) == Rat(3, 5));
  CHECK(term_eval_S(m, parse_sterm("(scale 1/2 t)"), env) == Rat(1, 5));
  CHECK(term_eval_S(m, parse_sterm("(pwl ((0 0) (1/2 1) (1 0)) t)"), env) == Rat(4, 5));
  CHECK(term_eval_S(m, parse_sterm("(min t 1/4 3/4)"), env) == Rat(1, 4));
  CHECK(term_eval_S(m, parse_sterm("(max t 1/4)"), env) == Rat(2, 5));
}

TEST_CASE("space-sort term values stay in the unit interval") {
  std::mt19937_64 rng(31);
  for (int it = 0; it < 300; ++it) {
    Structure m = random_structure(rng, {});
    FormulaGenParams p;
    p.fancy_builtins = true;
    Formula phi = random_formula(rng, m, p);
    // Harvest terms from generated atoms.
    std::function<void(const Formula&)> walk = [&](const Formula& f) {
      if (f.kind == Formula::Kind::SAtom) {
        Env env;
        FreeVars fv = free_vars(f);
        for (const auto& v : fv.hvars) env.hvals[v] = static_cast<int>(rng() % m.size());
        for (const auto& v : fv.svars) env.svals[v] = random_grid_value(rng, 16);
        for (const auto& t : f.stuple) {
          Rat v = term_eval_S(m, t, env);
          CHECK(in_unit(v));
        }
      }
      for (const auto& ch : f.children) walk(ch);
    };
    walk(phi);
  }
}

TEST_CASE("tuple enumeration covers the space in lexicographic order") {
  auto ts = all_tuples(3, 2);
  CHECK(ts.size() == 9);
  CHECK(ts.front() == std::vector<int>{0, 0});
  CHECK(ts.back() == std::vector<int>{2, 2});
  CHECK(all_tuples(4, 0).size() == 1);
}
