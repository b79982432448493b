#include <random>

#include "doctest.h"
#include "twosort/error.hpp"
#include "twosort/randgen.hpp"
#include "twosort/structures.hpp"
#include "twosort/transforms.hpp"

using namespace twosort;

namespace {

const char* kSupExample =
    "(and (forallH x (in ((cdiff (g x) 3/4)) (point 0)))"
    " (forallS e (or (in (e) (point 0))"
    " (existsH x (in ((cdiff 3/4 (csum (g x) e))) (point 0))))))";

}  // namespace

TEST_CASE("parsing the grammar examples") {
  Formula atom = parse_formula("(in ((g x)) (box (0 1/2)))");
  CHECK(atom.kind == Formula::Kind::SAtom);
  CHECK(atom.stuple.size() == 1);
  CHECK(atom.stuple[0].kind == TermS::Kind::Cross);
  CHECK(atom.stuple[0].name == "g");
  CHECK(atom.sset == ClosedSet::make_box({{ {Rat(0), Rat(1, 2)} }}));

  Formula q = parse_formula(
      "(forallS e (or (in (e) (box (0 0))) (existsH x (in ((g x)) (box (0 1/2))))))");
  CHECK(q.kind == Formula::Kind::ForallS);
  CHECK(classify(q) == FormulaClass::FClass);
}

TEST_CASE("sort errors and diagnostics") {
  // x is bound at the home sort, then used in a space-sort position.
  CHECK_THROWS_AS(parse_formula("(forallH x (in (x) (box (0 1))))"), Error);
  try {
    parse_formula("(forallH x (in (x) (box (0 1))))");
  } catch (const Error& e) {
    CHECK(e.kind == Error::Kind::Sort);
    CHECK(e.line == 1);
  }
  // A name cannot be used at both sorts even when free.
  CHECK_THROWS_AS(parse_formula("(and (R v) (in (v) (box (0 1))))"), Error);
  // Literal outside the unit interval.
  CHECK_THROWS_AS(parse_formula("(in (3/2) (box (0 1)))"), Error);
  // Unbalanced input.
  CHECK_THROWS_AS(parse_formula("(and (R x)"), Error);
  CHECK_THROWS_AS(parse_formula("(in (x) (box (0 1/2)) extra)"), Error);
}

TEST_CASE("signature-checked parsing") {
  Structure m = load_structure(
      "[sig] rel R/2 ; funH f/1 ; funH c/0 ; funS g/1\n"
      "[domain] a b\n"
      "[rel R] (a b)\n"
      "[funH f] a->b b->a\n"
      "[funH c] ->a\n"
      "[funS g] a->1/4 b->3/4\n");
  CHECK(parse_formula("(R c (f x))", &m.sig).kind == Formula::Kind::HAtom);
  CHECK_THROWS_AS(parse_formula("(R x)", &m.sig), Error);          // arity
  CHECK_THROWS_AS(parse_formula("(Q x y)", &m.sig), Error);        // unknown relation
  CHECK_THROWS_AS(parse_formula("(in ((g x y)) (box (0 1)))", &m.sig), Error);
  CHECK_THROWS_AS(parse_formula("(in (c) (box (0 1)))", &m.sig), Error);  // constant is H-sort

  // With the domain, bare element names become parameters.
  Formula with_param = parse_formula("(in ((g a)) (point 1/4))", &m.sig, &m.domain);
  CHECK(with_param.stuple[0].hargs[0].kind == TermH::Kind::Param);
}

TEST_CASE("classification ladder") {
  CHECK(classify(parse_formula("(forallH x (existsH y (R x y)))")) == FormulaClass::LH);
  CHECK(classify(parse_formula("(not (forallH x (R x x)))")) == FormulaClass::LH);
  CHECK(classify(parse_formula("(in ((g x)) (box (0 1/2)))")) == FormulaClass::HClass);

  Formula sup = parse_formula(kSupExample);
  CHECK(classify(sup) == FormulaClass::FClass);

  CHECK(classify(parse_formula("(not (in ((g x)) (box (0 1/2))))")) == FormulaClass::LGeneral);
}

TEST_CASE("negation over a plain home-sort atom folds into the atom") {
  Formula neg = parse_formula("(not (R x y))");
  CHECK(neg.kind == Formula::Kind::HAtom);
  CHECK(neg.negated);
  CHECK(classify(neg) == FormulaClass::LH);
  CHECK(to_text(neg) == "(not (R x y))");

  // A double negation stays a Not node over the folded atom.
  Formula dneg = parse_formula("(not (not (R x y)))");
  CHECK(dneg.kind == Formula::Kind::Not);
  CHECK(parse_formula(to_text(dneg)) == dneg);
}

TEST_CASE("free variables per sort, sorted and duplicate-free") {
  FreeVars fv1 = free_vars(parse_formula("(in ((g x)) (box (0 1/2)))"));
  CHECK(fv1.hvars == std::vector<std::string>{"x"});
  CHECK(fv1.svars.empty());

  FreeVars fv2 = free_vars(parse_formula("(forallS e (in (e t) (diag 2)))"));
  CHECK(fv2.hvars.empty());
  CHECK(fv2.svars == std::vector<std::string>{"t"});

  FreeVars fv3 = free_vars(parse_formula("(forallH x (in ((g x)) (point 0)))"));
  CHECK(fv3.empty());

  FreeVars fv4 = free_vars(parse_formula("(and (R y x) (R x y))"));
  CHECK(fv4.hvars == std::vector<std::string>{"x", "y"});
}

TEST_CASE("substitution is capture-avoiding and validates bindings") {
  Formula phi = parse_formula("(in ((g x)) (box (0 1/2)))");
  Binding b;
  b.hvals["x"] = "a";
  Formula sub = substitute(phi, b);
  CHECK(sub.stuple[0].hargs[0] == TermH::param("a"));
  CHECK(free_vars(sub).empty());

  Formula point = parse_formula("(in (t) (point 0))");
  Binding bs;
  bs.svals["t"] = Rat(1, 4);
  CHECK(substitute(point, bs).stuple[0] == TermS::literal(Rat(1, 4)));

  // Bound occurrences stay untouched.
  Formula bound = parse_formula("(and (R x x) (forallH x (R x x)))");
  Binding bb;
  bb.hvals["x"] = "a";
  Formula out = substitute(bound, bb);
  CHECK(out.children[1] == bound.children[1]);
  CHECK(out.children[0].hargs[0] == TermH::param("a"));
}

TEST_CASE("substitution rejects unknown names and out-of-range values") {
  Formula phi = parse_formula("(in ((g x)) (box (0 1/2)))");
  Binding unknown;
  unknown.hvals["y"] = "a";
  CHECK_THROWS_AS(substitute(phi, unknown), Error);

  Formula point = parse_formula("(in (t) (point 0))");
  Binding bad;
  bad.svals["t"] = Rat(3, 2);
  CHECK_THROWS_AS(substitute(point, bad), Error);
}

TEST_CASE("printing round-trips structurally on random formulas") {
  std::mt19937_64 rng(23);
  for (int it = 0; it < 300; ++it) {
    Structure m = random_structure(rng, {});
    FormulaGenParams p;
    p.fancy_builtins = true;
    Formula phi = random_formula(rng, m, p);
    CAPTURE(to_text(phi));
    CHECK(parse_formula(to_text(phi)) == phi);
  }
}

TEST_CASE("class is monotone under the positive connectives") {
  std::mt19937_64 rng(29);
  for (int it = 0; it < 200; ++it) {
    Structure m = random_structure(rng, {});
    FormulaGenParams p;
    p.max_depth = 2;
    Formula a = random_formula(rng, m, p);
    Formula b = random_formula(rng, m, p);
    FormulaClass target = std::max(classify(a), classify(b));
    CHECK(classify(Formula::conj({a, b})) == target);
    CHECK(classify(Formula::disj({a, b})) == target);
    CHECK(classify(Formula::quant(Formula::Kind::ExistsH, "w9", a)) == classify(a));
    FormulaClass q = classify(Formula::quant(Formula::Kind::ForallS, "w9", a));
    CHECK(q == FormulaClass::FClass);
    if (classify(a) == FormulaClass::FClass)
      CHECK(classify(strong_negation(a, Rat(1, 8))) == FormulaClass::FClass);
  }
}

TEST_CASE("diag and point are parse-time abbreviations") {
  CHECK(parse_set("(diag 2)") == ClosedSet::diagonal2());
  CHECK(parse_set("(point 1/4 1/2)") ==
        ClosedSet::make_box({{ {Rat(1, 4), Rat(1, 4)}, {Rat(1, 2), Rat(1, 2)} }}));
  CHECK_THROWS_AS(parse_set("(diag 3)"), Error);
  // The expansion prints in primitive form and re-parses to the same tree.
  ClosedSet d = parse_set("(diag 2)");
  CHECK(parse_set(to_text(d)) == d);
}
