#include <random>

#include "doctest.h"
#include "twosort/error.hpp"
#include "twosort/geometry.hpp"
#include "twosort/randgen.hpp"

using namespace twosort;

namespace {

ClosedSet box1(const char* lo, const char* hi) {
  return ClosedSet::make_box({{ {parse_rational(lo), parse_rational(hi)} }});
}

std::vector<Rat> grid(int den) {
  std::vector<Rat> out;
  for (int k = 0; k <= den; ++k) out.emplace_back(k, den);
  return out;
}

}  // namespace

TEST_CASE("membership on primitives and composites") {
  CHECK(set_member(box1("0", "1/2"), {Rat(1, 2)}));  // boundary included
  CHECK(set_member(ClosedSet::diagonal2(), {Rat(1, 3), Rat(1, 3)}));
  CHECK_FALSE(set_member(ClosedSet::diagonal2(), {Rat(1, 3), Rat(1, 2)}));
  ClosedSet u = ClosedSet::make_union({box1("0", "1/4"), box1("3/4", "1")});
  CHECK_FALSE(set_member(u, {Rat(1, 2)}));
  CHECK(set_member(u, {Rat(1, 8)}));
  CHECK_THROWS_AS(set_member(u, {Rat(0), Rat(0)}), Error);
}

TEST_CASE("fattening widens and clips") {
  CHECK(set_fatten(ClosedSet::make_point({Rat(0)}), Rat(1, 10)) == box1("0", "1/10"));
  CHECK(set_fatten(box1("2/5", "3/5"), Rat(1, 10)) == box1("3/10", "7/10"));

  ClosedSet hs = ClosedSet::make_halfspace({Rat(1), Rat(-1)}, Rat(0));
  ClosedSet fat = set_fatten(hs, Rat(1, 10));
  CHECK(fat.kind == ClosedSet::Kind::Halfspace);
  CHECK(fat.bound == Rat(1, 5));  // radius times the L1 norm of (1,-1)

  CHECK_THROWS_AS(set_fatten(hs, Rat(0)), Error);
}

TEST_CASE("strong complement of primitives") {
  CHECK(set_sneg(box1("0", "2/5"), Rat(1, 10)) == box1("1/2", "1"));

  ClosedSet expected = ClosedSet::make_union({box1("0", "1/4"), box1("3/4", "1")});
  CHECK(set_sneg(ClosedSet::make_point({Rat(1, 2)}), Rat(1, 4)) == expected);

  // Whole space: the complement is empty, and its complement is full again.
  ClosedSet whole = box1("0", "1");
  ClosedSet never = set_sneg(whole, Rat(1, 8));
  CHECK(never.is_canonical_empty());
  CHECK(set_sneg(never, Rat(1, 8)).is_canonical_full());
  for (const auto& p : grid(16)) CHECK_FALSE(set_member(never, {p}));
}

TEST_CASE("strong complement of a union, against grid enumeration") {
  // Independent route: a point is outside both parts by at least 1/8 exactly
  // when it lies in [3/8, 5/8]; verify on the denominator-16 grid.
  ClosedSet u = ClosedSet::make_union({box1("0", "1/4"), box1("3/4", "1")});
  ClosedSet neg = set_sneg(u, Rat(1, 8));
  for (const auto& p : grid(16)) {
    bool expected = p >= Rat(3, 8) && p <= Rat(5, 8);
    CHECK(set_member(neg, {p}) == expected);
  }
}

TEST_CASE("box relation on primitives and the documented union gap") {
  ClosedSet c = box1("0", "1/2");
  CHECK(box_test(c, {{ {Rat(0), Rat(1, 4)} }}) == BoxRelation::Inside);
  CHECK(box_test(c, {{ {Rat(3, 4), Rat(1)} }}) == BoxRelation::Outside);

  // The compositional test cannot see that the two halves cover the middle.
  ClosedSet cover = ClosedSet::make_union({box1("0", "1/2"), box1("1/2", "1")});
  CHECK(box_test(cover, {{ {Rat(1, 4), Rat(3, 4)} }}) == BoxRelation::Boundary);
}

TEST_CASE("hulls of the builtin library") {
  ContFunc eta = ContFunc::proj(0, 1);
  ContFunc cd = ContFunc::apply(ContFunc::Kind::CutDiff, {eta, ContFunc::constant(Rat(1, 2), 1)});
  CHECK(func_hull(cd, {{ {Rat(0), Rat(1)} }}) == Interval{Rat(0), Rat(1, 2)});

  ContFunc cs = ContFunc::apply(ContFunc::Kind::CutSum, {ContFunc::constant(Rat(1, 4), 1), eta});
  CHECK(func_hull(cs, {{ {Rat(1, 2), Rat(1)} }}) == Interval{Rat(3, 4), Rat(1)});

  ContFunc tent = ContFunc::pwl({{Rat(0), Rat(0)}, {Rat(1, 2), Rat(1)}, {Rat(1), Rat(0)}}, eta);
  IntervalBox b{{ {Rat(1, 4), Rat(3, 4)} }};
  // Independent route: extrema over endpoints and interior breakpoints.
  Rat lo = func_eval(tent, {Rat(1, 4)}), hi = lo;
  for (const Rat& v : {Rat(3, 4), Rat(1, 2)}) {
    lo = std::min(lo, func_eval(tent, {v}));
    hi = std::max(hi, func_eval(tent, {v}));
  }
  CHECK(lo == Rat(1, 2));
  CHECK(hi == Rat(1));
  CHECK(func_hull(tent, b) == Interval{lo, hi});
}

TEST_CASE("fattening composes additively and keeps members") {
  std::mt19937_64 rng(7);
  for (int it = 0; it < 200; ++it) {
    SetGenParams sp;
    sp.dim = 1 + static_cast<int>(rng() % 2);
    ClosedSet c = random_set(rng, sp);
    Rat e1(1, 1 << (1 + rng() % 4)), e2(1, 1 << (1 + rng() % 4));
    CHECK(set_fatten(set_fatten(c, e1), e2) == set_fatten(c, e1 + e2));

    ClosedSet fat = set_fatten(c, e1);
    for (const auto& v : grid(8)) {
      std::vector<Rat> p(sp.dim, v);
      if (set_member(c, p)) CHECK(set_member(fat, p));
    }
  }
}

TEST_CASE("gap and disjointness between fattening and strong complement") {
  std::mt19937_64 rng(11);
  for (int it = 0; it < 200; ++it) {
    SetGenParams sp;
    sp.dim = 1 + static_cast<int>(rng() % 2);
    ClosedSet c = random_set(rng, sp);
    Rat eps(1, 1 << (1 + rng() % 4));
    ClosedSet neg = set_sneg(c, eps);
    ClosedSet fat = set_fatten(c, eps / 2);
    int den = sp.dim == 1 ? 64 : 16;
    for (const auto& u : grid(den)) {
      if (sp.dim == 1) {
        CHECK_FALSE((set_member(c, {u}) && set_member(neg, {u})));
        CHECK_FALSE((set_member(fat, {u}) && set_member(neg, {u})));
      } else {
        for (const auto& v : grid(den)) {
          CHECK_FALSE((set_member(c, {u, v}) && set_member(neg, {u, v})));
          CHECK_FALSE((set_member(fat, {u, v}) && set_member(neg, {u, v})));
        }
      }
    }
  }
}

TEST_CASE("strong complements shrink as the radius grows") {
  std::mt19937_64 rng(13);
  for (int it = 0; it < 100; ++it) {
    SetGenParams sp;
    sp.dim = 1;
    ClosedSet c = random_set(rng, sp);
    Rat e1(1, 16), e2(1, 4);
    ClosedSet n1 = set_sneg(c, e1), n2 = set_sneg(c, e2);
    for (const auto& p : grid(32))
      if (set_member(n2, {p})) CHECK(set_member(n1, {p}));
  }
}

TEST_CASE("box test claims are confirmed by membership") {
  std::mt19937_64 rng(17);
  for (int it = 0; it < 300; ++it) {
    SetGenParams sp;
    sp.dim = 1;
    ClosedSet c = random_set(rng, sp);
    Rat lo = random_grid_value(rng, 16), hi = random_grid_value(rng, 16);
    if (lo > hi) std::swap(lo, hi);
    IntervalBox b{{ {lo, hi} }};
    BoxRelation rel = box_test(c, b);
    for (int k = 0; k <= 8; ++k) {
      Rat p = lo + Rat(k, 8) * (hi - lo);
      if (rel == BoxRelation::Inside) CHECK(set_member(c, {p}));
      if (rel == BoxRelation::Outside) CHECK_FALSE(set_member(c, {p}));
    }
  }
}

TEST_CASE("hull encloses sampled values and is tight on monotone primitives") {
  std::mt19937_64 rng(19);
  for (int it = 0; it < 200; ++it) {
    int arity = 1 + static_cast<int>(rng() % 2);
    ContFunc eta = ContFunc::proj(0, arity);
    ContFunc f;
    switch (rng() % 4) {
      case 0:
        f = ContFunc::apply(ContFunc::Kind::CutSum,
                            {eta, ContFunc::constant(random_grid_value(rng, 8), arity)});
        break;
      case 1:
        f = ContFunc::apply(ContFunc::Kind::CutDiff,
                            {eta, ContFunc::constant(random_grid_value(rng, 8), arity)});
        break;
      case 2:
        f = ContFunc::apply(ContFunc::Kind::Compl, {eta});
        break;
      default:
        f = ContFunc::scale(Rat(1 + rng() % 3, 2), eta);
        break;
    }
    IntervalBox b;
    for (int i = 0; i < arity; ++i) {
      Rat lo = random_grid_value(rng, 8), hi = random_grid_value(rng, 8);
      if (lo > hi) std::swap(lo, hi);
      b.dims.push_back({lo, hi});
    }
    Interval hull = func_hull(f, b);
    Rat seen_lo = Rat(1), seen_hi = Rat(0);
    for (int k = 0; k <= 8; ++k) {
      std::vector<Rat> p;
      for (int i = 0; i < arity; ++i) p.push_back(b.dims[i].lo + Rat(k, 8) * b.dims[i].width());
      Rat v = func_eval(f, p);
      CHECK(hull.lo <= v);
      CHECK(v <= hull.hi);
      seen_lo = std::min(seen_lo, v);
      seen_hi = std::max(seen_hi, v);
    }
    // Monotone in the single projection: endpoints are attained.
    CHECK(hull.lo == seen_lo);
    CHECK(hull.hi == seen_hi);
  }
}

TEST_CASE("bisection splits the widest dimension, lowest index first") {
  IntervalBox b{{ {Rat(0), Rat(1, 2)}, {Rat(0), Rat(1)} }};
  auto [lo, hi] = box_bisect(b);
  CHECK(lo.dims[1].hi == Rat(1, 2));
  CHECK(hi.dims[1].lo == Rat(1, 2));
  CHECK(lo.dims[0] == b.dims[0]);

  IntervalBox tie{{ {Rat(0), Rat(1, 2)}, {Rat(1, 2), Rat(1)} }};
  auto [tl, th] = box_bisect(tie);
  CHECK(tl.dims[0].hi == Rat(1, 4));
  CHECK(th.dims[0].lo == Rat(1, 4));
}

TEST_CASE("set intersection simplifies boxes and collapses equal operands") {
  ClosedSet a = box1("3/10", "7/10"), b = box1("2/5", "3/5");
  CHECK(set_intersect(a, b) == box1("2/5", "3/5"));
  CHECK(set_intersect(a, a) == a);
  CHECK(set_intersect(box1("0", "1/4"), box1("1/2", "1")).is_canonical_empty());
  ClosedSet hs = ClosedSet::make_halfspace({Rat(1)}, Rat(1, 2));
  ClosedSet mixed = set_intersect(a, hs);
  CHECK(mixed.kind == ClosedSet::Kind::Inter);
}
