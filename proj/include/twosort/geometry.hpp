#pragma once

#include <utility>
#include <vector>

#include "twosort/rational.hpp"

namespace twosort {

struct Interval {
  Rat lo, hi;  // lo <= hi, both inside [0,1]
  bool operator==(const Interval&) const = default;
  Rat width() const { return hi - lo; }
  bool contains(const Rat& v) const { return lo <= v && v <= hi; }
};

// Axis-aligned box in [0,1]^n.
struct IntervalBox {
  std::vector<Interval> dims;
  bool operator==(const IntervalBox&) const = default;
  int dim() const { return static_cast<int>(dims.size()); }
  Rat max_width() const;
};

// Splits the widest dimension at its midpoint; ties broken by lowest index.
std::pair<IntervalBox, IntervalBox> box_bisect(const IntervalBox& b);

// Expression denoting a closed subset of [0,1]^n.
//
// Primitives are boxes and halfspaces {eta : a . eta <= b}; composites are
// finite unions and intersections, all of the same dimension. A halfspace
// with all-zero coefficients is the canonical empty set (b < 0) or the
// canonical full set (b >= 0).
struct ClosedSet {
  enum class Kind { Box, Halfspace, Union, Inter };

  Kind kind = Kind::Box;
  int dimension = 1;
  IntervalBox box;                  // Box
  std::vector<Rat> coeffs;          // Halfspace
  Rat bound;                        // Halfspace
  std::vector<ClosedSet> children;  // Union / Inter, nonempty

  bool operator==(const ClosedSet&) const = default;
  int dim() const { return dimension; }

  static ClosedSet make_box(IntervalBox b);
  static ClosedSet make_point(const std::vector<Rat>& p);
  static ClosedSet make_halfspace(std::vector<Rat> a, Rat b);
  static ClosedSet make_union(std::vector<ClosedSet> cs);
  static ClosedSet make_inter(std::vector<ClosedSet> cs);
  static ClosedSet make_empty(int dim);
  static ClosedSet make_full(int dim);
  static ClosedSet diagonal2();  // {(a,a)} in [0,1]^2, as halfspace pair

  bool is_canonical_empty() const;
  bool is_canonical_full() const;
};

// Exact membership of a rational point.
bool set_member(const ClosedSet& c, const std::vector<Rat>& p);

// Closed neighborhood of c, relative to [0,1]^n, at sup-metric radius eps.
ClosedSet set_fatten(const ClosedSet& c, const Rat& eps);

// A closed set disjoint from c, at separation eps (the dual transform).
ClosedSet set_sneg(const ClosedSet& c, const Rat& eps);

// Intersection, simplified when both operands are boxes or structurally equal.
ClosedSet set_intersect(const ClosedSet& a, const ClosedSet& b);

enum class BoxRelation { Inside, Outside, Boundary };

// Sound three-valued test: Inside => b subset of c, Outside => b and c
// disjoint, Boundary makes no claim.
BoxRelation box_test(const ClosedSet& c, const IntervalBox& b);

// Continuous function [0,1]^k -> [0,1] built from the term library.
// Every node has an exact interval extension: the hull of a rational box is
// a rational interval computed without rounding.
struct ContFunc {
  enum class Kind { Const, Proj, CutSum, CutDiff, Min, Max, Compl, Scale, Pwl };

  Kind kind = Kind::Const;
  int arity = 0;
  Rat value;                                // Const; Scale factor
  int index = 0;                            // Proj
  std::vector<ContFunc> args;
  std::vector<std::pair<Rat, Rat>> breaks;  // Pwl knots, x ascending from 0 to 1

  bool operator==(const ContFunc&) const = default;

  static ContFunc constant(Rat v, int arity);
  static ContFunc proj(int index, int arity);
  static ContFunc apply(Kind k, std::vector<ContFunc> args);
  static ContFunc scale(Rat factor, ContFunc arg);
  static ContFunc pwl(std::vector<std::pair<Rat, Rat>> breaks, ContFunc arg);
};

// Exact enclosure of f over b; equals the image for single library
// primitives over independent coordinates.
Interval func_hull(const ContFunc& f, const IntervalBox& b);

// Exact point evaluation.
Rat func_eval(const ContFunc& f, const std::vector<Rat>& p);

// Value of the piecewise-linear interpolant at v (shared with the parser's
// breakpoint validation).
Rat pwl_at(const std::vector<std::pair<Rat, Rat>>& breaks, const Rat& v);

}  // namespace twosort
