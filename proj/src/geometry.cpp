#include "twosort/geometry.hpp"

#include <algorithm>

#include "twosort/error.hpp"

namespace twosort {

Rat IntervalBox::max_width() const {
  Rat w = 0;
  for (const auto& iv : dims) w = std::max(w, iv.width());
  return w;
}

std::pair<IntervalBox, IntervalBox> box_bisect(const IntervalBox& b) {
  int split = 0;
  Rat best = -1;
  for (int i = 0; i < b.dim(); ++i) {
    Rat w = b.dims[i].width();
    if (w > best) {
      best = w;
      split = i;
    }
  }
  Rat mid = (b.dims[split].lo + b.dims[split].hi) / 2;
  IntervalBox lohalf = b, hihalf = b;
  lohalf.dims[split].hi = mid;
  hihalf.dims[split].lo = mid;
  return {lohalf, hihalf};
}

ClosedSet ClosedSet::make_box(IntervalBox b) {
  if (b.dim() == 0) throw Error(Error::Kind::Dimension, "zero-dimensional box");
  for (const auto& iv : b.dims) {
    if (!(iv.lo <= iv.hi)) throw Error(Error::Kind::Range, "box interval with lo > hi");
    if (!in_unit(iv.lo) || !in_unit(iv.hi))
      throw Error(Error::Kind::Range, "box endpoint outside [0,1]");
  }
  ClosedSet c;
  c.kind = Kind::Box;
  c.dimension = b.dim();
  c.box = std::move(b);
  return c;
}

ClosedSet ClosedSet::make_point(const std::vector<Rat>& p) {
  IntervalBox b;
  for (const auto& v : p) b.dims.push_back({v, v});
  return make_box(std::move(b));
}

ClosedSet ClosedSet::make_halfspace(std::vector<Rat> a, Rat b) {
  if (a.empty()) throw Error(Error::Kind::Dimension, "halfspace needs coefficients");
  ClosedSet c;
  c.kind = Kind::Halfspace;
  c.dimension = static_cast<int>(a.size());
  c.coeffs = std::move(a);
  c.bound = std::move(b);
  return c;
}

static ClosedSet make_node(ClosedSet::Kind k, std::vector<ClosedSet> cs) {
  if (cs.empty()) throw Error(Error::Kind::Dimension, "union/intersection needs children");
  int d = cs.front().dim();
  for (const auto& c : cs)
    if (c.dim() != d) throw Error(Error::Kind::Dimension, "mixed dimensions in set expression");
  ClosedSet c;
  c.kind = k;
  c.dimension = d;
  c.children = std::move(cs);
  return c;
}

ClosedSet ClosedSet::make_union(std::vector<ClosedSet> cs) { return make_node(Kind::Union, std::move(cs)); }
ClosedSet ClosedSet::make_inter(std::vector<ClosedSet> cs) { return make_node(Kind::Inter, std::move(cs)); }

ClosedSet ClosedSet::make_empty(int dim) {
  return make_halfspace(std::vector<Rat>(dim, Rat(0)), Rat(-1));
}

ClosedSet ClosedSet::make_full(int dim) {
  return make_halfspace(std::vector<Rat>(dim, Rat(0)), Rat(0));
}

ClosedSet ClosedSet::diagonal2() {
  std::vector<ClosedSet> hs;
  hs.push_back(make_halfspace({Rat(1), Rat(-1)}, Rat(0)));
  hs.push_back(make_halfspace({Rat(-1), Rat(1)}, Rat(0)));
  return make_inter(std::move(hs));
}

static bool zero_coeffs(const ClosedSet& c) {
  for (const auto& a : c.coeffs)
    if (a != 0) return false;
  return true;
}

bool ClosedSet::is_canonical_empty() const {
  return kind == Kind::Halfspace && zero_coeffs(*this) && bound < 0;
}

bool ClosedSet::is_canonical_full() const {
  return kind == Kind::Halfspace && zero_coeffs(*this) && bound >= 0;
}

bool set_member(const ClosedSet& c, const std::vector<Rat>& p) {
  if (static_cast<int>(p.size()) != c.dim())
    throw Error(Error::Kind::Dimension, "point dimension does not match set");
  switch (c.kind) {
    case ClosedSet::Kind::Box:
      for (int i = 0; i < c.dim(); ++i)
        if (!c.box.dims[i].contains(p[i])) return false;
      return true;
    case ClosedSet::Kind::Halfspace: {
      Rat dot = 0;
      for (int i = 0; i < c.dim(); ++i) dot += c.coeffs[i] * p[i];
      return dot <= c.bound;
    }
    case ClosedSet::Kind::Union:
      for (const auto& ch : c.children)
        if (set_member(ch, p)) return true;
      return false;
    case ClosedSet::Kind::Inter:
      for (const auto& ch : c.children)
        if (!set_member(ch, p)) return false;
      return true;
  }
  return false;
}

static Rat l1_norm(const std::vector<Rat>& a) {
  Rat s = 0;
  for (const auto& x : a) s += rat_abs(x);
  return s;
}

ClosedSet set_fatten(const ClosedSet& c, const Rat& eps) {
  if (!(eps > 0)) throw Error(Error::Kind::Precondition, "fattening radius must be positive");
  switch (c.kind) {
    case ClosedSet::Kind::Box: {
      IntervalBox b = c.box;
      for (auto& iv : b.dims) {
        iv.lo = clamp_unit(iv.lo - eps);
        iv.hi = clamp_unit(iv.hi + eps);
      }
      return ClosedSet::make_box(std::move(b));
    }
    case ClosedSet::Kind::Halfspace: {
      // All-zero coefficients denote the full or empty set; both are clopen
      // relative to the cube, so they are neighborhoods of themselves.
      if (zero_coeffs(c)) return c;
      return ClosedSet::make_halfspace(c.coeffs, c.bound + eps * l1_norm(c.coeffs));
    }
    case ClosedSet::Kind::Union:
    case ClosedSet::Kind::Inter: {
      std::vector<ClosedSet> cs;
      cs.reserve(c.children.size());
      for (const auto& ch : c.children) cs.push_back(set_fatten(ch, eps));
      return c.kind == ClosedSet::Kind::Union ? ClosedSet::make_union(std::move(cs))
                                              : ClosedSet::make_inter(std::move(cs));
    }
  }
  return c;
}

ClosedSet set_sneg(const ClosedSet& c, const Rat& eps) {
  if (!(eps > 0)) throw Error(Error::Kind::Precondition, "separation radius must be positive");
  switch (c.kind) {
    case ClosedSet::Kind::Box: {
      // Outer slabs at sup-distance >= eps from the box, one pair per axis.
      std::vector<ClosedSet> slabs;
      for (int i = 0; i < c.dim(); ++i) {
        Rat lo_cut = c.box.dims[i].lo - eps;
        if (lo_cut >= 0) {
          IntervalBox slab;
          for (int j = 0; j < c.dim(); ++j)
            slab.dims.push_back(j == i ? Interval{Rat(0), lo_cut} : Interval{Rat(0), Rat(1)});
          slabs.push_back(ClosedSet::make_box(std::move(slab)));
        }
        Rat hi_cut = c.box.dims[i].hi + eps;
        if (hi_cut <= 1) {
          IntervalBox slab;
          for (int j = 0; j < c.dim(); ++j)
            slab.dims.push_back(j == i ? Interval{hi_cut, Rat(1)} : Interval{Rat(0), Rat(1)});
          slabs.push_back(ClosedSet::make_box(std::move(slab)));
        }
      }
      if (slabs.empty()) return ClosedSet::make_empty(c.dim());
      if (slabs.size() == 1) return slabs.front();
      return ClosedSet::make_union(std::move(slabs));
    }
    case ClosedSet::Kind::Halfspace: {
      if (zero_coeffs(c))
        return c.bound >= 0 ? ClosedSet::make_empty(c.dim()) : ClosedSet::make_full(c.dim());
      std::vector<Rat> neg;
      neg.reserve(c.coeffs.size());
      for (const auto& a : c.coeffs) neg.push_back(-a);
      return ClosedSet::make_halfspace(std::move(neg), -c.bound - eps * l1_norm(c.coeffs));
    }
    case ClosedSet::Kind::Union: {
      std::vector<ClosedSet> cs;
      cs.reserve(c.children.size());
      for (const auto& ch : c.children) cs.push_back(set_sneg(ch, eps));
      return ClosedSet::make_inter(std::move(cs));
    }
    case ClosedSet::Kind::Inter: {
      std::vector<ClosedSet> cs;
      cs.reserve(c.children.size());
      for (const auto& ch : c.children) cs.push_back(set_sneg(ch, eps));
      return ClosedSet::make_union(std::move(cs));
    }
  }
  return c;
}

ClosedSet set_intersect(const ClosedSet& a, const ClosedSet& b) {
  if (a.dim() != b.dim()) throw Error(Error::Kind::Dimension, "intersecting sets of different dimension");
  if (a == b) return a;
  if (a.kind == ClosedSet::Kind::Box && b.kind == ClosedSet::Kind::Box) {
    IntervalBox out;
    for (int i = 0; i < a.dim(); ++i) {
      Rat lo = std::max(a.box.dims[i].lo, b.box.dims[i].lo);
      Rat hi = std::min(a.box.dims[i].hi, b.box.dims[i].hi);
      if (lo > hi) return ClosedSet::make_empty(a.dim());
      out.dims.push_back({lo, hi});
    }
    return ClosedSet::make_box(std::move(out));
  }
  std::vector<ClosedSet> cs;
  cs.push_back(a);
  cs.push_back(b);
  return ClosedSet::make_inter(std::move(cs));
}

BoxRelation box_test(const ClosedSet& c, const IntervalBox& b) {
  if (b.dim() != c.dim()) throw Error(Error::Kind::Dimension, "box dimension does not match set");
  switch (c.kind) {
    case ClosedSet::Kind::Box: {
      bool inside = true;
      for (int i = 0; i < c.dim(); ++i) {
        const Interval& q = b.dims[i];
        const Interval& s = c.box.dims[i];
        if (q.hi < s.lo || q.lo > s.hi) return BoxRelation::Outside;
        if (!(s.lo <= q.lo && q.hi <= s.hi)) inside = false;
      }
      return inside ? BoxRelation::Inside : BoxRelation::Boundary;
    }
    case ClosedSet::Kind::Halfspace: {
      Rat lo = 0, hi = 0;
      for (int i = 0; i < c.dim(); ++i) {
        const Rat& a = c.coeffs[i];
        if (a >= 0) {
          lo += a * b.dims[i].lo;
          hi += a * b.dims[i].hi;
        } else {
          lo += a * b.dims[i].hi;
          hi += a * b.dims[i].lo;
        }
      }
      if (hi <= c.bound) return BoxRelation::Inside;
      if (lo > c.bound) return BoxRelation::Outside;
      return BoxRelation::Boundary;
    }
    case ClosedSet::Kind::Union: {
      bool all_outside = true;
      for (const auto& ch : c.children) {
        BoxRelation r = box_test(ch, b);
        if (r == BoxRelation::Inside) return BoxRelation::Inside;
        if (r != BoxRelation::Outside) all_outside = false;
      }
      return all_outside ? BoxRelation::Outside : BoxRelation::Boundary;
    }
    case ClosedSet::Kind::Inter: {
      bool all_inside = true;
      for (const auto& ch : c.children) {
        BoxRelation r = box_test(ch, b);
        if (r == BoxRelation::Outside) return BoxRelation::Outside;
        if (r != BoxRelation::Inside) all_inside = false;
      }
      return all_inside ? BoxRelation::Inside : BoxRelation::Boundary;
    }
  }
  return BoxRelation::Boundary;
}

ContFunc ContFunc::constant(Rat v, int arity) {
  ContFunc f;
  f.kind = Kind::Const;
  f.arity = arity;
  f.value = std::move(v);
  return f;
}

ContFunc ContFunc::proj(int index, int arity) {
  if (index < 0 || index >= arity) throw Error(Error::Kind::Dimension, "projection index out of range");
  ContFunc f;
  f.kind = Kind::Proj;
  f.arity = arity;
  f.index = index;
  return f;
}

ContFunc ContFunc::apply(Kind k, std::vector<ContFunc> args) {
  if (args.empty()) throw Error(Error::Kind::Arity, "builtin function needs arguments");
  switch (k) {
    case Kind::CutSum:
    case Kind::CutDiff:
      if (args.size() != 2) throw Error(Error::Kind::Arity, "cut sum/difference are binary");
      break;
    case Kind::Compl:
      if (args.size() != 1) throw Error(Error::Kind::Arity, "complement is unary");
      break;
    case Kind::Min:
    case Kind::Max:
      break;
    default:
      throw Error(Error::Kind::Arity, "apply expects a builtin connective");
  }
  int arity = args.front().arity;
  for (const auto& a : args)
    if (a.arity != arity) throw Error(Error::Kind::Arity, "mixed arity in function expression");
  ContFunc f;
  f.kind = k;
  f.arity = arity;
  f.args = std::move(args);
  return f;
}

ContFunc ContFunc::scale(Rat factor, ContFunc arg) {
  if (factor < 0) throw Error(Error::Kind::Range, "scale factor must be nonnegative");
  ContFunc f;
  f.kind = Kind::Scale;
  f.arity = arg.arity;
  f.value = std::move(factor);
  f.args.push_back(std::move(arg));
  return f;
}

ContFunc ContFunc::pwl(std::vector<std::pair<Rat, Rat>> breaks, ContFunc arg) {
  if (breaks.size() < 2) throw Error(Error::Kind::Range, "pwl needs at least two breakpoints");
  if (breaks.front().first != 0 || breaks.back().first != 1)
    throw Error(Error::Kind::Range, "pwl breakpoints must start at 0 and end at 1");
  for (std::size_t i = 0; i < breaks.size(); ++i) {
    if (!in_unit(breaks[i].second)) throw Error(Error::Kind::Range, "pwl value outside [0,1]");
    if (i > 0 && !(breaks[i - 1].first < breaks[i].first))
      throw Error(Error::Kind::Range, "pwl breakpoints must be strictly increasing");
  }
  ContFunc f;
  f.kind = Kind::Pwl;
  f.arity = arg.arity;
  f.breaks = std::move(breaks);
  f.args.push_back(std::move(arg));
  return f;
}

Rat pwl_at(const std::vector<std::pair<Rat, Rat>>& breaks, const Rat& v) {
  for (std::size_t i = 1; i < breaks.size(); ++i) {
    if (v <= breaks[i].first) {
      const auto& [x0, y0] = breaks[i - 1];
      const auto& [x1, y1] = breaks[i];
      return y0 + (v - x0) * (y1 - y0) / (x1 - x0);
    }
  }
  return breaks.back().second;
}

Interval func_hull(const ContFunc& f, const IntervalBox& b) {
  if (b.dim() != f.arity) throw Error(Error::Kind::Arity, "box dimension does not match function arity");
  switch (f.kind) {
    case ContFunc::Kind::Const:
      return {f.value, f.value};
    case ContFunc::Kind::Proj:
      return b.dims[f.index];
    case ContFunc::Kind::CutSum: {
      Interval u = func_hull(f.args[0], b), v = func_hull(f.args[1], b);
      return {cut_sum(u.lo, v.lo), cut_sum(u.hi, v.hi)};
    }
    case ContFunc::Kind::CutDiff: {
      Interval u = func_hull(f.args[0], b), v = func_hull(f.args[1], b);
      return {cut_diff(u.lo, v.hi), cut_diff(u.hi, v.lo)};
    }
    case ContFunc::Kind::Min: {
      Interval out{Rat(1), Rat(1)};
      for (const auto& a : f.args) {
        Interval u = func_hull(a, b);
        out.lo = std::min(out.lo, u.lo);
        out.hi = std::min(out.hi, u.hi);
      }
      return out;
    }
    case ContFunc::Kind::Max: {
      Interval out{Rat(0), Rat(0)};
      for (const auto& a : f.args) {
        Interval u = func_hull(a, b);
        out.lo = std::max(out.lo, u.lo);
        out.hi = std::max(out.hi, u.hi);
      }
      return out;
    }
    case ContFunc::Kind::Compl: {
      Interval u = func_hull(f.args[0], b);
      return {1 - u.hi, 1 - u.lo};
    }
    case ContFunc::Kind::Scale: {
      Interval u = func_hull(f.args[0], b);
      return {clamp_unit(f.value * u.lo), clamp_unit(f.value * u.hi)};
    }
    case ContFunc::Kind::Pwl: {
      Interval u = func_hull(f.args[0], b);
      Rat lo = pwl_at(f.breaks, u.lo), hi = lo;
      auto take = [&](const Rat& y) {
        lo = std::min(lo, y);
        hi = std::max(hi, y);
      };
      take(pwl_at(f.breaks, u.hi));
      for (const auto& [x, y] : f.breaks)
        if (u.lo < x && x < u.hi) take(y);
      return {lo, hi};
    }
  }
  return {Rat(0), Rat(1)};
}

Rat func_eval(const ContFunc& f, const std::vector<Rat>& p) {
  if (static_cast<int>(p.size()) != f.arity)
    throw Error(Error::Kind::Arity, "point dimension does not match function arity");
  switch (f.kind) {
    case ContFunc::Kind::Const:
      return f.value;
    case ContFunc::Kind::Proj:
      return p[f.index];
    case ContFunc::Kind::CutSum:
      return cut_sum(func_eval(f.args[0], p), func_eval(f.args[1], p));
    case ContFunc::Kind::CutDiff:
      return cut_diff(func_eval(f.args[0], p), func_eval(f.args[1], p));
    case ContFunc::Kind::Min: {
      Rat out = 1;
      for (const auto& a : f.args) out = std::min(out, func_eval(a, p));
      return out;
    }
    case ContFunc::Kind::Max: {
      Rat out = 0;
      for (const auto& a : f.args) out = std::max(out, func_eval(a, p));
      return out;
    }
    case ContFunc::Kind::Compl:
      return 1 - func_eval(f.args[0], p);
    case ContFunc::Kind::Scale:
      return clamp_unit(f.value * func_eval(f.args[0], p));
    case ContFunc::Kind::Pwl:
      return pwl_at(f.breaks, func_eval(f.args[0], p));
  }
  return Rat(0);
}

}  // namespace twosort
