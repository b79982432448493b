#include "twosort/ref_eval.hpp"

#include <algorithm>

#include "twosort/error.hpp"

namespace twosort {

namespace {

int ref_hterm(const Structure& m, const TermH& t, const Env& env) {
  if (t.kind == TermH::Kind::Var) {
    auto it = env.hvals.find(t.name);
    if (it == env.hvals.end())
      throw Error(Error::Kind::UnknownSymbol, "ref_eval: unbound variable '" + t.name + "'");
    return it->second;
  }
  if (t.kind == TermH::Kind::Param) {
    int i = m.elem_index(t.name);
    if (i < 0) throw Error(Error::Kind::UnknownSymbol, "ref_eval: unknown element '" + t.name + "'");
    return i;
  }
  std::vector<int> args;
  for (const auto& a : t.args) args.push_back(ref_hterm(m, a, env));
  int f = m.hfunc_index(t.name);
  if (f < 0) throw Error(Error::Kind::UnknownSymbol, "ref_eval: unknown function '" + t.name + "'");
  return m.hfunc_tables[f].at(args);
}

Rat ref_pwl(const std::vector<std::pair<Rat, Rat>>& breaks, const Rat& v) {
  std::size_t i = 1;
  while (i + 1 < breaks.size() && breaks[i].first < v) ++i;
  const auto& [x0, y0] = breaks[i - 1];
  const auto& [x1, y1] = breaks[i];
  if (v <= x0) return y0;
  if (v >= x1) return y1;
  return y0 + (v - x0) * (y1 - y0) / (x1 - x0);
}

Rat ref_sterm(const Structure& m, const TermS& t, const Env& env) {
  switch (t.kind) {
    case TermS::Kind::Var: {
      auto it = env.svals.find(t.name);
      if (it == env.svals.end())
        throw Error(Error::Kind::UnknownSymbol, "ref_eval: unbound variable '" + t.name + "'");
      return it->second;
    }
    case TermS::Kind::Lit:
      return t.lit;
    case TermS::Kind::Cross: {
      std::vector<int> args;
      for (const auto& a : t.hargs) args.push_back(ref_hterm(m, a, env));
      int g = m.cross_index(t.name);
      if (g < 0)
        throw Error(Error::Kind::UnknownSymbol, "ref_eval: unknown cross function '" + t.name + "'");
      return m.cross_tables[g].at(args);
    }
    case TermS::Kind::Builtin: {
      std::vector<Rat> vals;
      for (const auto& a : t.sargs) vals.push_back(ref_sterm(m, a, env));
      switch (t.fn) {
        case TermS::Fn::CutSum: {
          Rat s = vals[0] + vals[1];
          return s > 1 ? Rat(1) : s;
        }
        case TermS::Fn::CutDiff: {
          Rat s = vals[0] - vals[1];
          return s < 0 ? Rat(0) : s;
        }
        case TermS::Fn::Min:
          return *std::min_element(vals.begin(), vals.end());
        case TermS::Fn::Max:
          return *std::max_element(vals.begin(), vals.end());
        case TermS::Fn::Compl:
          return 1 - vals[0];
        case TermS::Fn::Scale: {
          Rat s = t.lit * vals[0];
          return s > 1 ? Rat(1) : s;
        }
        case TermS::Fn::Pwl:
          return ref_pwl(t.breaks, vals[0]);
        default:
          break;
      }
      throw Error(Error::Kind::Input, "ref_eval: malformed builtin");
    }
  }
  throw Error(Error::Kind::Input, "ref_eval: malformed term");
}

bool ref_point_in(const ClosedSet& c, const std::vector<Rat>& p) {
  switch (c.kind) {
    case ClosedSet::Kind::Box:
      for (std::size_t i = 0; i < p.size(); ++i)
        if (p[i] < c.box.dims[i].lo || p[i] > c.box.dims[i].hi) return false;
      return true;
    case ClosedSet::Kind::Halfspace: {
      Rat dot = 0;
      for (std::size_t i = 0; i < p.size(); ++i) dot += c.coeffs[i] * p[i];
      return dot <= c.bound;
    }
    case ClosedSet::Kind::Union: {
      for (const auto& ch : c.children)
        if (ref_point_in(ch, p)) return true;
      return false;
    }
    case ClosedSet::Kind::Inter: {
      for (const auto& ch : c.children)
        if (!ref_point_in(ch, p)) return false;
      return true;
    }
  }
  return false;
}

}  // namespace

bool ref_eval_applicable(const Formula& phi) {
  if (phi.kind == Formula::Kind::ForallS || phi.kind == Formula::Kind::ExistsS) return false;
  for (const auto& ch : phi.children)
    if (!ref_eval_applicable(ch)) return false;
  return true;
}

bool ref_eval(const Structure& m, const Formula& phi, const Env& env) {
  switch (phi.kind) {
    case Formula::Kind::HAtom: {
      std::vector<int> args;
      for (const auto& t : phi.hargs) args.push_back(ref_hterm(m, t, env));
      int r = m.rel_index(phi.rel);
      if (r < 0) throw Error(Error::Kind::UnknownSymbol, "ref_eval: unknown relation '" + phi.rel + "'");
      bool in = m.rel_tables[r].count(args) > 0;
      return phi.negated ? !in : in;
    }
    case Formula::Kind::HEq: {
      bool eq = ref_hterm(m, phi.hargs[0], env) == ref_hterm(m, phi.hargs[1], env);
      return phi.negated ? !eq : eq;
    }
    case Formula::Kind::SAtom: {
      std::vector<Rat> p;
      for (const auto& t : phi.stuple) p.push_back(ref_sterm(m, t, env));
      return ref_point_in(phi.sset, p);
    }
    case Formula::Kind::Not:
      return !ref_eval(m, phi.children[0], env);
    case Formula::Kind::And:
      for (const auto& ch : phi.children)
        if (!ref_eval(m, ch, env)) return false;
      return true;
    case Formula::Kind::Or:
      for (const auto& ch : phi.children)
        if (ref_eval(m, ch, env)) return true;
      return false;
    case Formula::Kind::ForallH: {
      Env sub = env;
      for (int e = 0; e < m.size(); ++e) {
        sub.hvals[phi.var] = e;
        if (!ref_eval(m, phi.children[0], sub)) return false;
      }
      return true;
    }
    case Formula::Kind::ExistsH: {
      Env sub = env;
      for (int e = 0; e < m.size(); ++e) {
        sub.hvals[phi.var] = e;
        if (ref_eval(m, phi.children[0], sub)) return true;
      }
      return false;
    }
    case Formula::Kind::ForallS:
    case Formula::Kind::ExistsS:
      throw Error(Error::Kind::Precondition, "ref_eval cannot decide space-sort quantifiers");
  }
  throw Error(Error::Kind::Input, "ref_eval: malformed formula");
}

}  // namespace twosort
