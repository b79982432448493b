#include "twosort/syntax.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "twosort/error.hpp"

namespace twosort {

TermH TermH::var(std::string n) {
  TermH t;
  t.kind = Kind::Var;
  t.name = std::move(n);
  return t;
}

TermH TermH::param(std::string n) {
  TermH t;
  t.kind = Kind::Param;
  t.name = std::move(n);
  return t;
}

TermH TermH::func(std::string n, std::vector<TermH> a) {
  TermH t;
  t.kind = Kind::Func;
  t.name = std::move(n);
  t.args = std::move(a);
  return t;
}

TermS TermS::var(std::string n) {
  TermS t;
  t.kind = Kind::Var;
  t.name = std::move(n);
  return t;
}

TermS TermS::literal(Rat v) {
  if (!in_unit(v)) throw Error(Error::Kind::Range, "rational literal outside [0,1]");
  TermS t;
  t.kind = Kind::Lit;
  t.lit = std::move(v);
  return t;
}

TermS TermS::cross(std::string g, std::vector<TermH> args) {
  if (args.empty()) throw Error(Error::Kind::Arity, "cross-sort function needs home-sort arguments");
  TermS t;
  t.kind = Kind::Cross;
  t.name = std::move(g);
  t.hargs = std::move(args);
  return t;
}

TermS TermS::builtin(Fn fn, std::vector<TermS> args) {
  switch (fn) {
    case Fn::CutSum:
    case Fn::CutDiff:
      if (args.size() != 2) throw Error(Error::Kind::Arity, "cut sum/difference are binary");
      break;
    case Fn::Compl:
      if (args.size() != 1) throw Error(Error::Kind::Arity, "complement is unary");
      break;
    case Fn::Min:
    case Fn::Max:
      if (args.empty()) throw Error(Error::Kind::Arity, "min/max need at least one argument");
      break;
    default:
      throw Error(Error::Kind::Arity, "scale/pwl take their own constructors");
  }
  TermS t;
  t.kind = Kind::Builtin;
  t.fn = fn;
  t.sargs = std::move(args);
  return t;
}

TermS TermS::scaled(Rat factor, TermS arg) {
  if (factor < 0) throw Error(Error::Kind::Range, "scale factor must be nonnegative");
  TermS t;
  t.kind = Kind::Builtin;
  t.fn = Fn::Scale;
  t.lit = std::move(factor);
  t.sargs.push_back(std::move(arg));
  return t;
}

TermS TermS::pwl(std::vector<std::pair<Rat, Rat>> breaks, TermS arg) {
  // Reuse the kernel's validation.
  ContFunc::pwl(breaks, ContFunc::proj(0, 1));
  TermS t;
  t.kind = Kind::Builtin;
  t.fn = Fn::Pwl;
  t.breaks = std::move(breaks);
  t.sargs.push_back(std::move(arg));
  return t;
}

Formula Formula::hatom(std::string rel, std::vector<TermH> args, bool negated) {
  Formula f;
  f.kind = Kind::HAtom;
  f.rel = std::move(rel);
  f.hargs = std::move(args);
  f.negated = negated;
  return f;
}

Formula Formula::heq(TermH a, TermH b, bool negated) {
  Formula f;
  f.kind = Kind::HEq;
  f.hargs.push_back(std::move(a));
  f.hargs.push_back(std::move(b));
  f.negated = negated;
  return f;
}

Formula Formula::satom(std::vector<TermS> tuple, ClosedSet set) {
  if (tuple.empty()) throw Error(Error::Kind::Dimension, "space-sort atom needs a term tuple");
  if (static_cast<int>(tuple.size()) != set.dim())
    throw Error(Error::Kind::Dimension, "tuple length does not match set dimension");
  Formula f;
  f.kind = Kind::SAtom;
  f.stuple = std::move(tuple);
  f.sset = std::move(set);
  return f;
}

Formula Formula::lnot(Formula g) {
  Formula f;
  f.kind = Kind::Not;
  f.children.push_back(std::move(g));
  return f;
}

Formula Formula::conj(std::vector<Formula> fs) {
  if (fs.empty()) throw Error(Error::Kind::Arity, "conjunction needs children");
  Formula f;
  f.kind = Kind::And;
  f.children = std::move(fs);
  return f;
}

Formula Formula::disj(std::vector<Formula> fs) {
  if (fs.empty()) throw Error(Error::Kind::Arity, "disjunction needs children");
  Formula f;
  f.kind = Kind::Or;
  f.children = std::move(fs);
  return f;
}

Formula Formula::quant(Kind k, std::string var, Formula body) {
  Formula f;
  f.kind = k;
  f.var = std::move(var);
  f.children.push_back(std::move(body));
  return f;
}

bool mentions_space_sort(const Formula& phi) {
  switch (phi.kind) {
    case Formula::Kind::HAtom:
    case Formula::Kind::HEq:
      return false;
    case Formula::Kind::SAtom:
      return true;
    case Formula::Kind::ForallS:
    case Formula::Kind::ExistsS:
      return true;
    default:
      for (const auto& ch : phi.children)
        if (mentions_space_sort(ch)) return true;
      return false;
  }
}

FormulaClass classify(const Formula& phi) {
  if (!mentions_space_sort(phi)) return FormulaClass::LH;
  switch (phi.kind) {
    case Formula::Kind::HAtom:
    case Formula::Kind::HEq:
      return FormulaClass::LH;
    case Formula::Kind::SAtom:
      return FormulaClass::HClass;
    case Formula::Kind::Not:
      // A negation over anything that touches the space sort leaves the
      // positive fragment.
      return FormulaClass::LGeneral;
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      FormulaClass out = FormulaClass::LH;
      for (const auto& ch : phi.children) out = std::max(out, classify(ch));
      return out;
    }
    case Formula::Kind::ForallH:
    case Formula::Kind::ExistsH:
      return classify(phi.children[0]);
    case Formula::Kind::ForallS:
    case Formula::Kind::ExistsS: {
      FormulaClass body = classify(phi.children[0]);
      if (body == FormulaClass::LGeneral) return FormulaClass::LGeneral;
      return FormulaClass::FClass;
    }
  }
  return FormulaClass::LGeneral;
}

std::string class_str(FormulaClass c) {
  switch (c) {
    case FormulaClass::LH:
      return "LH";
    case FormulaClass::HClass:
      return "H";
    case FormulaClass::FClass:
      return "F";
    case FormulaClass::LGeneral:
      return "general";
  }
  return "?";
}

void collect_free_vars(const TermH& t, std::vector<std::string>& hv) {
  if (t.kind == TermH::Kind::Var) hv.push_back(t.name);
  for (const auto& a : t.args) collect_free_vars(a, hv);
}

void collect_free_vars(const TermS& t, std::vector<std::string>& hv, std::vector<std::string>& sv) {
  if (t.kind == TermS::Kind::Var) sv.push_back(t.name);
  for (const auto& a : t.hargs) collect_free_vars(a, hv);
  for (const auto& a : t.sargs) collect_free_vars(a, hv, sv);
}

namespace {

void collect_free(const Formula& phi, std::set<std::string> bound_h, std::set<std::string> bound_s,
                  std::set<std::string>& hv, std::set<std::string>& sv) {
  auto add_h = [&](const std::vector<std::string>& vs) {
    for (const auto& v : vs)
      if (!bound_h.count(v)) hv.insert(v);
  };
  auto add_s = [&](const std::vector<std::string>& vs) {
    for (const auto& v : vs)
      if (!bound_s.count(v)) sv.insert(v);
  };
  switch (phi.kind) {
    case Formula::Kind::HAtom:
    case Formula::Kind::HEq: {
      std::vector<std::string> h;
      for (const auto& t : phi.hargs) collect_free_vars(t, h);
      add_h(h);
      return;
    }
    case Formula::Kind::SAtom: {
      std::vector<std::string> h, s;
      for (const auto& t : phi.stuple) collect_free_vars(t, h, s);
      add_h(h);
      add_s(s);
      return;
    }
    case Formula::Kind::ForallH:
    case Formula::Kind::ExistsH:
      bound_h.insert(phi.var);
      collect_free(phi.children[0], std::move(bound_h), std::move(bound_s), hv, sv);
      return;
    case Formula::Kind::ForallS:
    case Formula::Kind::ExistsS:
      bound_s.insert(phi.var);
      collect_free(phi.children[0], std::move(bound_h), std::move(bound_s), hv, sv);
      return;
    default:
      for (const auto& ch : phi.children) collect_free(ch, bound_h, bound_s, hv, sv);
      return;
  }
}

}  // namespace

FreeVars free_vars(const Formula& phi) {
  std::set<std::string> hv, sv;
  collect_free(phi, {}, {}, hv, sv);
  FreeVars out;
  out.hvars.assign(hv.begin(), hv.end());
  out.svars.assign(sv.begin(), sv.end());
  return out;
}

TermH substitute(const TermH& t, const Binding& b) {
  switch (t.kind) {
    case TermH::Kind::Var: {
      auto it = b.hvals.find(t.name);
      if (it != b.hvals.end()) return TermH::param(it->second);
      return t;
    }
    case TermH::Kind::Param:
      return t;
    case TermH::Kind::Func: {
      TermH out = t;
      for (auto& a : out.args) a = substitute(a, b);
      return out;
    }
  }
  return t;
}

TermS substitute(const TermS& t, const Binding& b) {
  switch (t.kind) {
    case TermS::Kind::Var: {
      auto it = b.svals.find(t.name);
      if (it != b.svals.end()) {
        if (!in_unit(it->second))
          throw Error(Error::Kind::Range, "binding for " + t.name + " outside [0,1]");
        return TermS::literal(it->second);
      }
      return t;
    }
    case TermS::Kind::Lit:
      return t;
    default: {
      TermS out = t;
      for (auto& a : out.hargs) a = substitute(a, b);
      for (auto& a : out.sargs) a = substitute(a, b);
      return out;
    }
  }
}

namespace {

Formula substitute_rec(const Formula& phi, Binding b) {
  Formula out = phi;
  switch (phi.kind) {
    case Formula::Kind::HAtom:
    case Formula::Kind::HEq:
      for (auto& t : out.hargs) t = substitute(t, b);
      return out;
    case Formula::Kind::SAtom:
      for (auto& t : out.stuple) t = substitute(t, b);
      return out;
    case Formula::Kind::ForallH:
    case Formula::Kind::ExistsH:
      b.hvals.erase(phi.var);
      out.children[0] = substitute_rec(phi.children[0], std::move(b));
      return out;
    case Formula::Kind::ForallS:
    case Formula::Kind::ExistsS:
      b.svals.erase(phi.var);
      out.children[0] = substitute_rec(phi.children[0], std::move(b));
      return out;
    default:
      for (auto& ch : out.children) ch = substitute_rec(ch, b);
      return out;
  }
}

}  // namespace

Formula substitute(const Formula& phi, const Binding& b) {
  FreeVars fv = free_vars(phi);
  for (const auto& [name, v] : b.hvals) {
    (void)v;
    if (!std::binary_search(fv.hvars.begin(), fv.hvars.end(), name))
      throw Error(Error::Kind::UnknownSymbol, "no free home-sort variable named " + name);
  }
  for (const auto& [name, v] : b.svals) {
    if (!std::binary_search(fv.svars.begin(), fv.svars.end(), name))
      throw Error(Error::Kind::UnknownSymbol, "no free space-sort variable named " + name);
    if (!in_unit(v)) throw Error(Error::Kind::Range, "binding for " + name + " outside [0,1]");
  }
  return substitute_rec(phi, b);
}

std::string to_text(const TermH& t) {
  if (t.kind != TermH::Kind::Func) return t.name;
  std::string out = "(" + t.name;
  for (const auto& a : t.args) out += " " + to_text(a);
  return out + ")";
}

namespace {

std::string breaks_text(const std::vector<std::pair<Rat, Rat>>& breaks) {
  std::string out = "(";
  for (std::size_t i = 0; i < breaks.size(); ++i) {
    if (i) out += " ";
    out += "(" + rat_str(breaks[i].first) + " " + rat_str(breaks[i].second) + ")";
  }
  return out + ")";
}

}  // namespace

std::string to_text(const TermS& t) {
  switch (t.kind) {
    case TermS::Kind::Var:
      return t.name;
    case TermS::Kind::Lit:
      return rat_str(t.lit);
    case TermS::Kind::Cross: {
      std::string out = "(" + t.name;
      for (const auto& a : t.hargs) out += " " + to_text(a);
      return out + ")";
    }
    case TermS::Kind::Builtin: {
      std::string head;
      switch (t.fn) {
        case TermS::Fn::CutSum: head = "csum"; break;
        case TermS::Fn::CutDiff: head = "cdiff"; break;
        case TermS::Fn::Min: head = "min"; break;
        case TermS::Fn::Max: head = "max"; break;
        case TermS::Fn::Compl: head = "compl"; break;
        case TermS::Fn::Scale: head = "scale"; break;
        case TermS::Fn::Pwl: head = "pwl"; break;
        default: head = "?"; break;
      }
      std::string out = "(" + head;
      if (t.fn == TermS::Fn::Scale) out += " " + rat_str(t.lit);
      if (t.fn == TermS::Fn::Pwl) out += " " + breaks_text(t.breaks);
      for (const auto& a : t.sargs) out += " " + to_text(a);
      return out + ")";
    }
  }
  return "?";
}

std::string to_text(const ClosedSet& c) {
  switch (c.kind) {
    case ClosedSet::Kind::Box: {
      std::string out = "(box";
      for (const auto& iv : c.box.dims)
        out += " (" + rat_str(iv.lo) + " " + rat_str(iv.hi) + ")";
      return out + ")";
    }
    case ClosedSet::Kind::Halfspace: {
      std::string out = "(halfspace (";
      for (std::size_t i = 0; i < c.coeffs.size(); ++i) {
        if (i) out += " ";
        out += rat_str(c.coeffs[i]);
      }
      return out + ") " + rat_str(c.bound) + ")";
    }
    case ClosedSet::Kind::Union:
    case ClosedSet::Kind::Inter: {
      std::string out = c.kind == ClosedSet::Kind::Union ? "(union" : "(inter";
      for (const auto& ch : c.children) out += " " + to_text(ch);
      return out + ")";
    }
  }
  return "?";
}

std::string to_text(const Formula& phi) {
  switch (phi.kind) {
    case Formula::Kind::HAtom: {
      std::string atom = "(" + phi.rel;
      for (const auto& t : phi.hargs) atom += " " + to_text(t);
      atom += ")";
      return phi.negated ? "(not " + atom + ")" : atom;
    }
    case Formula::Kind::HEq: {
      std::string atom = "(= " + to_text(phi.hargs[0]) + " " + to_text(phi.hargs[1]) + ")";
      return phi.negated ? "(not " + atom + ")" : atom;
    }
    case Formula::Kind::SAtom: {
      std::string out = "(in (";
      for (std::size_t i = 0; i < phi.stuple.size(); ++i) {
        if (i) out += " ";
        out += to_text(phi.stuple[i]);
      }
      return out + ") " + to_text(phi.sset) + ")";
    }
    case Formula::Kind::Not:
      return "(not " + to_text(phi.children[0]) + ")";
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      std::string out = phi.kind == Formula::Kind::And ? "(and" : "(or";
      for (const auto& ch : phi.children) out += " " + to_text(ch);
      return out + ")";
    }
    case Formula::Kind::ForallH:
      return "(forallH " + phi.var + " " + to_text(phi.children[0]) + ")";
    case Formula::Kind::ExistsH:
      return "(existsH " + phi.var + " " + to_text(phi.children[0]) + ")";
    case Formula::Kind::ForallS:
      return "(forallS " + phi.var + " " + to_text(phi.children[0]) + ")";
    case Formula::Kind::ExistsS:
      return "(existsS " + phi.var + " " + to_text(phi.children[0]) + ")";
  }
  return "?";
}

}  // namespace twosort
