#include "twosort/transforms.hpp"

#include <algorithm>
#include <set>

#include "twosort/error.hpp"

namespace twosort {

namespace {

void require_positive_fragment(const Formula& phi, const char* what) {
  if (classify(phi) == FormulaClass::LGeneral)
    throw Error(Error::Kind::Precondition,
                std::string(what) + " requires a formula in the positive fragment");
}

Formula approximate_rec(const Formula& phi, const ApproxPolicy& policy, std::size_t& atom_index) {
  Formula out = phi;
  if (phi.kind == Formula::Kind::SAtom) {
    auto it = policy.per_atom.find(atom_index);
    const Rat& eps = it != policy.per_atom.end() ? it->second : policy.eps;
    ++atom_index;
    out.sset = set_fatten(phi.sset, eps);
    return out;
  }
  for (auto& ch : out.children) ch = approximate_rec(ch, policy, atom_index);
  return out;
}

}  // namespace

Formula approximate(const Formula& phi, const ApproxPolicy& policy) {
  if (!(policy.eps > 0)) throw Error(Error::Kind::Precondition, "radius must be positive");
  for (const auto& [k, r] : policy.per_atom) {
    (void)k;
    if (!(r > 0)) throw Error(Error::Kind::Precondition, "radius must be positive");
  }
  require_positive_fragment(phi, "approximate");
  std::size_t atom_index = 0;
  return approximate_rec(phi, policy, atom_index);
}

Formula approximate(const Formula& phi, const Rat& eps) {
  return approximate(phi, ApproxPolicy(eps));
}

Formula strong_negation(const Formula& phi, const Rat& eps) {
  if (!(eps > 0)) throw Error(Error::Kind::Precondition, "radius must be positive");
  require_positive_fragment(phi, "strong_negation");
  Formula out = phi;
  switch (phi.kind) {
    case Formula::Kind::HAtom:
    case Formula::Kind::HEq:
      out.negated = !phi.negated;
      return out;
    case Formula::Kind::SAtom:
      out.sset = set_sneg(phi.sset, eps);
      return out;
    case Formula::Kind::Not:
      // Only reachable over a pure home-sort subtree; the strong negation of
      // a classical negation is the formula itself.
      return phi.children[0];
    case Formula::Kind::And:
    case Formula::Kind::Or:
      out.kind = phi.kind == Formula::Kind::And ? Formula::Kind::Or : Formula::Kind::And;
      for (auto& ch : out.children) ch = strong_negation(ch, eps);
      return out;
    case Formula::Kind::ForallH:
      out.kind = Formula::Kind::ExistsH;
      out.children[0] = strong_negation(phi.children[0], eps);
      return out;
    case Formula::Kind::ExistsH:
      out.kind = Formula::Kind::ForallH;
      out.children[0] = strong_negation(phi.children[0], eps);
      return out;
    case Formula::Kind::ForallS:
      out.kind = Formula::Kind::ExistsS;
      out.children[0] = strong_negation(phi.children[0], eps);
      return out;
    case Formula::Kind::ExistsS:
      out.kind = Formula::Kind::ForallS;
      out.children[0] = strong_negation(phi.children[0], eps);
      return out;
  }
  throw Error(Error::Kind::Input, "malformed formula");
}

Interpolants interpolants(const Formula& phi, const Rat& eps) {
  if (!(eps > 0)) throw Error(Error::Kind::Precondition, "radius must be positive");
  Interpolants out{strong_negation(phi, eps), strong_negation(phi, eps / 2), approximate(phi, eps)};
  return out;
}

namespace {

Formula merge_rec(const Formula& phi, const Rat& eps1, const Rat& eps2) {
  Formula out = phi;
  if (phi.kind == Formula::Kind::SAtom) {
    out.sset = set_intersect(set_fatten(phi.sset, eps1), set_fatten(phi.sset, eps2));
    return out;
  }
  for (auto& ch : out.children) ch = merge_rec(ch, eps1, eps2);
  return out;
}

}  // namespace

Formula merge_approximations(const Formula& phi, const Rat& eps1, const Rat& eps2) {
  if (!(eps1 > 0) || !(eps2 > 0)) throw Error(Error::Kind::Precondition, "radius must be positive");
  require_positive_fragment(phi, "merge_approximations");
  return merge_rec(phi, eps1, eps2);
}

namespace {

Formula build_sup(const TermS& t, TermS tau) {
  std::vector<std::string> hv, sv;
  collect_free_vars(t, hv, sv);
  std::sort(hv.begin(), hv.end());
  hv.erase(std::unique(hv.begin(), hv.end()), hv.end());
  if (hv.size() != 1 || !sv.empty())
    throw Error(Error::Kind::Precondition,
                "sup term must have exactly one free home-sort variable and no space-sort ones");
  const std::string& x = hv[0];

  std::string epsname = "eps";
  while ((tau.kind == TermS::Kind::Var && tau.name == epsname) || epsname == x) epsname += "0";

  ClosedSet zero = ClosedSet::make_point({Rat(0)});

  // forall x (t - tau in {0})
  Formula upper = Formula::quant(
      Formula::Kind::ForallH, x,
      Formula::satom({TermS::builtin(TermS::Fn::CutDiff, {t, tau})}, zero));

  // forall eps (eps in {0} or exists x (tau - (t + eps) in {0}))
  TermS reach = TermS::builtin(
      TermS::Fn::CutDiff, {tau, TermS::builtin(TermS::Fn::CutSum, {t, TermS::var(epsname)})});
  Formula lower = Formula::quant(
      Formula::Kind::ForallS, epsname,
      Formula::disj({Formula::satom({TermS::var(epsname)}, zero),
                     Formula::quant(Formula::Kind::ExistsH, x, Formula::satom({reach}, zero))}));

  return Formula::conj({upper, lower});
}

}  // namespace

Formula build_sup_formula(const TermS& t, const Rat& tau) {
  return build_sup(t, TermS::literal(tau));
}

Formula build_sup_formula(const TermS& t, const std::string& tau_var) {
  return build_sup(t, TermS::var(tau_var));
}

namespace {

TermH rename_h(const TermH& t, const std::map<std::string, std::string>& ren) {
  TermH out = t;
  if (t.kind == TermH::Kind::Var) {
    auto it = ren.find(t.name);
    if (it != ren.end()) out.name = it->second;
    return out;
  }
  for (auto& a : out.args) a = rename_h(a, ren);
  return out;
}

TermS rename_h(const TermS& t, const std::map<std::string, std::string>& ren) {
  TermS out = t;
  for (auto& a : out.hargs) a = rename_h(a, ren);
  for (auto& a : out.sargs) a = rename_h(a, ren);
  return out;
}

void collect_names(const TermS& t, std::set<std::string>& names) {
  std::vector<std::string> hv, sv;
  collect_free_vars(t, hv, sv);
  names.insert(hv.begin(), hv.end());
  names.insert(sv.begin(), sv.end());
}

}  // namespace

namespace {

// One fresh y-name per x-name, avoiding every name used by any part.
std::map<std::string, std::string> fresh_renaming(const std::vector<std::string>& xvars,
                                                  std::set<std::string> taken) {
  std::map<std::string, std::string> ren;
  for (const auto& x : xvars) {
    std::string y = x + "_y";
    while (taken.count(y)) y += "_";
    taken.insert(y);
    ren[x] = y;
  }
  return ren;
}

Formula sim_conjunct(const SimTerm& t, const ClosedSet& D,
                     const std::map<std::string, std::string>& ren) {
  if (D.dim() != 2)
    throw Error(Error::Kind::Dimension, "neighborhood of the diagonal must have dimension 2");
  Formula body = Formula::satom({t.term, rename_h(t.term, ren)}, D);
  for (auto it = t.zvars.rbegin(); it != t.zvars.rend(); ++it)
    body = Formula::quant(Formula::Kind::ForallH, *it, std::move(body));
  return body;
}

}  // namespace

SimFormula build_sim_formula(const SimTerm& t, const ClosedSet& D) {
  return build_sim_conjunction({{t, D}});
}

SimFormula build_sim_conjunction(const std::vector<std::pair<SimTerm, ClosedSet>>& parts) {
  if (parts.empty()) throw Error(Error::Kind::Precondition, "empty conjunction");
  const std::vector<std::string>& xvars = parts[0].first.xvars;
  if (xvars.empty()) throw Error(Error::Kind::Precondition, "sim term needs at least one x variable");

  std::set<std::string> taken;
  for (const auto& [t, D] : parts) {
    (void)D;
    if (t.xvars != xvars)
      throw Error(Error::Kind::Precondition, "conjunction parts must share the x variables");
    collect_names(t.term, taken);
    taken.insert(t.xvars.begin(), t.xvars.end());
    taken.insert(t.zvars.begin(), t.zvars.end());
  }
  auto ren = fresh_renaming(xvars, std::move(taken));

  std::vector<Formula> conjuncts;
  conjuncts.reserve(parts.size());
  for (const auto& [t, D] : parts) conjuncts.push_back(sim_conjunct(t, D, ren));

  std::vector<std::string> yvars;
  for (const auto& x : xvars) yvars.push_back(ren.at(x));
  Formula out = conjuncts.size() == 1 ? std::move(conjuncts[0]) : Formula::conj(std::move(conjuncts));
  return {std::move(out), xvars, std::move(yvars)};
}

}  // namespace twosort
