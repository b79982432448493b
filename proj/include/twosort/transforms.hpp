#pragma once

#include <map>

#include "twosort/syntax.hpp"

namespace twosort {

// Per-atom fattening radii: a uniform radius with optional overrides keyed
// by the preorder index of the space-sort atom.
struct ApproxPolicy {
  Rat eps;
  std::map<std::size_t, Rat> per_atom;

  explicit ApproxPolicy(Rat e) : eps(std::move(e)) {}
};

// Weakening: every space-sort atom's set is replaced by its closed
// neighborhood at the policy radius; everything else is untouched. Requires
// a formula in the positive fragment (class F or below).
Formula approximate(const Formula& phi, const ApproxPolicy& policy);
Formula approximate(const Formula& phi, const Rat& eps);

// Dual transform: space-sort atom sets are replaced by disjoint sets at
// separation eps, home-sort atoms are negated, connectives and quantifiers
// of both sorts are dualized. The result is again in the positive fragment
// and implies the classical negation of phi.
Formula strong_negation(const Formula& phi, const Rat& eps);

// The interpolation chain at radius eps:
//   phi -> not tilde1 -> not tilde0 -> prime
// with tilde0 = strong_negation(phi, eps), tilde1 = strong_negation(phi,
// eps/2), prime = approximate(phi, eps); tilde1 weakens tilde0.
struct Interpolants {
  Formula tilde0, tilde1, prime;
};

Interpolants interpolants(const Formula& phi, const Rat& eps);

// Approximation refinement: each atom set becomes the intersection of its
// two fattenings, so the result implies both individual approximations.
Formula merge_approximations(const Formula& phi, const Rat& eps1, const Rat& eps2);

// The formula expressing sup over x of t(x) = tau, built from cut sums and
// cut differences:
//   forall x (t(x) - tau in {0})  and
//   forall eps (eps in {0} or exists x (tau - (t(x) + eps) in {0})).
// t must have exactly one free home-sort variable and no free space-sort
// variables.
Formula build_sup_formula(const TermS& t, const Rat& tau);
Formula build_sup_formula(const TermS& t, const std::string& tau_var);

// A term t(x, z) together with its declared variable split.
struct SimTerm {
  TermS term;
  std::vector<std::string> xvars;
  std::vector<std::string> zvars;
};

// The indistinguishability formula forall z (t(x,z), t(y,z)) in D, where y
// is a fresh renaming of x. With D the diagonal this is the term-wise
// equivalence; with a fattened diagonal it is its approximation. The free
// variables are xvars followed by their renamings.
struct SimFormula {
  Formula formula;
  std::vector<std::string> xvars, yvars;
};

SimFormula build_sim_formula(const SimTerm& t, const ClosedSet& D);

// Conjunction over several (term, neighborhood) pairs sharing one variable
// split.
SimFormula build_sim_conjunction(const std::vector<std::pair<SimTerm, ClosedSet>>& parts);

}  // namespace twosort
