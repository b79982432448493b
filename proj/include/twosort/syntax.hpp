#pragma once

#include <map>
#include <string>
#include <vector>

#include "twosort/geometry.hpp"

namespace twosort {

struct Signature;  // structures.hpp

enum class SortTag { H, S };

// Home-sort term: variable, named element (a parameter introduced by
// substitution), or function application. Constants are 0-ary functions.
struct TermH {
  enum class Kind { Var, Param, Func };

  Kind kind = Kind::Var;
  std::string name;
  std::vector<TermH> args;  // Func only

  bool operator==(const TermH&) const = default;

  static TermH var(std::string n);
  static TermH param(std::string n);
  static TermH func(std::string n, std::vector<TermH> a);
};

// Space-sort term: S-variable, rational literal in [0,1], cross-sort
// application g(h-terms), or builtin continuous function over S-terms.
struct TermS {
  enum class Kind { Var, Lit, Cross, Builtin };
  enum class Fn { None, CutSum, CutDiff, Min, Max, Compl, Scale, Pwl };

  Kind kind = Kind::Var;
  Fn fn = Fn::None;
  std::string name;  // Var / Cross
  Rat lit;           // Lit value; Scale factor
  std::vector<TermH> hargs;
  std::vector<TermS> sargs;
  std::vector<std::pair<Rat, Rat>> breaks;  // Pwl

  bool operator==(const TermS&) const = default;

  static TermS var(std::string n);
  static TermS literal(Rat v);
  static TermS cross(std::string g, std::vector<TermH> args);
  static TermS builtin(Fn fn, std::vector<TermS> args);
  static TermS scaled(Rat factor, TermS arg);
  static TermS pwl(std::vector<std::pair<Rat, Rat>> breaks, TermS arg);
};

// Formula of the two-sorted language. Negated home-sort atoms carry a flag
// rather than a Not node, matching the Morleyized reading where the negation
// of an atom is itself an atom; (not ...) over anything else is a Not node.
struct Formula {
  enum class Kind { HAtom, HEq, SAtom, Not, And, Or, ForallH, ExistsH, ForallS, ExistsS };

  Kind kind = Kind::And;
  bool negated = false;             // HAtom / HEq
  std::string rel;                  // HAtom symbol
  std::vector<TermH> hargs;         // HAtom args; HEq exactly two
  std::vector<TermS> stuple;        // SAtom terms
  ClosedSet sset;                   // SAtom set
  std::string var;                  // quantifier bound variable
  std::vector<Formula> children;

  bool operator==(const Formula&) const = default;

  static Formula hatom(std::string rel, std::vector<TermH> args, bool negated = false);
  static Formula heq(TermH a, TermH b, bool negated = false);
  static Formula satom(std::vector<TermS> tuple, ClosedSet set);
  static Formula lnot(Formula f);
  static Formula conj(std::vector<Formula> fs);
  static Formula disj(std::vector<Formula> fs);
  static Formula quant(Kind k, std::string var, Formula body);

  bool is_hatomic() const { return kind == Kind::HAtom || kind == Kind::HEq; }
  bool is_quantifier() const {
    return kind == Kind::ForallH || kind == Kind::ExistsH || kind == Kind::ForallS ||
           kind == Kind::ExistsS;
  }
};

// LH < HClass < FClass < LGeneral; classify returns the least class that
// applies.
enum class FormulaClass { LH, HClass, FClass, LGeneral };

FormulaClass classify(const Formula& phi);
std::string class_str(FormulaClass c);

// True when the subtree mentions no space-sort symbol (terms, sets, or
// S-quantifiers); such subtrees are the pure home-sort formulas.
bool mentions_space_sort(const Formula& phi);

struct FreeVars {
  std::vector<std::string> hvars, svars;  // sorted, duplicate-free
  bool empty() const { return hvars.empty() && svars.empty(); }
};

FreeVars free_vars(const Formula& phi);
void collect_free_vars(const TermH& t, std::vector<std::string>& hv);
void collect_free_vars(const TermS& t, std::vector<std::string>& hv, std::vector<std::string>& sv);

// Substitution values: H-variables map to element names, S-variables to
// rationals in [0,1]. Values are closed, so capture cannot occur; bound
// occurrences are left untouched.
struct Binding {
  std::map<std::string, std::string> hvals;
  std::map<std::string, Rat> svals;
};

Formula substitute(const Formula& phi, const Binding& b);
TermH substitute(const TermH& t, const Binding& b);
TermS substitute(const TermS& t, const Binding& b);

// Pretty printers (canonical s-expressions; parse of the output restores the
// tree exactly).
std::string to_text(const TermH& t);
std::string to_text(const TermS& t);
std::string to_text(const ClosedSet& c);
std::string to_text(const Formula& phi);

// Parser. When a signature is given, symbol kinds and arities are checked
// against it; otherwise kinds are inferred from position. When a domain is
// given, a bare home-sort symbol naming one of its elements parses as a
// parameter.
Formula parse_formula(const std::string& text, const Signature* sig = nullptr,
                      const std::vector<std::string>* domain = nullptr);
ClosedSet parse_set(const std::string& text);
TermS parse_sterm(const std::string& text, const Signature* sig = nullptr);

}  // namespace twosort
