#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "twosort/syntax.hpp"

namespace twosort {

// Declared symbols of the home-sort language plus the cross-sort functions
// H^n -> S. Constants are 0-ary H-functions; cross-sort arities are >= 1.
struct Signature {
  struct Sym {
    std::string name;
    int arity = 0;
    bool operator==(const Sym&) const = default;
  };

  std::vector<Sym> relations;
  std::vector<Sym> hfuncs;
  std::vector<Sym> crossfuncs;

  bool operator==(const Signature&) const = default;

  const Sym* find_relation(const std::string& n) const;
  const Sym* find_hfunc(const std::string& n) const;
  const Sym* find_crossfunc(const std::string& n) const;
  bool has_symbol(const std::string& n) const;
  void validate() const;  // unique names, arity bounds
};

// Finite standard structure <M, [0,1]>: relation tables, total H-function
// tables, and total [0,1]-valued cross-sort tables with rational entries.
struct Structure {
  Signature sig;
  std::vector<std::string> domain;  // element names, order fixed at load
  std::vector<std::set<std::vector<int>>> rel_tables;         // per relation
  std::vector<std::map<std::vector<int>, int>> hfunc_tables;  // per H-function
  std::vector<std::map<std::vector<int>, Rat>> cross_tables;  // per cross-function

  int size() const { return static_cast<int>(domain.size()); }
  int elem_index(const std::string& name) const;  // -1 when absent
  const std::string& elem_name(int i) const { return domain[i]; }

  int rel_index(const std::string& n) const;
  int hfunc_index(const std::string& n) const;
  int cross_index(const std::string& n) const;

  // Totality and range checks over every table.
  void validate() const;
};

Structure load_structure(const std::string& text);
Structure load_structure_file(const std::string& path);

// Variable environment for evaluation: home-sort variables bind to element
// indices, space-sort variables to rationals in [0,1].
struct Env {
  std::map<std::string, int> hvals;
  std::map<std::string, Rat> svals;
};

int term_eval_H(const Structure& m, const TermH& t, const Env& env);
Rat term_eval_S(const Structure& m, const TermS& t, const Env& env);

// Enumerate all tuples of the given length over [0, size).
std::vector<std::vector<int>> all_tuples(int size, int length);

}  // namespace twosort
