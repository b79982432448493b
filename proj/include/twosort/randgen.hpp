#pragma once

#include <random>

#include "twosort/structures.hpp"

namespace twosort {

// Seeded generators for structures, sets, and formulas. All draws come from
// the caller's engine, so a fixed seed reproduces the same instances.

struct StructureGenParams {
  int min_elems = 2;
  int max_elems = 4;
  int grid_den = 16;  // cross values are multiples of 1/grid_den
  bool with_relation = true;
  bool with_hfunc = true;
  int unary_cross = 1;           // symbols g, g2, g3, ...
  bool with_binary_cross = false;  // adds a symmetric binary table "d"
};

Structure random_structure(std::mt19937_64& rng, const StructureGenParams& p = {});

struct SetGenParams {
  int dim = 1;
  int grid_den = 16;
  bool halfspaces = true;  // L1 norm of coefficients capped at 2
  int max_depth = 2;       // union/intersection nesting
  // Extra candidates for point sets (typically the structure's table values).
  std::vector<Rat> point_pool;
};

ClosedSet random_set(std::mt19937_64& rng, const SetGenParams& p);

struct FormulaGenParams {
  int max_depth = 3;  // connective/quantifier nesting
  bool allow_squant = true;
  bool allow_hquant = true;
  bool allow_negated_atoms = true;
  bool fancy_builtins = false;  // admit scale/pwl inside terms
  int grid_den = 16;
  int max_free_hvars = 2;  // free variables drawn from x1..xk
  int max_satom_dim = 2;
};

// A positive-fragment formula over m's symbols. Free variables are home-sort
// only, drawn from the pool x1..x{max_free_hvars}.
Formula random_formula(std::mt19937_64& rng, const Structure& m, const FormulaGenParams& p);

// Binds every free home-sort variable of phi to a random element.
Env random_env(std::mt19937_64& rng, const Structure& m, const Formula& phi);

Rat random_grid_value(std::mt19937_64& rng, int grid_den);

}  // namespace twosort
