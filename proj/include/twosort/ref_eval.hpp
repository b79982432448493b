#pragma once

#include "twosort/structures.hpp"

namespace twosort {

// Serial reference evaluator, kept as the independent oracle for the
// certified evaluator and as the baseline for the benchmark target.
//
// Scope: formulas without space-sort quantifiers, under fully rational
// environments. Within that fragment evaluation is two-valued and exact.
// The implementation is a direct recursion with its own term evaluation and
// its own point-in-set test; it deliberately shares no evaluation code with
// semantics.cpp or geometry.cpp.
bool ref_eval(const Structure& m, const Formula& phi, const Env& env);

// True when phi is inside the fragment ref_eval handles.
bool ref_eval_applicable(const Formula& phi);

}  // namespace twosort
