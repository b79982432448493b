#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "twosort/structures.hpp"

namespace twosort {

// Three-valued evaluation result. True and False are sound claims about the
// real semantics; Unknown records the finest subdivision width at which the
// decision was abandoned.
struct Verdict {
  enum class Value { True, False, Unknown };

  Value value = Value::Unknown;
  Rat resolution = Rat(1);  // finest box width used; 1 when no subdivision ran
  bool budget_hit = false;
  // Quantifier witness assignments backing a decision (variable, printed
  // value). For a certified False under a space-sort universal this contains
  // the rational counterexample point.
  std::vector<std::pair<std::string, std::string>> witness;

  bool is_true() const { return value == Value::True; }
  bool is_false() const { return value == Value::False; }
  bool is_unknown() const { return value == Value::Unknown; }
};

std::string verdict_str(Verdict::Value v);

struct EvalOptions {
  Rat delta = Rat(1, 64);            // stop subdividing below this width
  std::uint64_t max_boxes = 1u << 20;  // per-quantifier worklist budget
  bool parallel = true;              // OpenMP worklist processing
};

// Certified evaluation of phi under env. Home-sort quantifiers range over
// the finite domain; space-sort quantifiers are decided by branch-and-bound
// over [0,1] with exact interval enclosures. True implies M |= phi[env],
// False implies M |= not phi[env].
Verdict eval(const Structure& m, const Formula& phi, const Env& env,
             const EvalOptions& opt = {});

// Strictly decreasing positive radii used for approximate satisfaction.
struct EpsSchedule {
  std::vector<Rat> steps;

  static EpsSchedule standard();  // 1/2, 1/4, ..., 1/64
  void validate() const;
  const Rat& finest() const { return steps.back(); }
};

struct ApproxSatResult {
  Verdict verdict;
  std::optional<Rat> refuting_eps;  // coarsest radius whose approximation is False
};

// Checks satisfaction of the approximation family of phi: False when some
// scheduled approximation is certifiably False (refuting the whole family),
// True when the finest scheduled approximation is certifiably True (which
// implies all coarser ones), Unknown otherwise.
ApproxSatResult eval_approx_sat(const Structure& m, const Formula& phi, const Env& env,
                                const EpsSchedule& sched, const EvalOptions& opt = {});

}  // namespace twosort
