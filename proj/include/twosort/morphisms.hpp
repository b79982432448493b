#pragma once

#include <optional>

#include "twosort/randgen.hpp"
#include "twosort/semantics.hpp"

namespace twosort {

// Partial map between two structures, as pairs of element indices
// (source, target), sorted by source and functional.
struct PartialMap {
  std::vector<std::pair<int, int>> pairs;

  static PartialMap identity(const Structure& m);
  std::optional<int> apply(int src) const;
  std::vector<int> domain_elems() const;
  void validate(const Structure& source, const Structure& target) const;
};

// Parsed map file: two structures plus the element map between them.
struct MorphismInstance {
  Structure source, target;
  PartialMap map;
};

MorphismInstance load_map_file(const std::string& path);

// Finite stand-in for the infinite formula classes: a list of
// positive-fragment formulas with their free home-sort variables.
struct CorpusEntry {
  Formula formula;
  std::vector<std::string> hvars;  // sorted free variables
};

struct Corpus {
  std::vector<CorpusEntry> entries;
};

struct CorpusParams {
  int count = 30;
  std::uint64_t seed = 1;
  FormulaGenParams gen;
};

// Deterministic corpus over m's symbols: one point-set atom g(x) in {v} per
// cross symbol and table value (these separate any two structures that
// disagree on a table), then seeded random formulas up to the requested
// count.
Corpus generate_corpus(const Structure& m, const CorpusParams& p);

enum class CheckOutcome { Pass, Counterexample, Indeterminate };

std::string outcome_str(CheckOutcome o);

struct CheckRecord {
  CheckOutcome outcome = CheckOutcome::Pass;
  std::size_t formula = 0;     // corpus index
  std::vector<int> tuple;      // source elements fed to the free variables
  std::string detail;
};

struct MorphismReport {
  std::vector<CheckRecord> records;
  std::size_t passes = 0, counterexamples = 0, indeterminates = 0;

  bool failed() const { return counterexamples > 0; }
  CheckOutcome overall() const;
  void tally();
};

struct CheckOptions {
  EvalOptions eval;
  bool parallel = true;  // distribute (formula, tuple) pairs over threads
};

// Forward preservation: M |= phi(a) implies N |= phi(f a), checked for every
// corpus formula and every tuple over dom f.
MorphismReport check_F_elementary(const Structure& M, const Structure& N, const PartialMap& f,
                                  const Corpus& corpus, const CheckOptions& opt = {});

// Approximate version: a True premise only demands satisfaction of the
// approximation family on the target side.
MorphismReport check_approx_F_elementary(const Structure& M, const Structure& N,
                                         const PartialMap& f, const Corpus& corpus,
                                         const EpsSchedule& sched, const CheckOptions& opt = {});

// Both directions of preservation over a corpus without home-sort
// quantifiers (records carry detail "forward" / "backward").
MorphismReport check_partial_F_embedding(const Structure& M, const Structure& N,
                                         const PartialMap& f, const Corpus& corpus,
                                         const CheckOptions& opt = {});

// Biconditional of approximate satisfaction on both sides. Precondition
// (checked, reported as an error): f passes check_approx_F_elementary on the
// corpus.
MorphismReport check_prop_4_4(const Structure& M, const Structure& N, const PartialMap& f,
                              const Corpus& corpus, const EpsSchedule& sched,
                              const CheckOptions& opt = {});

// Substructure test against a larger structure on the same signature:
// for existentially satisfiable corpus formulas, witnesses must be found
// inside the substructure — up to approximation for the quantifier-free-in-S
// positive formulas (condition tagged "approx"), and exactly for negated
// ones (condition tagged "negation").
MorphismReport tarski_vaught_check(const Structure& sub, const Structure& super,
                                   const Corpus& corpus, const EpsSchedule& sched,
                                   const CheckOptions& opt = {});

}  // namespace twosort
