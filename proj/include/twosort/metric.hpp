#pragma once

#include "twosort/semantics.hpp"
#include "twosort/transforms.hpp"

namespace twosort {

enum class MetricFlag { Metric, Pseudometric };

// Exhaustive validation of the distance table: symmetry, zero diagonal,
// triangle inequality, and (for Metric) definiteness. Errors name the
// offending pair or triple.
void validate_metric(const Structure& m, MetricFlag flag, const std::string& dsym = "d");

Structure load_metric_space(const std::string& text, MetricFlag flag,
                            const std::string& dsym = "d");
Structure load_metric_space_file(const std::string& path, MetricFlag flag,
                                 const std::string& dsym = "d");

Rat metric_distance(const Structure& m, int a, int b, const std::string& dsym = "d");

// Supremum distance of equal-length tuples.
Rat sup_distance(const Structure& m, const std::vector<int>& a, const std::vector<int>& b,
                 const std::string& dsym = "d");

// One sentence per (eps, delta) pair:
//   forall x forall y (d(x,y) in [delta,1] or d(f(x),f(y)) in [0,eps])
// with the component-wise disjunction for n-ary f.
std::vector<Formula> gen_uniform_continuity_sentences(const Signature& sig,
                                                      const std::string& fsym,
                                                      const std::vector<std::pair<Rat, Rat>>& moduli,
                                                      const std::string& dsym = "d");

// Terms t(x,z) over {d, csum, cdiff, min, max}, depth two, used as the
// default family for indistinguishability checks.
std::vector<SimTerm> default_sim_term_corpus(int tuple_len, const std::string& dsym = "d");

struct SimDistanceRecord {
  std::string term_text;
  Verdict verdict;
  bool pass = false;
};

struct SimDistanceReport {
  Rat distance;              // sup distance between the tuples
  bool zero_distance = false;
  // Direction 1 (zero distance): every corpus equivalence must hold.
  std::vector<SimDistanceRecord> equivalences;
  // Direction 2 (positive distance): the distance term itself must refute
  // the equivalence, with z := a as the concrete separating instance.
  std::optional<SimDistanceRecord> separation;
  bool separation_at_a = false;
  bool pass() const;
  bool indeterminate() const;
};

SimDistanceReport check_sim_vs_distance(const Structure& m, const std::vector<int>& a,
                                        const std::vector<int>& b,
                                        const std::vector<SimTerm>& corpus,
                                        const EvalOptions& opt = {},
                                        const std::string& dsym = "d");

}  // namespace twosort
