#include "twosort/selftest.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "twosort/error.hpp"
#include "twosort/metric.hpp"
#include "twosort/ref_eval.hpp"
#include "twosort/transforms.hpp"

namespace twosort {

namespace {

struct IterOutcome {
  int checks = 0;
  int unknowns = 0;
  std::string error;  // empty when clean
};

template <typename Fn>
FamilyResult run_family(const std::string& name, const SelftestConfig& cfg, std::uint64_t salt,
                        Fn&& body) {
  FamilyResult fam;
  fam.name = name;
  std::vector<IterOutcome> outs(cfg.iterations);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (cfg.iterations > 1)
#endif
  for (int it = 0; it < cfg.iterations; ++it) {
    std::mt19937_64 rng(cfg.seed + salt * 0x9e3779b97f4a7c15ull + static_cast<std::uint64_t>(it));
    try {
      outs[it] = body(rng);
    } catch (const std::exception& ex) {
      outs[it].checks = 1;
      outs[it].error = std::string("exception: ") + ex.what();
    }
  }
  for (int it = 0; it < cfg.iterations; ++it) {
    fam.checks += outs[it].checks;
    fam.unknowns += outs[it].unknowns;
    if (!outs[it].error.empty()) {
      ++fam.failures;
      if (fam.first_failure.empty())
        fam.first_failure = "iteration " + std::to_string(it) + ": " + outs[it].error;
    }
  }
  return fam;
}

std::vector<Rat> grid_points(int den) {
  std::vector<Rat> out;
  for (int k = 0; k <= den; ++k) out.emplace_back(k, den);
  return out;
}

std::vector<std::vector<Rat>> grid_product(int dim, int den) {
  std::vector<std::vector<Rat>> out;
  auto g = grid_points(den);
  if (dim == 1) {
    for (const auto& v : g) out.push_back({v});
  } else {
    for (const auto& u : g)
      for (const auto& v : g) out.push_back({u, v});
  }
  return out;
}

ClosedSet draw_set(std::mt19937_64& rng, int dim) {
  SetGenParams sp;
  sp.dim = dim;
  return random_set(rng, sp);
}

Rat draw_eps(std::mt19937_64& rng) { return Rat(1, 1 << (1 + rng() % 5)); }

// ---- set kernel families -------------------------------------------------

IterOutcome fatten_neighborhood_iter(std::mt19937_64& rng, const SnegFn&) {
  IterOutcome out;
  int dim = 1 + rng() % 2;
  ClosedSet c = draw_set(rng, dim);
  Rat eps = draw_eps(rng);
  ClosedSet fat = set_fatten(c, eps);
  int den = dim == 1 ? 32 : 8;
  for (const auto& p : grid_product(dim, den)) {
    if (!set_member(c, p)) continue;
    ++out.checks;
    if (!set_member(fat, p)) {
      out.error = "member of " + to_text(c) + " left its fattening";
      return out;
    }
    // Perturbation within the radius stays inside the fattening.
    std::vector<Rat> q = p;
    for (int i = 0; i < dim; ++i) {
      Rat off = Rat((rng() % 3) - 1) * eps;
      q[i] = clamp_unit(q[i] + off);
    }
    ++out.checks;
    if (!set_member(fat, q)) {
      out.error = "near point escaped the fattening of " + to_text(c);
      return out;
    }
  }
  return out;
}

IterOutcome fatten_composition_iter(std::mt19937_64& rng) {
  IterOutcome out;
  int dim = 1 + rng() % 2;
  ClosedSet c = draw_set(rng, dim);
  Rat e1 = draw_eps(rng), e2 = draw_eps(rng);
  ++out.checks;
  if (!(set_fatten(set_fatten(c, e1), e2) == set_fatten(c, e1 + e2)))
    out.error = "fattening of " + to_text(c) + " does not compose additively";
  return out;
}

IterOutcome sneg_disjoint_iter(std::mt19937_64& rng, const SnegFn& sneg_fn) {
  IterOutcome out;
  int dim = 1 + rng() % 2;
  ClosedSet c = draw_set(rng, dim);
  Rat eps = draw_eps(rng);
  ClosedSet neg = sneg_fn(c, eps);
  int den = dim == 1 ? 64 : 16;
  for (const auto& p : grid_product(dim, den)) {
    ++out.checks;
    if (set_member(c, p) && set_member(neg, p)) {
      out.error = "point in both " + to_text(c) + " and its strong complement";
      return out;
    }
  }
  return out;
}

IterOutcome gap_law_iter(std::mt19937_64& rng, const SnegFn& sneg_fn) {
  IterOutcome out;
  int dim = 1 + rng() % 2;
  ClosedSet c = draw_set(rng, dim);
  Rat eps = draw_eps(rng);
  ClosedSet fat = set_fatten(c, eps / 2);
  ClosedSet neg = sneg_fn(c, eps);
  int den = dim == 1 ? 64 : 16;
  for (const auto& p : grid_product(dim, den)) {
    ++out.checks;
    if (set_member(fat, p) && set_member(neg, p)) {
      out.error = "gap violated for " + to_text(c) + " at radius " + rat_str(eps);
      return out;
    }
  }
  return out;
}

IterOutcome sneg_monotone_iter(std::mt19937_64& rng, const SnegFn& sneg_fn) {
  IterOutcome out;
  int dim = 1 + rng() % 2;
  ClosedSet c = draw_set(rng, dim);
  Rat e1 = draw_eps(rng), e2 = draw_eps(rng);
  if (e1 > e2) std::swap(e1, e2);
  ClosedSet n1 = sneg_fn(c, e1), n2 = sneg_fn(c, e2);
  for (const auto& p : grid_product(dim, dim == 1 ? 32 : 8)) {
    ++out.checks;
    if (set_member(n2, p) && !set_member(n1, p)) {
      out.error = "strong complement grew with the radius for " + to_text(c);
      return out;
    }
  }
  return out;
}

IterOutcome box_test_sound_iter(std::mt19937_64& rng) {
  IterOutcome out;
  int dim = 1 + rng() % 2;
  ClosedSet c = draw_set(rng, dim);
  IntervalBox b;
  for (int i = 0; i < dim; ++i) {
    Rat lo = random_grid_value(rng, 16), hi = random_grid_value(rng, 16);
    if (lo > hi) std::swap(lo, hi);
    b.dims.push_back({lo, hi});
  }
  BoxRelation rel = box_test(c, b);
  if (rel == BoxRelation::Boundary) {
    ++out.checks;
    return out;  // no claim to verify
  }
  auto g = grid_points(8);
  std::vector<std::vector<Rat>> samples;
  if (dim == 1) {
    for (const auto& t : g) samples.push_back({b.dims[0].lo + t * b.dims[0].width()});
  } else {
    for (const auto& t : g)
      for (const auto& u : g)
        samples.push_back(
            {b.dims[0].lo + t * b.dims[0].width(), b.dims[1].lo + u * b.dims[1].width()});
  }
  for (const auto& p : samples) {
    ++out.checks;
    bool in = set_member(c, p);
    if (rel == BoxRelation::Inside && !in) {
      out.error = "Inside claim refuted for " + to_text(c);
      return out;
    }
    if (rel == BoxRelation::Outside && in) {
      out.error = "Outside claim refuted for " + to_text(c);
      return out;
    }
  }
  return out;
}

ContFunc draw_func(std::mt19937_64& rng, int arity, int depth) {
  if (depth == 0 || rng() % 3 == 0) {
    if (rng() % 2 == 0) return ContFunc::constant(random_grid_value(rng, 16), arity);
    return ContFunc::proj(static_cast<int>(rng() % arity), arity);
  }
  switch (rng() % 7) {
    case 0:
      return ContFunc::apply(ContFunc::Kind::CutSum,
                             {draw_func(rng, arity, depth - 1), draw_func(rng, arity, depth - 1)});
    case 1:
      return ContFunc::apply(ContFunc::Kind::CutDiff,
                             {draw_func(rng, arity, depth - 1), draw_func(rng, arity, depth - 1)});
    case 2:
      return ContFunc::apply(ContFunc::Kind::Min,
                             {draw_func(rng, arity, depth - 1), draw_func(rng, arity, depth - 1)});
    case 3:
      return ContFunc::apply(ContFunc::Kind::Max,
                             {draw_func(rng, arity, depth - 1), draw_func(rng, arity, depth - 1)});
    case 4:
      return ContFunc::apply(ContFunc::Kind::Compl, {draw_func(rng, arity, depth - 1)});
    case 5:
      return ContFunc::scale(Rat(1 + rng() % 3, 2), draw_func(rng, arity, depth - 1));
    default:
      return ContFunc::pwl({{Rat(0), Rat(0)}, {Rat(1, 2), Rat(1)}, {Rat(1), Rat(0)}},
                           draw_func(rng, arity, depth - 1));
  }
}

IterOutcome hull_sound_iter(std::mt19937_64& rng) {
  IterOutcome out;
  int arity = 1 + rng() % 2;
  ContFunc f = draw_func(rng, arity, 2);
  IntervalBox b;
  for (int i = 0; i < arity; ++i) {
    Rat lo = random_grid_value(rng, 8), hi = random_grid_value(rng, 8);
    if (lo > hi) std::swap(lo, hi);
    b.dims.push_back({lo, hi});
  }
  Interval hull = func_hull(f, b);
  auto g = grid_points(6);
  std::vector<std::vector<Rat>> samples;
  if (arity == 1) {
    for (const auto& t : g) samples.push_back({b.dims[0].lo + t * b.dims[0].width()});
  } else {
    for (const auto& t : g)
      for (const auto& u : g)
        samples.push_back(
            {b.dims[0].lo + t * b.dims[0].width(), b.dims[1].lo + u * b.dims[1].width()});
  }
  for (const auto& p : samples) {
    ++out.checks;
    Rat v = func_eval(f, p);
    if (v < hull.lo || v > hull.hi) {
      out.error = "point value escaped the hull";
      return out;
    }
  }
  return out;
}

// ---- syntax families -----------------------------------------------------

Structure draw_structure(std::mt19937_64& rng) {
  StructureGenParams sp;
  return random_structure(rng, sp);
}

Formula draw_formula(std::mt19937_64& rng, const Structure& m, bool squant, int depth = 3) {
  FormulaGenParams fp;
  fp.max_depth = depth;
  fp.allow_squant = squant;
  return random_formula(rng, m, fp);
}

IterOutcome roundtrip_iter(std::mt19937_64& rng) {
  IterOutcome out;
  Structure m = draw_structure(rng);
  Formula phi = draw_formula(rng, m, true);
  ++out.checks;
  Formula back = parse_formula(to_text(phi));
  if (!(back == phi)) out.error = "parse(print) changed " + to_text(phi);
  return out;
}

IterOutcome classify_laws_iter(std::mt19937_64& rng) {
  IterOutcome out;
  Structure m = draw_structure(rng);
  Formula a = draw_formula(rng, m, true, 2);
  Formula b = draw_formula(rng, m, true, 2);
  FormulaClass ca = classify(a), cb = classify(b);
  if (ca == FormulaClass::LGeneral || cb == FormulaClass::LGeneral) return out;

  ++out.checks;
  FormulaClass cc = classify(Formula::conj({a, b}));
  if (cc > FormulaClass::FClass || cc < std::max(ca, cb)) {
    out.error = "conjunction broke the classification lattice";
    return out;
  }
  ++out.checks;
  if (classify(Formula::quant(Formula::Kind::ForallS, "q_sel", a)) != FormulaClass::FClass) {
    out.error = "space-sort quantifier did not yield class F";
    return out;
  }
  ++out.checks;
  Formula neg = strong_negation(a, Rat(1, 8));
  if (classify(neg) != ca) {
    out.error = "strong negation changed the class of " + to_text(a);
    return out;
  }
  ++out.checks;
  Binding bind;
  FreeVars fv = free_vars(a);
  for (const auto& v : fv.hvars) bind.hvals[v] = m.elem_name(0);
  for (const auto& v : fv.svars) bind.svals[v] = Rat(0);
  if (!free_vars(substitute(a, bind)).empty())
    out.error = "substitution left free variables behind";
  return out;
}

// ---- evaluator families ----------------------------------------------------

IterOutcome oracle_agreement_iter(std::mt19937_64& rng, const EvalOptions& opt) {
  IterOutcome out;
  Structure m = draw_structure(rng);
  Formula phi = draw_formula(rng, m, false, 4);
  Env env = random_env(rng, m, phi);
  ++out.checks;
  Verdict v = eval(m, phi, env, opt);
  if (v.is_unknown()) {
    out.error = "exact fragment evaluated Unknown: " + to_text(phi);
    return out;
  }
  bool expect = ref_eval(m, phi, env);
  if (v.is_true() != expect) out.error = "evaluator disagrees with reference on " + to_text(phi);
  return out;
}

IterOutcome refine_monotone_iter(std::mt19937_64& rng, const EvalOptions& opt) {
  IterOutcome out;
  Structure m = draw_structure(rng);
  Formula phi = draw_formula(rng, m, true);
  Env env = random_env(rng, m, phi);
  EvalOptions coarse = opt, fine = opt;
  coarse.delta = Rat(1, 16);
  fine.delta = Rat(1, 64);
  ++out.checks;
  Verdict vc = eval(m, phi, env, coarse);
  if (vc.is_unknown()) {
    ++out.unknowns;
    return out;
  }
  Verdict vf = eval(m, phi, env, fine);
  if (vf.value != vc.value) out.error = "refinement flipped a decided verdict on " + to_text(phi);
  return out;
}

IterOutcome approx_monotone_iter(std::mt19937_64& rng, const EvalOptions& opt,
                                 const EpsSchedule& sched) {
  IterOutcome out;
  Structure m = draw_structure(rng);
  Formula phi = draw_formula(rng, m, true);
  Env env = random_env(rng, m, phi);
  Verdict v = eval(m, phi, env, opt);
  if (!v.is_true()) {
    if (v.is_unknown()) ++out.unknowns;
    out.checks = 1;
    return out;
  }
  for (const auto& eps : sched.steps) {
    ++out.checks;
    Verdict va = eval(m, approximate(phi, eps), env, opt);
    if (!va.is_true()) {
      out.error = "approximation at " + rat_str(eps) + " lost truth of " + to_text(phi);
      return out;
    }
  }
  return out;
}

IterOutcome sneg_sound_iter(std::mt19937_64& rng, const EvalOptions& opt) {
  IterOutcome out;
  Structure m = draw_structure(rng);
  Formula phi = draw_formula(rng, m, true);
  Env env = random_env(rng, m, phi);
  Rat eps = draw_eps(rng);
  ++out.checks;
  Verdict v = eval(m, phi, env, opt);
  Verdict vn = eval(m, strong_negation(phi, eps), env, opt);
  if (v.is_unknown() || vn.is_unknown()) ++out.unknowns;
  if (v.is_true() && vn.is_true())
    out.error = "formula and its strong negation both true: " + to_text(phi);
  return out;
}

IterOutcome interp_chain_iter(std::mt19937_64& rng, const EvalOptions& opt) {
  IterOutcome out;
  Structure m = draw_structure(rng);
  Formula phi = draw_formula(rng, m, true);
  Env env = random_env(rng, m, phi);
  Rat eps = draw_eps(rng);
  Interpolants ip = interpolants(phi, eps);
  Verdict v = eval(m, phi, env, opt);
  Verdict v0 = eval(m, ip.tilde0, env, opt);
  Verdict v1 = eval(m, ip.tilde1, env, opt);
  Verdict vp = eval(m, ip.prime, env, opt);
  if (v.is_unknown() || v0.is_unknown() || v1.is_unknown() || vp.is_unknown()) ++out.unknowns;
  ++out.checks;
  if (v.is_true() && v1.is_true()) {
    out.error = "phi and tilde1 both true";
    return out;
  }
  ++out.checks;
  if (v0.is_true() && v1.is_false()) {
    out.error = "tilde0 true while its weakening tilde1 is false";
    return out;
  }
  ++out.checks;
  if (v0.is_false() && vp.is_false()) {
    out.error = "tilde0 certified false while the approximation is false";
    return out;
  }
  return out;
}

IterOutcome density_iter(std::mt19937_64& rng) {
  IterOutcome out;
  Structure m = draw_structure(rng);
  Formula phi = draw_formula(rng, m, true);
  Rat e1 = draw_eps(rng), e2 = draw_eps(rng);
  ++out.checks;
  if (!(approximate(approximate(phi, e1), e2) == approximate(phi, e1 + e2)))
    out.error = "approximation radii did not add on " + to_text(phi);
  return out;
}

IterOutcome merge_iter(std::mt19937_64& rng, const EvalOptions& opt) {
  IterOutcome out;
  Structure m = draw_structure(rng);
  Formula phi = draw_formula(rng, m, true);
  Env env = random_env(rng, m, phi);
  Rat e1 = draw_eps(rng), e2 = draw_eps(rng);
  ++out.checks;
  if (!(merge_approximations(phi, e1, e1) == approximate(phi, e1))) {
    out.error = "merge with equal radii is not the plain approximation";
    return out;
  }
  Verdict vm = eval(m, merge_approximations(phi, e1, e2), env, opt);
  if (vm.is_unknown()) ++out.unknowns;
  if (vm.is_true()) {
    ++out.checks;
    if (!eval(m, approximate(phi, e1), env, opt).is_true() ||
        !eval(m, approximate(phi, e2), env, opt).is_true())
      out.error = "merged approximation true but a component false";
  }
  return out;
}

IterOutcome kleene_refine_iter(std::mt19937_64& rng, const EvalOptions& opt) {
  IterOutcome out;
  // A closed formula the evaluator cannot decide: the two-copy diagonal atom
  // is never certifiable on a box of positive width.
  Formula unknown = parse_formula("(forallS s (in (s s) (diag 2)))");
  Formula tru = parse_formula("(in (0) (point 0))");
  Formula fls = parse_formula("(in (1) (point 0))");

  Structure m = draw_structure(rng);
  std::function<Formula(int, int)> ctx = [&](int depth, int leaf) -> Formula {
    if (depth == 0) {
      if (leaf == 0) return unknown;
      return leaf == 1 ? tru : fls;
    }
    int k = static_cast<int>(rng() % 3);
    Formula a = ctx(depth - 1, static_cast<int>(rng() % 3));
    if (k == 0) return Formula::lnot(a);
    Formula b = ctx(depth - 1, static_cast<int>(rng() % 3));
    return k == 1 ? Formula::conj({a, b}) : Formula::disj({a, b});
  };
  Formula holed = ctx(2, 0);
  Verdict vu = eval(m, holed, {}, opt);
  if (vu.is_unknown()) {
    ++out.unknowns;
    out.checks = 1;
    return out;
  }

  // Refine every unknown leaf to true and to false: the decided verdict must
  // survive both refinements.
  std::function<Formula(const Formula&, const Formula&)> swap_unknown =
      [&](const Formula& f, const Formula& repl) -> Formula {
    if (f == unknown) return repl;
    Formula g = f;
    for (auto& ch : g.children) ch = swap_unknown(ch, repl);
    return g;
  };
  for (const Formula* repl : {&tru, &fls}) {
    ++out.checks;
    Verdict vr = eval(m, swap_unknown(holed, *repl), {}, opt);
    if (vr.value != vu.value) {
      out.error = "refining an unknown leaf flipped a decided verdict";
      return out;
    }
  }
  return out;
}

// ---- morphism / metric families -------------------------------------------

IterOutcome morphism_iter(std::mt19937_64& rng, const SelftestConfig& cfg) {
  IterOutcome out;
  Structure m = draw_structure(rng);
  CorpusParams cp;
  cp.count = 8;
  cp.seed = rng();
  cp.gen.max_depth = 2;
  Corpus corpus = generate_corpus(m, cp);
  CheckOptions opt;
  opt.eval = cfg.eval;

  ++out.checks;
  MorphismReport ident = check_F_elementary(m, m, PartialMap::identity(m), corpus, opt);
  if (ident.failed()) {
    out.error = "identity map produced a counterexample";
    return out;
  }

  // A structure-preserving renamed copy with a partial map into it.
  Structure n = m;
  for (auto& e : n.domain) e += "_t";
  PartialMap f;
  for (int i = 0; i < m.size(); ++i)
    if (rng() % 4 != 0) f.pairs.emplace_back(i, i);
  MorphismReport strict = check_F_elementary(m, n, f, corpus, opt);
  out.unknowns += static_cast<int>(strict.indeterminates);
  if (!strict.failed()) {
    ++out.checks;
    MorphismReport approx = check_approx_F_elementary(m, n, f, corpus, cfg.sched, opt);
    if (approx.failed())
      out.error = "strictly elementary map failed the approximate check";
  }
  return out;
}

IterOutcome sup_recovery_iter(std::mt19937_64& rng, const EvalOptions& opt) {
  IterOutcome out;
  Structure m = draw_structure(rng);
  TermS t = TermS::cross("g", {TermH::var("x")});
  Rat maxval = 0;
  std::set<Rat> values;
  for (const auto& [k, v] : m.cross_tables[m.cross_index("g")]) {
    (void)k;
    values.insert(v);
    maxval = std::max(maxval, v);
  }
  for (const auto& v : values) {
    ++out.checks;
    Verdict verdict = eval(m, build_sup_formula(t, v), {}, opt);
    if (v == maxval ? !verdict.is_true() : !verdict.is_false()) {
      out.error = "sup formula verdict wrong at tau=" + rat_str(v);
      return out;
    }
  }
  return out;
}

Structure embedded_pseudometric(std::mt19937_64& rng, int n) {
  Structure m;
  static const std::vector<std::string> names = {"a", "b", "c", "e", "h", "k"};
  m.domain.assign(names.begin(), names.begin() + n);
  m.sig.crossfuncs.push_back({"d", 2});
  m.sig.hfuncs.push_back({"f", 1});
  m.cross_tables.resize(1);
  m.hfunc_tables.resize(1);
  std::vector<Rat> pos;
  for (int i = 0; i < n; ++i) pos.push_back(random_grid_value(rng, 8));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m.cross_tables[0][{i, j}] = rat_abs(pos[i] - pos[j]);
  for (int i = 0; i < n; ++i) m.hfunc_tables[0][{i}] = static_cast<int>(rng() % n);
  m.validate();
  return m;
}

IterOutcome metric_validate_iter(std::mt19937_64& rng) {
  IterOutcome out;
  int n = 3 + static_cast<int>(rng() % 2);
  Structure m = embedded_pseudometric(rng, n);
  bool tweak = rng() % 2 == 0;
  if (tweak) {
    // Random single-entry tweak; may or may not break the axioms.
    int i = static_cast<int>(rng() % n), j = static_cast<int>(rng() % n);
    m.cross_tables[0][{i, j}] = random_grid_value(rng, 8);
  }

  // Brute-force axiom audit, independent of validate_metric.
  auto d = [&](int i, int j) { return m.cross_tables[0].at({i, j}); };
  bool ok = true;
  for (int i = 0; i < n && ok; ++i) ok = d(i, i) == 0;
  for (int i = 0; i < n && ok; ++i)
    for (int j = 0; j < n && ok; ++j) ok = d(i, j) == d(j, i);
  for (int i = 0; i < n && ok; ++i)
    for (int j = 0; j < n && ok; ++j)
      for (int k = 0; k < n && ok; ++k) ok = d(i, k) <= d(i, j) + d(j, k);

  ++out.checks;
  bool accepted = true;
  try {
    validate_metric(m, MetricFlag::Pseudometric);
  } catch (const Error&) {
    accepted = false;
  }
  if (accepted != ok) out.error = "validator disagrees with the brute-force audit";
  return out;
}

IterOutcome sim_distance_iter(std::mt19937_64& rng, const EvalOptions& opt) {
  IterOutcome out;
  int n = 3 + static_cast<int>(rng() % 2);
  Structure m = embedded_pseudometric(rng, n);
  auto corpus = default_sim_term_corpus(1);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (a == b) continue;
      ++out.checks;
      SimDistanceReport rep = check_sim_vs_distance(m, {a}, {b}, corpus, opt);
      if (!rep.pass()) {
        out.error = std::string("sim/distance check failed at distance ") + rat_str(rep.distance);
        return out;
      }
    }
  return out;
}

IterOutcome ucont_iter(std::mt19937_64& rng, const EvalOptions& opt) {
  IterOutcome out;
  int n = 3 + static_cast<int>(rng() % 2);
  Structure m = embedded_pseudometric(rng, n);

  // Keep only 1-Lipschitz tables (exhaustively verified); identity always is.
  auto d = [&](int i, int j) { return m.cross_tables[0].at({i, j}); };
  bool lipschitz = true;
  for (int i = 0; i < n && lipschitz; ++i)
    for (int j = 0; j < n && lipschitz; ++j) {
      int fi = m.hfunc_tables[0].at({i}), fj = m.hfunc_tables[0].at({j});
      lipschitz = d(fi, fj) <= d(i, j);
    }
  if (!lipschitz)
    for (int i = 0; i < n; ++i) m.hfunc_tables[0][{i}] = i;  // fall back to the identity

  Rat eps = Rat(1, 1 << (1 + rng() % 3));
  auto sentences = gen_uniform_continuity_sentences(m.sig, "f", {{eps, eps}});
  for (const auto& s : sentences) {
    ++out.checks;
    if (!eval(m, s, {}, opt).is_true()) {
      out.error = "uniform continuity sentence failed for a 1-Lipschitz table";
      return out;
    }
  }
  return out;
}

}  // namespace

std::vector<FamilyResult> run_selftest(const SelftestConfig& cfg, const SnegFn& sneg_override) {
  SnegFn sneg_fn =
      sneg_override ? sneg_override : [](const ClosedSet& c, const Rat& e) { return set_sneg(c, e); };
  cfg.sched.validate();

  std::vector<FamilyResult> out;
  std::uint64_t salt = 1;
  out.push_back(run_family("fatten-neighborhood", cfg, salt++,
                           [&](std::mt19937_64& rng) { return fatten_neighborhood_iter(rng, sneg_fn); }));
  out.push_back(run_family("fatten-composition", cfg, salt++, fatten_composition_iter));
  out.push_back(run_family("sneg-disjoint", cfg, salt++,
                           [&](std::mt19937_64& rng) { return sneg_disjoint_iter(rng, sneg_fn); }));
  out.push_back(run_family("gap-law", cfg, salt++,
                           [&](std::mt19937_64& rng) { return gap_law_iter(rng, sneg_fn); }));
  out.push_back(run_family("sneg-monotone", cfg, salt++,
                           [&](std::mt19937_64& rng) { return sneg_monotone_iter(rng, sneg_fn); }));
  out.push_back(run_family("box-test-sound", cfg, salt++, box_test_sound_iter));
  out.push_back(run_family("hull-sound", cfg, salt++, hull_sound_iter));
  out.push_back(run_family("parse-roundtrip", cfg, salt++, roundtrip_iter));
  out.push_back(run_family("classify-laws", cfg, salt++, classify_laws_iter));
  out.push_back(run_family("oracle-agreement", cfg, salt++,
                           [&](std::mt19937_64& rng) { return oracle_agreement_iter(rng, cfg.eval); }));
  out.push_back(run_family("refine-monotone", cfg, salt++,
                           [&](std::mt19937_64& rng) { return refine_monotone_iter(rng, cfg.eval); }));
  out.push_back(run_family("approx-monotone", cfg, salt++, [&](std::mt19937_64& rng) {
    return approx_monotone_iter(rng, cfg.eval, cfg.sched);
  }));
  out.push_back(run_family("sneg-sound", cfg, salt++,
                           [&](std::mt19937_64& rng) { return sneg_sound_iter(rng, cfg.eval); }));
  out.push_back(run_family("interpolation-chain", cfg, salt++,
                           [&](std::mt19937_64& rng) { return interp_chain_iter(rng, cfg.eval); }));
  out.push_back(run_family("approx-density", cfg, salt++, density_iter));
  out.push_back(run_family("merge-approximations", cfg, salt++,
                           [&](std::mt19937_64& rng) { return merge_iter(rng, cfg.eval); }));
  out.push_back(run_family("kleene-refinement", cfg, salt++,
                           [&](std::mt19937_64& rng) { return kleene_refine_iter(rng, cfg.eval); }));
  out.push_back(run_family("morphism-implication", cfg, salt++,
                           [&](std::mt19937_64& rng) { return morphism_iter(rng, cfg); }));
  out.push_back(run_family("sup-recovery", cfg, salt++,
                           [&](std::mt19937_64& rng) { return sup_recovery_iter(rng, cfg.eval); }));
  out.push_back(run_family("metric-validate", cfg, salt++, metric_validate_iter));
  out.push_back(run_family("sim-vs-distance", cfg, salt++,
                           [&](std::mt19937_64& rng) { return sim_distance_iter(rng, cfg.eval); }));
  out.push_back(run_family("uniform-continuity", cfg, salt++,
                           [&](std::mt19937_64& rng) { return ucont_iter(rng, cfg.eval); }));
  return out;
}

bool print_selftest(const std::vector<FamilyResult>& results, std::ostream& os, bool machine) {
  bool all_pass = true;
  for (const auto& f : results) {
    all_pass = all_pass && f.pass();
    if (machine) {
      os << "family=" << f.name << " checks=" << f.checks << " failures=" << f.failures
         << " unknowns=" << f.unknowns << " result=" << (f.pass() ? "pass" : "fail") << "\n";
    } else {
      os << (f.pass() ? "PASS" : "FAIL") << "  " << f.name << "  (" << f.checks << " checks";
      if (f.unknowns > 0) os << ", " << f.unknowns << " unknown";
      os << ")";
      if (f.vacuous()) os << "  [warning: vacuous, zero checks]";
      os << "\n";
      if (!f.pass()) os << "      " << f.first_failure << "\n";
    }
  }
  return all_pass;
}

}  // namespace twosort
