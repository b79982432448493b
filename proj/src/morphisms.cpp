#include "twosort/morphisms.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "twosort/error.hpp"
#include "twosort/transforms.hpp"

namespace twosort {

PartialMap PartialMap::identity(const Structure& m) {
  PartialMap f;
  for (int i = 0; i < m.size(); ++i) f.pairs.emplace_back(i, i);
  return f;
}

std::optional<int> PartialMap::apply(int src) const {
  for (const auto& [s, t] : pairs)
    if (s == src) return t;
  return std::nullopt;
}

std::vector<int> PartialMap::domain_elems() const {
  std::vector<int> out;
  out.reserve(pairs.size());
  for (const auto& [s, t] : pairs) {
    (void)t;
    out.push_back(s);
  }
  return out;
}

void PartialMap::validate(const Structure& source, const Structure& target) const {
  std::set<int> seen;
  for (const auto& [s, t] : pairs) {
    if (s < 0 || s >= source.size() || t < 0 || t >= target.size())
      throw Error(Error::Kind::Input, "map mentions elements outside the structures");
    if (!seen.insert(s).second)
      throw Error(Error::Kind::Input, "map is not a function: duplicate source element");
  }
}

MorphismInstance load_map_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Error::Kind::Input, "cannot open '" + path + "'");
  std::string line, source_path, target_path;
  std::vector<std::pair<std::string, std::string>> arrows;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    std::string tok;
    std::string section;
    while (ls >> tok) {
      if (tok == "[source]" || tok == "[target]" || tok == "[map]") {
        section = tok;
        continue;
      }
      if (section == "[source]")
        source_path = tok;
      else if (section == "[target]")
        target_path = tok;
      else if (section == "[map]") {
        auto arrow = tok.find("->");
        if (arrow == std::string::npos)
          throw Error(Error::Kind::Syntax, "map entry '" + tok + "' needs the form a->b");
        arrows.emplace_back(tok.substr(0, arrow), tok.substr(arrow + 2));
      } else {
        throw Error(Error::Kind::Syntax, "token '" + tok + "' outside any section");
      }
    }
  }
  if (source_path.empty() || target_path.empty())
    throw Error(Error::Kind::Input, "map file needs [source] and [target] entries");

  auto resolve = [&](const std::string& p) {
    std::filesystem::path base = std::filesystem::path(path).parent_path();
    std::filesystem::path rel(p);
    return rel.is_absolute() ? rel.string() : (base / rel).string();
  };

  MorphismInstance inst;
  inst.source = load_structure_file(resolve(source_path));
  inst.target = load_structure_file(resolve(target_path));
  for (const auto& [s, t] : arrows) {
    int si = inst.source.elem_index(s);
    int ti = inst.target.elem_index(t);
    if (si < 0) throw Error(Error::Kind::UnknownSymbol, "unknown source element '" + s + "'");
    if (ti < 0) throw Error(Error::Kind::UnknownSymbol, "unknown target element '" + t + "'");
    inst.map.pairs.emplace_back(si, ti);
  }
  std::sort(inst.map.pairs.begin(), inst.map.pairs.end());
  inst.map.validate(inst.source, inst.target);
  return inst;
}

Corpus generate_corpus(const Structure& m, const CorpusParams& p) {
  Corpus corpus;
  // Separating atoms: one point-set membership per cross symbol and value.
  for (std::size_t g = 0; g < m.sig.crossfuncs.size(); ++g) {
    const auto& sym = m.sig.crossfuncs[g];
    std::set<Rat> values;
    for (const auto& [k, v] : m.cross_tables[g]) {
      (void)k;
      values.insert(v);
    }
    for (const auto& v : values) {
      std::vector<TermH> args;
      std::vector<std::string> vars;
      for (int i = 0; i < sym.arity; ++i) {
        vars.push_back("x" + std::to_string(i + 1));
        args.push_back(TermH::var(vars.back()));
      }
      CorpusEntry e;
      e.formula = Formula::satom({TermS::cross(sym.name, std::move(args))},
                                 ClosedSet::make_point({v}));
      e.hvars = std::move(vars);
      corpus.entries.push_back(std::move(e));
    }
  }
  std::mt19937_64 rng(p.seed);
  while (static_cast<int>(corpus.entries.size()) < p.count) {
    Formula phi = random_formula(rng, m, p.gen);
    if (p.gen.allow_squant == false && classify(phi) == FormulaClass::FClass) continue;
    CorpusEntry e;
    e.hvars = free_vars(phi).hvars;
    e.formula = std::move(phi);
    corpus.entries.push_back(std::move(e));
  }
  return corpus;
}

std::string outcome_str(CheckOutcome o) {
  switch (o) {
    case CheckOutcome::Pass:
      return "pass";
    case CheckOutcome::Counterexample:
      return "counterexample";
    case CheckOutcome::Indeterminate:
      return "indeterminate";
  }
  return "?";
}

CheckOutcome MorphismReport::overall() const {
  if (counterexamples > 0) return CheckOutcome::Counterexample;
  if (indeterminates > 0) return CheckOutcome::Indeterminate;
  return CheckOutcome::Pass;
}

void MorphismReport::tally() {
  passes = counterexamples = indeterminates = 0;
  for (const auto& r : records) {
    switch (r.outcome) {
      case CheckOutcome::Pass:
        ++passes;
        break;
      case CheckOutcome::Counterexample:
        ++counterexamples;
        break;
      case CheckOutcome::Indeterminate:
        ++indeterminates;
        break;
    }
  }
}

namespace {

struct Task {
  std::size_t formula;
  std::vector<int> tuple;
};

std::vector<Task> make_tasks(const Corpus& corpus, const std::vector<int>& dom) {
  std::vector<Task> tasks;
  for (std::size_t i = 0; i < corpus.entries.size(); ++i) {
    int arity = static_cast<int>(corpus.entries[i].hvars.size());
    for (const auto& ix : all_tuples(static_cast<int>(dom.size()), arity)) {
      Task t;
      t.formula = i;
      t.tuple.reserve(ix.size());
      for (int j : ix) t.tuple.push_back(dom[j]);
      tasks.push_back(std::move(t));
    }
  }
  return tasks;
}

Env env_for(const CorpusEntry& e, const std::vector<int>& tuple) {
  Env env;
  for (std::size_t i = 0; i < e.hvars.size(); ++i) env.hvals[e.hvars[i]] = tuple[i];
  return env;
}

Env mapped_env(const CorpusEntry& e, const std::vector<int>& tuple, const PartialMap& f) {
  Env env;
  for (std::size_t i = 0; i < e.hvars.size(); ++i) env.hvals[e.hvars[i]] = *f.apply(tuple[i]);
  return env;
}

std::string tuple_detail(const Structure& m, const std::vector<int>& tuple) {
  std::string out;
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    if (i) out += ",";
    out += m.elem_name(tuple[i]);
  }
  return out;
}

template <typename Fn>
MorphismReport run_tasks(const std::vector<Task>& tasks, const CheckOptions& opt, Fn&& body) {
  std::vector<std::vector<CheckRecord>> results(tasks.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (opt.parallel && tasks.size() > 1)
#endif
  for (long i = 0; i < static_cast<long>(tasks.size()); ++i)
    results[i] = body(tasks[i]);

  MorphismReport report;
  for (auto& rs : results)
    for (auto& r : rs) report.records.push_back(std::move(r));
  report.tally();
  return report;
}

}  // namespace

MorphismReport check_F_elementary(const Structure& M, const Structure& N, const PartialMap& f,
                                  const Corpus& corpus, const CheckOptions& opt) {
  f.validate(M, N);
  auto tasks = make_tasks(corpus, f.domain_elems());
  return run_tasks(tasks, opt, [&](const Task& t) {
    const CorpusEntry& e = corpus.entries[t.formula];
    CheckRecord r;
    r.formula = t.formula;
    r.tuple = t.tuple;
    r.detail = tuple_detail(M, t.tuple);
    Verdict vm = eval(M, e.formula, env_for(e, t.tuple), opt.eval);
    if (vm.is_unknown()) {
      r.outcome = CheckOutcome::Indeterminate;
    } else if (vm.is_false()) {
      r.outcome = CheckOutcome::Pass;  // premise fails, nothing to preserve
    } else {
      Verdict vn = eval(N, e.formula, mapped_env(e, t.tuple, f), opt.eval);
      r.outcome = vn.is_true()      ? CheckOutcome::Pass
                  : vn.is_false()   ? CheckOutcome::Counterexample
                                    : CheckOutcome::Indeterminate;
    }
    return std::vector<CheckRecord>{std::move(r)};
  });
}

MorphismReport check_approx_F_elementary(const Structure& M, const Structure& N,
                                         const PartialMap& f, const Corpus& corpus,
                                         const EpsSchedule& sched, const CheckOptions& opt) {
  f.validate(M, N);
  sched.validate();
  auto tasks = make_tasks(corpus, f.domain_elems());
  return run_tasks(tasks, opt, [&](const Task& t) {
    const CorpusEntry& e = corpus.entries[t.formula];
    CheckRecord r;
    r.formula = t.formula;
    r.tuple = t.tuple;
    r.detail = tuple_detail(M, t.tuple);
    Verdict vm = eval(M, e.formula, env_for(e, t.tuple), opt.eval);
    if (vm.is_unknown()) {
      r.outcome = CheckOutcome::Indeterminate;
    } else if (vm.is_false()) {
      r.outcome = CheckOutcome::Pass;
    } else {
      ApproxSatResult as = eval_approx_sat(N, e.formula, mapped_env(e, t.tuple, f), sched, opt.eval);
      if (as.verdict.is_false()) {
        r.outcome = CheckOutcome::Counterexample;
        r.detail += " refuting_eps=" + rat_str(*as.refuting_eps);
      } else {
        r.outcome = as.verdict.is_true() ? CheckOutcome::Pass : CheckOutcome::Indeterminate;
      }
    }
    return std::vector<CheckRecord>{std::move(r)};
  });
}

MorphismReport check_partial_F_embedding(const Structure& M, const Structure& N,
                                         const PartialMap& f, const Corpus& corpus,
                                         const CheckOptions& opt) {
  f.validate(M, N);
  for (const auto& e : corpus.entries) {
    std::function<bool(const Formula&)> has_hquant = [&](const Formula& phi) {
      if (phi.kind == Formula::Kind::ForallH || phi.kind == Formula::Kind::ExistsH) return true;
      for (const auto& ch : phi.children)
        if (has_hquant(ch)) return true;
      return false;
    };
    if (has_hquant(e.formula))
      throw Error(Error::Kind::Precondition,
                  "embedding corpus must not contain home-sort quantifiers");
  }
  auto tasks = make_tasks(corpus, f.domain_elems());
  return run_tasks(tasks, opt, [&](const Task& t) {
    const CorpusEntry& e = corpus.entries[t.formula];
    Verdict vm = eval(M, e.formula, env_for(e, t.tuple), opt.eval);
    Verdict vn = eval(N, e.formula, mapped_env(e, t.tuple, f), opt.eval);

    auto direction = [&](const Verdict& from, const Verdict& to, const char* label) {
      CheckRecord r;
      r.formula = t.formula;
      r.tuple = t.tuple;
      r.detail = std::string(label) + " " + tuple_detail(M, t.tuple);
      if (from.is_unknown())
        r.outcome = CheckOutcome::Indeterminate;
      else if (from.is_false())
        r.outcome = CheckOutcome::Pass;
      else
        r.outcome = to.is_true()      ? CheckOutcome::Pass
                    : to.is_false()   ? CheckOutcome::Counterexample
                                      : CheckOutcome::Indeterminate;
      return r;
    };
    std::vector<CheckRecord> out;
    out.push_back(direction(vm, vn, "forward"));
    out.push_back(direction(vn, vm, "backward"));
    return out;
  });
}

MorphismReport check_prop_4_4(const Structure& M, const Structure& N, const PartialMap& f,
                              const Corpus& corpus, const EpsSchedule& sched,
                              const CheckOptions& opt) {
  MorphismReport pre = check_approx_F_elementary(M, N, f, corpus, sched, opt);
  if (pre.failed())
    throw Error(Error::Kind::Precondition,
                "map is not approximately elementary on this corpus; the biconditional "
                "requires that as a premise");
  auto tasks = make_tasks(corpus, f.domain_elems());
  return run_tasks(tasks, opt, [&](const Task& t) {
    const CorpusEntry& e = corpus.entries[t.formula];
    CheckRecord r;
    r.formula = t.formula;
    r.tuple = t.tuple;
    r.detail = tuple_detail(M, t.tuple);
    ApproxSatResult sm = eval_approx_sat(M, e.formula, env_for(e, t.tuple), sched, opt.eval);
    ApproxSatResult sn = eval_approx_sat(N, e.formula, mapped_env(e, t.tuple, f), sched, opt.eval);
    if (sm.verdict.is_unknown() || sn.verdict.is_unknown())
      r.outcome = CheckOutcome::Indeterminate;
    else if (sm.verdict.value == sn.verdict.value)
      r.outcome = CheckOutcome::Pass;
    else
      r.outcome = CheckOutcome::Counterexample;
    return std::vector<CheckRecord>{std::move(r)};
  });
}

namespace {

// Index translation sub -> super plus table agreement checks.
std::vector<int> check_substructure(const Structure& sub, const Structure& super) {
  if (!(sub.sig == super.sig))
    throw Error(Error::Kind::Input, "substructure check needs identical signatures");
  std::vector<int> up(sub.size());
  for (int i = 0; i < sub.size(); ++i) {
    int j = super.elem_index(sub.elem_name(i));
    if (j < 0)
      throw Error(Error::Kind::Input,
                  "element '" + sub.elem_name(i) + "' is not in the larger structure");
    up[i] = j;
  }
  std::vector<int> down(super.size(), -1);
  for (int i = 0; i < sub.size(); ++i) down[up[i]] = i;

  for (std::size_t r = 0; r < sub.sig.relations.size(); ++r) {
    for (const auto& tup : all_tuples(sub.size(), sub.sig.relations[r].arity)) {
      std::vector<int> sup_tup;
      for (int e : tup) sup_tup.push_back(up[e]);
      if (sub.rel_tables[r].count(tup) != super.rel_tables[r].count(sup_tup))
        throw Error(Error::Kind::Input,
                    "relation '" + sub.sig.relations[r].name + "' disagrees on the substructure");
    }
  }
  for (std::size_t fidx = 0; fidx < sub.sig.hfuncs.size(); ++fidx) {
    for (const auto& tup : all_tuples(sub.size(), sub.sig.hfuncs[fidx].arity)) {
      std::vector<int> sup_tup;
      for (int e : tup) sup_tup.push_back(up[e]);
      int v_super = super.hfunc_tables[fidx].at(sup_tup);
      if (down[v_super] < 0 || down[v_super] != sub.hfunc_tables[fidx].at(tup))
        throw Error(Error::Kind::Input,
                    "function '" + sub.sig.hfuncs[fidx].name + "' leaves the substructure");
    }
  }
  for (std::size_t g = 0; g < sub.sig.crossfuncs.size(); ++g) {
    for (const auto& tup : all_tuples(sub.size(), sub.sig.crossfuncs[g].arity)) {
      std::vector<int> sup_tup;
      for (int e : tup) sup_tup.push_back(up[e]);
      if (sub.cross_tables[g].at(tup) != super.cross_tables[g].at(sup_tup))
        throw Error(Error::Kind::Input,
                    "cross table '" + sub.sig.crossfuncs[g].name + "' disagrees on the substructure");
    }
  }
  return up;
}

Formula exists_closure(const Formula& phi, const std::vector<std::string>& vars) {
  Formula out = phi;
  for (auto it = vars.rbegin(); it != vars.rend(); ++it)
    out = Formula::quant(Formula::Kind::ExistsH, *it, std::move(out));
  return out;
}

}  // namespace

MorphismReport tarski_vaught_check(const Structure& sub, const Structure& super,
                                   const Corpus& corpus, const EpsSchedule& sched,
                                   const CheckOptions& opt) {
  sched.validate();
  std::vector<int> up = check_substructure(sub, super);

  std::vector<int> sub_in_super;
  for (int i = 0; i < sub.size(); ++i) sub_in_super.push_back(up[i]);

  struct TvTask {
    std::size_t formula;
    bool negation_condition;  // false: approximation condition on H-class formulas
    std::size_t eps_index;    // approximation condition only
  };
  std::vector<TvTask> tasks;
  for (std::size_t i = 0; i < corpus.entries.size(); ++i) {
    const auto& e = corpus.entries[i];
    FreeVars fv = free_vars(e.formula);
    if (!fv.svars.empty()) continue;  // conditions apply to H-sort tuples only
    FormulaClass c = classify(e.formula);
    if (c == FormulaClass::LH || c == FormulaClass::HClass)
      for (std::size_t k = 0; k < sched.steps.size(); ++k) tasks.push_back({i, false, k});
    if (c != FormulaClass::LGeneral) tasks.push_back({i, true, 0});
  }

  std::vector<CheckRecord> results(tasks.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (opt.parallel && tasks.size() > 1)
#endif
  for (long ti = 0; ti < static_cast<long>(tasks.size()); ++ti) {
    const TvTask& task = tasks[ti];
    const CorpusEntry& e = corpus.entries[task.formula];
    CheckRecord r;
    r.formula = task.formula;

    const Formula base = task.negation_condition ? Formula::lnot(e.formula) : e.formula;
    Formula closure = exists_closure(base, e.hvars);
    Verdict exists_v = eval(super, closure, {}, opt.eval);
    if (task.negation_condition)
      r.detail = "negation";
    else
      r.detail = "approx eps=" + rat_str(sched.steps[task.eps_index]);

    if (exists_v.is_false()) {
      r.outcome = CheckOutcome::Pass;  // vacuous
    } else if (exists_v.is_unknown()) {
      r.outcome = CheckOutcome::Indeterminate;
    } else {
      const Formula target = task.negation_condition
                                 ? Formula::lnot(e.formula)
                                 : approximate(e.formula, sched.steps[task.eps_index]);
      bool found = false, any_unknown = false;
      for (const auto& ix : all_tuples(static_cast<int>(sub_in_super.size()),
                                       static_cast<int>(e.hvars.size()))) {
        Env env;
        for (std::size_t j = 0; j < e.hvars.size(); ++j)
          env.hvals[e.hvars[j]] = sub_in_super[ix[j]];
        Verdict v = eval(super, target, env, opt.eval);
        if (v.is_true()) {
          found = true;
          break;
        }
        if (v.is_unknown()) any_unknown = true;
      }
      r.outcome = found           ? CheckOutcome::Pass
                  : any_unknown   ? CheckOutcome::Indeterminate
                                  : CheckOutcome::Counterexample;
    }
    results[ti] = std::move(r);
  }

  MorphismReport report;
  report.records = std::move(results);
  report.tally();
  return report;
}

}  // namespace twosort
