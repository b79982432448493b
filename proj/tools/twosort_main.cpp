// Command-line front end: classify, evaluate, transform, morphism checks,
// substructure tests, metric tools, and the invariant selftest.
//
// Exit codes: 0 certified true / pass, 1 certified false / counterexample,
// 2 unknown / indeterminate, 3 usage or input error.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "twosort/error.hpp"
#include "twosort/metric.hpp"
#include "twosort/morphisms.hpp"
#include "twosort/selftest.hpp"
#include "twosort/transforms.hpp"

using namespace twosort;

namespace {

constexpr int kExitTrue = 0;
constexpr int kExitFalse = 1;
constexpr int kExitUnknown = 2;
constexpr int kExitError = 3;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Error::Kind::Input, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct CommonFlags {
  std::string delta = "1/64";
  std::string schedule = "1/2,1/4,1/8,1/16,1/32,1/64";
  std::uint64_t budget = 1u << 20;
  bool serial = false;
  std::string format = "text";

  EvalOptions eval_options() const {
    EvalOptions o;
    o.delta = parse_rational(delta);
    o.max_boxes = budget;
    o.parallel = !serial;
    return o;
  }
  EpsSchedule eps_schedule() const {
    EpsSchedule s;
    std::istringstream in(schedule);
    std::string tok;
    while (std::getline(in, tok, ',')) s.steps.push_back(parse_rational(tok));
    s.validate();
    return s;
  }
  bool machine() const { return format == "machine"; }
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool with_schedule = true) {
  cmd->add_option("--delta", flags.delta, "resolution bound for branch-and-bound (default 1/64)");
  if (with_schedule)
    cmd->add_option("--schedule", flags.schedule, "comma-separated decreasing radii");
  cmd->add_option("--budget", flags.budget, "per-quantifier box budget");
  cmd->add_flag("--serial", flags.serial, "disable the parallel worklist");
  cmd->add_option("--format", flags.format, "text | machine")
      ->check(CLI::IsMember({"text", "machine"}));
}

// Either an inline formula or a file containing one.
struct FormulaArg {
  std::string inline_text, file;
  std::string text() const {
    if (!inline_text.empty() && !file.empty())
      throw Error(Error::Kind::Input, "give either --formula or --formula-file, not both");
    if (!inline_text.empty()) return inline_text;
    if (!file.empty()) return slurp(file);
    throw Error(Error::Kind::Input, "missing formula (--formula or --formula-file)");
  }
};

void add_formula_arg(CLI::App* cmd, FormulaArg& arg) {
  cmd->add_option("--formula", arg.inline_text, "formula as an s-expression");
  cmd->add_option("--formula-file", arg.file, "file containing the formula");
}

Env parse_bindings(const Structure& m, const std::vector<std::string>& binds) {
  Env env;
  for (const auto& b : binds) {
    auto eq = b.find('=');
    if (eq == std::string::npos)
      throw Error(Error::Kind::Input, "binding '" + b + "' needs the form var=value");
    std::string var = b.substr(0, eq), val = b.substr(eq + 1);
    int e = m.elem_index(val);
    if (e >= 0) {
      env.hvals[var] = e;
    } else {
      Rat r = parse_rational(val);
      if (!in_unit(r)) throw Error(Error::Kind::Range, "binding '" + b + "' outside [0,1]");
      env.svals[var] = r;
    }
  }
  return env;
}

int verdict_exit(const Verdict& v) {
  if (v.is_true()) return kExitTrue;
  if (v.is_false()) return kExitFalse;
  return kExitUnknown;
}

void print_verdict(const Verdict& v, const CommonFlags& flags, std::ostream& os) {
  if (flags.machine()) {
    os << "verdict=" << verdict_str(v.value) << " resolution=" << rat_str(v.resolution);
    if (v.budget_hit) os << " budget=exhausted";
    if (!v.witness.empty()) {
      os << " witness=";
      for (std::size_t i = 0; i < v.witness.size(); ++i) {
        if (i) os << ",";
        os << v.witness[i].first << "=" << v.witness[i].second;
      }
    }
    os << "\n";
    return;
  }
  os << verdict_str(v.value) << " (resolution " << rat_str(v.resolution) << ")\n";
  if (v.budget_hit) os << "note: subdivision budget exhausted\n";
  for (const auto& [var, val] : v.witness) os << "  witness " << var << " = " << val << "\n";
}

int report_exit(const MorphismReport& rep) {
  switch (rep.overall()) {
    case CheckOutcome::Pass:
      return kExitTrue;
    case CheckOutcome::Counterexample:
      return kExitFalse;
    case CheckOutcome::Indeterminate:
      return kExitUnknown;
  }
  return kExitError;
}

void print_report(const MorphismReport& rep, const Corpus& corpus, const CommonFlags& flags,
                  std::ostream& os) {
  if (flags.machine()) {
    for (const auto& r : rep.records)
      os << "check formula=" << r.formula << " outcome=" << outcome_str(r.outcome)
         << (r.detail.empty() ? "" : " detail=" + r.detail) << "\n";
    os << "summary pass=" << rep.passes << " counterexample=" << rep.counterexamples
       << " indeterminate=" << rep.indeterminates << "\n";
    return;
  }
  for (const auto& r : rep.records) {
    if (r.outcome == CheckOutcome::Pass) continue;
    os << outcome_str(r.outcome) << "  formula #" << r.formula << "  "
       << to_text(corpus.entries[r.formula].formula) << "  [" << r.detail << "]\n";
  }
  os << rep.passes << " pass, " << rep.counterexamples << " counterexample, "
     << rep.indeterminates << " indeterminate\n";
}

struct CorpusFlags {
  int depth = 3;
  int count = 30;
  std::uint64_t seed = 1;

  Corpus make(const Structure& m, bool allow_hquant = true, bool allow_squant = true) const {
    CorpusParams p;
    p.count = count;
    p.seed = seed;
    p.gen.max_depth = depth;
    p.gen.allow_hquant = allow_hquant;
    p.gen.allow_squant = allow_squant;
    return generate_corpus(m, p);
  }
};

void add_corpus_flags(CLI::App* cmd, CorpusFlags& flags) {
  cmd->add_option("--corpus-depth", flags.depth, "formula nesting depth (default 3)");
  cmd->add_option("--corpus-count", flags.count, "number of corpus formulas (default 30)");
  cmd->add_option("--seed", flags.seed, "corpus generation seed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"workbench for two-sorted structures over the unit interval"};
  app.require_subcommand(1);

  // ---- check ----
  auto* c_check = app.add_subcommand("check", "parse and classify a formula");
  std::string check_sig;
  FormulaArg check_formula;
  CommonFlags check_flags;
  c_check->add_option("--sig", check_sig, "structure file declaring the signature");
  add_formula_arg(c_check, check_formula);
  c_check->add_option("--format", check_flags.format, "text | machine");

  // ---- eval ----
  auto* c_eval = app.add_subcommand("eval", "evaluate a formula in a structure");
  std::string eval_struct;
  FormulaArg eval_formula;
  std::vector<std::string> eval_binds;
  CommonFlags eval_flags;
  c_eval->add_option("structure", eval_struct, "structure file")->required();
  add_formula_arg(c_eval, eval_formula);
  c_eval->add_option("--bind", eval_binds, "variable binding var=element or var=rational");
  add_common(c_eval, eval_flags, false);

  // ---- transform ----
  auto* c_tr = app.add_subcommand("transform", "apply a syntactic construction");
  std::string tr_kind, tr_eps = "1/8", tr_eps2, tr_term, tr_tau, tr_tau_var, tr_set = "(diag 2)";
  std::string tr_xvars = "x", tr_zvars = "z";
  std::string tr_sig;
  FormulaArg tr_formula;
  c_tr->add_option("kind", tr_kind, "approx | sneg | interp | merge | sup | sim")->required();
  add_formula_arg(c_tr, tr_formula);
  c_tr->add_option("--sig", tr_sig, "structure file declaring the signature");
  c_tr->add_option("--eps", tr_eps, "radius (default 1/8)");
  c_tr->add_option("--eps2", tr_eps2, "second radius for merge");
  c_tr->add_option("--term", tr_term, "space-sort term for sup/sim");
  c_tr->add_option("--tau", tr_tau, "rational target for sup");
  c_tr->add_option("--tau-var", tr_tau_var, "variable target for sup");
  c_tr->add_option("--set", tr_set, "dimension-2 set for sim (default (diag 2))");
  c_tr->add_option("--xvars", tr_xvars, "comma-separated x variables for sim");
  c_tr->add_option("--zvars", tr_zvars, "comma-separated z variables for sim");

  // ---- morphism ----
  auto* c_mor = app.add_subcommand("morphism", "check a partial map between structures");
  std::string mor_kind, mor_map;
  CorpusFlags mor_corpus;
  CommonFlags mor_flags;
  c_mor->add_option("kind", mor_kind, "elementary | approx | embed | prop44")->required();
  c_mor->add_option("map", mor_map, "map file with [source], [target], [map]")->required();
  add_corpus_flags(c_mor, mor_corpus);
  add_common(c_mor, mor_flags);

  // ---- tv ----
  auto* c_tv = app.add_subcommand("tv", "substructure witness test against a larger structure");
  std::string tv_sub, tv_super;
  CorpusFlags tv_corpus;
  CommonFlags tv_flags;
  c_tv->add_option("--sub", tv_sub, "substructure file")->required();
  c_tv->add_option("--super", tv_super, "larger structure file")->required();
  add_corpus_flags(c_tv, tv_corpus);
  add_common(c_tv, tv_flags);

  // ---- metric ----
  auto* c_met = app.add_subcommand("metric", "validate and probe a finite metric structure");
  std::string met_file, met_ucont, met_moduli, met_sim;
  bool met_pseudo = false;
  CommonFlags met_flags;
  c_met->add_option("structure", met_file, "structure file with a binary d table")->required();
  c_met->add_flag("--pseudometric", met_pseudo, "allow distance 0 between distinct elements");
  c_met->add_option("--ucont", met_ucont, "function symbol for uniform-continuity sentences");
  c_met->add_option("--moduli", met_moduli, "eps:delta pairs, comma-separated (default 1/2:1/2)");
  c_met->add_option("--sim", met_sim, "tuple pair a1,a2:b1,b2 for the distance-zero check");
  add_common(c_met, met_flags, false);

  // ---- selftest ----
  auto* c_self = app.add_subcommand("selftest", "run the invariant families on random instances");
  std::uint64_t self_seed = 20240901;
  int self_iters = 60;
  CommonFlags self_flags;
  c_self->add_option("--seed", self_seed, "random seed (fixed default for reproducibility)");
  c_self->add_option("--iters", self_iters, "iterations per family");
  add_common(c_self, self_flags);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*c_check) {
      Structure m;
      const Signature* sig = nullptr;
      if (!check_sig.empty()) {
        m = load_structure_file(check_sig);
        sig = &m.sig;
      }
      Formula phi = parse_formula(check_formula.text(), sig);
      FreeVars fv = free_vars(phi);
      if (check_flags.machine()) {
        std::cout << "class=" << class_str(classify(phi));
        std::cout << " free_h=";
        for (std::size_t i = 0; i < fv.hvars.size(); ++i)
          std::cout << (i ? "," : "") << fv.hvars[i];
        std::cout << " free_s=";
        for (std::size_t i = 0; i < fv.svars.size(); ++i)
          std::cout << (i ? "," : "") << fv.svars[i];
        std::cout << "\n";
      } else {
        std::cout << "class: " << class_str(classify(phi)) << "\n";
        std::cout << "free home-sort variables:";
        for (const auto& v : fv.hvars) std::cout << " " << v;
        std::cout << "\nfree space-sort variables:";
        for (const auto& v : fv.svars) std::cout << " " << v;
        std::cout << "\n";
      }
      return kExitTrue;
    }

    if (*c_eval) {
      Structure m = load_structure_file(eval_struct);
      Formula phi = parse_formula(eval_formula.text(), &m.sig, &m.domain);
      Env env = parse_bindings(m, eval_binds);
      Verdict v = eval(m, phi, env, eval_flags.eval_options());
      print_verdict(v, eval_flags, std::cout);
      return verdict_exit(v);
    }

    if (*c_tr) {
      Structure m;
      const Signature* sig = nullptr;
      if (!tr_sig.empty()) {
        m = load_structure_file(tr_sig);
        sig = &m.sig;
      }
      auto split = [](const std::string& s) {
        std::vector<std::string> out;
        std::istringstream in(s);
        std::string tok;
        while (std::getline(in, tok, ',')) out.push_back(tok);
        return out;
      };
      if (tr_kind == "approx" || tr_kind == "sneg" || tr_kind == "merge") {
        Formula phi = parse_formula(tr_formula.text(), sig);
        Rat eps = parse_rational(tr_eps);
        Formula out = tr_kind == "approx" ? approximate(phi, eps)
                      : tr_kind == "sneg"
                          ? strong_negation(phi, eps)
                          : merge_approximations(phi, eps,
                                                 parse_rational(tr_eps2.empty() ? tr_eps : tr_eps2));
        std::cout << to_text(out) << "\n";
        return kExitTrue;
      }
      if (tr_kind == "interp") {
        Formula phi = parse_formula(tr_formula.text(), sig);
        Interpolants ip = interpolants(phi, parse_rational(tr_eps));
        std::cout << to_text(ip.tilde0) << "\n" << to_text(ip.tilde1) << "\n"
                  << to_text(ip.prime) << "\n";
        return kExitTrue;
      }
      if (tr_kind == "sup") {
        if (tr_term.empty()) throw Error(Error::Kind::Input, "sup needs --term");
        TermS t = parse_sterm(tr_term, sig);
        Formula out = tr_tau_var.empty() ? build_sup_formula(t, parse_rational(tr_tau))
                                         : build_sup_formula(t, tr_tau_var);
        std::cout << to_text(out) << "\n";
        return kExitTrue;
      }
      if (tr_kind == "sim") {
        if (tr_term.empty()) throw Error(Error::Kind::Input, "sim needs --term");
        SimTerm st{parse_sterm(tr_term, sig), split(tr_xvars), split(tr_zvars)};
        SimFormula out = build_sim_formula(st, parse_set(tr_set));
        std::cout << to_text(out.formula) << "\n";
        return kExitTrue;
      }
      throw Error(Error::Kind::Input, "unknown transform kind '" + tr_kind + "'");
    }

    if (*c_mor) {
      MorphismInstance inst = load_map_file(mor_map);
      CheckOptions opt;
      opt.eval = mor_flags.eval_options();
      opt.parallel = !mor_flags.serial;
      MorphismReport rep;
      Corpus corpus;
      if (mor_kind == "elementary") {
        corpus = mor_corpus.make(inst.source);
        rep = check_F_elementary(inst.source, inst.target, inst.map, corpus, opt);
      } else if (mor_kind == "approx") {
        corpus = mor_corpus.make(inst.source);
        rep = check_approx_F_elementary(inst.source, inst.target, inst.map, corpus,
                                        mor_flags.eps_schedule(), opt);
      } else if (mor_kind == "embed") {
        corpus = mor_corpus.make(inst.source, /*allow_hquant=*/false);
        rep = check_partial_F_embedding(inst.source, inst.target, inst.map, corpus, opt);
      } else if (mor_kind == "prop44") {
        corpus = mor_corpus.make(inst.source);
        rep = check_prop_4_4(inst.source, inst.target, inst.map, corpus,
                             mor_flags.eps_schedule(), opt);
      } else {
        throw Error(Error::Kind::Input, "unknown morphism kind '" + mor_kind + "'");
      }
      print_report(rep, corpus, mor_flags, std::cout);
      return report_exit(rep);
    }

    if (*c_tv) {
      Structure sub = load_structure_file(tv_sub);
      Structure super = load_structure_file(tv_super);
      Corpus corpus = tv_corpus.make(super);
      CheckOptions opt;
      opt.eval = tv_flags.eval_options();
      opt.parallel = !tv_flags.serial;
      MorphismReport rep = tarski_vaught_check(sub, super, corpus, tv_flags.eps_schedule(), opt);
      print_report(rep, corpus, tv_flags, std::cout);
      return report_exit(rep);
    }

    if (*c_met) {
      MetricFlag flag = met_pseudo ? MetricFlag::Pseudometric : MetricFlag::Metric;
      Structure m = load_metric_space_file(met_file, flag);
      EvalOptions opt = met_flags.eval_options();
      int exit_code = kExitTrue;
      std::cout << (met_flags.machine() ? "metric=valid\n" : "distance table: valid\n");

      if (!met_ucont.empty()) {
        std::vector<std::pair<Rat, Rat>> moduli;
        std::istringstream in(met_moduli.empty() ? "1/2:1/2" : met_moduli);
        std::string tok;
        while (std::getline(in, tok, ',')) {
          auto colon = tok.find(':');
          if (colon == std::string::npos)
            throw Error(Error::Kind::Input, "modulus '" + tok + "' needs the form eps:delta");
          moduli.emplace_back(parse_rational(tok.substr(0, colon)),
                              parse_rational(tok.substr(colon + 1)));
        }
        auto sentences = gen_uniform_continuity_sentences(m.sig, met_ucont, moduli);
        for (std::size_t i = 0; i < sentences.size(); ++i) {
          Verdict v = eval(m, sentences[i], {}, opt);
          if (met_flags.machine())
            std::cout << "ucont eps=" << rat_str(moduli[i].first)
                      << " delta=" << rat_str(moduli[i].second)
                      << " verdict=" << verdict_str(v.value) << "\n";
          else
            std::cout << "uniform continuity (eps=" << rat_str(moduli[i].first)
                      << ", delta=" << rat_str(moduli[i].second) << "): " << verdict_str(v.value)
                      << "\n";
          if (v.is_false()) exit_code = std::max(exit_code, kExitFalse);
          if (v.is_unknown()) exit_code = std::max(exit_code, kExitUnknown);
        }
      }

      if (!met_sim.empty()) {
        auto colon = met_sim.find(':');
        if (colon == std::string::npos)
          throw Error(Error::Kind::Input, "--sim needs the form a1,a2:b1,b2");
        auto tuple = [&](const std::string& s) {
          std::vector<int> out;
          std::istringstream in(s);
          std::string tok;
          while (std::getline(in, tok, ',')) {
            int e = m.elem_index(tok);
            if (e < 0) throw Error(Error::Kind::UnknownSymbol, "unknown element '" + tok + "'");
            out.push_back(e);
          }
          return out;
        };
        std::vector<int> a = tuple(met_sim.substr(0, colon)), b = tuple(met_sim.substr(colon + 1));
        auto corpus = default_sim_term_corpus(static_cast<int>(a.size()));
        SimDistanceReport rep = check_sim_vs_distance(m, a, b, corpus, opt);
        if (met_flags.machine()) {
          std::cout << "sim distance=" << rat_str(rep.distance)
                    << " result=" << (rep.pass() ? "pass" : rep.indeterminate() ? "indeterminate" : "fail")
                    << "\n";
        } else {
          std::cout << "tuple distance " << rat_str(rep.distance) << ": "
                    << (rep.pass() ? "pass" : rep.indeterminate() ? "indeterminate" : "fail")
                    << "\n";
          for (const auto& r : rep.equivalences)
            std::cout << "  " << r.term_text << " -> " << verdict_str(r.verdict.value) << "\n";
          if (rep.separation)
            std::cout << "  separating term " << rep.separation->term_text << " -> "
                      << verdict_str(rep.separation->verdict.value) << "\n";
        }
        if (!rep.pass())
          exit_code = std::max(exit_code, rep.indeterminate() ? kExitUnknown : kExitFalse);
      }
      return exit_code;
    }

    if (*c_self) {
      SelftestConfig cfg;
      cfg.seed = self_seed;
      cfg.iterations = self_iters;
      cfg.eval = self_flags.eval_options();
      cfg.sched = self_flags.eps_schedule();
      if (self_iters == 0)
        std::cout << "warning: zero iterations, every family passes vacuously\n";
      auto results = run_selftest(cfg);
      bool ok = print_selftest(results, std::cout, self_flags.machine());
      return ok ? kExitTrue : kExitFalse;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
