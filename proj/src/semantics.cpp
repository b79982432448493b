#include "twosort/semantics.hpp"

#include <algorithm>
#include <map>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "twosort/error.hpp"
#include "twosort/transforms.hpp"

namespace twosort {

std::string verdict_str(Verdict::Value v) {
  switch (v) {
    case Verdict::Value::True:
      return "True";
    case Verdict::Value::False:
      return "False";
    case Verdict::Value::Unknown:
      return "Unknown";
  }
  return "?";
}

namespace {

using Value = Verdict::Value;

Value kleene_not(Value v) {
  if (v == Value::True) return Value::False;
  if (v == Value::False) return Value::True;
  return Value::Unknown;
}

struct Evaluator {
  const Structure& m;
  const EvalOptions& opt;

  // Space-sort variables bound to whole intervals during branch-and-bound.
  using IntervalEnv = std::map<std::string, Interval>;

  Verdict run(const Formula& phi, const Env& env, const IntervalEnv& ienv) const {
    switch (phi.kind) {
      case Formula::Kind::HAtom: {
        std::vector<int> args;
        args.reserve(phi.hargs.size());
        for (const auto& t : phi.hargs) args.push_back(term_eval_H(m, t, env));
        int r = m.rel_index(phi.rel);
        if (r < 0)
          throw Error(Error::Kind::UnknownSymbol, "unknown relation '" + phi.rel + "'");
        bool in = m.rel_tables[r].count(args) > 0;
        return make(phi.negated ? !in : in);
      }
      case Formula::Kind::HEq: {
        bool eq = term_eval_H(m, phi.hargs[0], env) == term_eval_H(m, phi.hargs[1], env);
        return make(phi.negated ? !eq : eq);
      }
      case Formula::Kind::SAtom:
        return eval_satom(phi, env, ienv);
      case Formula::Kind::Not: {
        Verdict v = run(phi.children[0], env, ienv);
        Verdict out;
        out.value = kleene_not(v.value);
        out.resolution = v.resolution;
        out.budget_hit = v.budget_hit;
        return out;
      }
      case Formula::Kind::And:
      case Formula::Kind::Or:
        return eval_connective(phi, env, ienv);
      case Formula::Kind::ForallH:
      case Formula::Kind::ExistsH:
        return eval_hquant(phi, env, ienv);
      case Formula::Kind::ForallS:
      case Formula::Kind::ExistsS:
        return eval_squant(phi, env, ienv);
    }
    throw Error(Error::Kind::Input, "malformed formula");
  }

  static Verdict make(bool b) {
    Verdict v;
    v.value = b ? Value::True : Value::False;
    return v;
  }

  Verdict eval_satom(const Formula& phi, const Env& env, const IntervalEnv& ienv) const {
    // Interval-bound variables actually occurring in the tuple.
    std::vector<std::string> ivars;
    {
      std::vector<std::string> hv, sv;
      for (const auto& t : phi.stuple) collect_free_vars(t, hv, sv);
      std::sort(sv.begin(), sv.end());
      sv.erase(std::unique(sv.begin(), sv.end()), sv.end());
      for (const auto& v : sv)
        if (!env.svals.count(v)) {
          auto it = ienv.find(v);
          if (it == ienv.end())
            throw Error(Error::Kind::UnknownSymbol, "unbound space-sort variable '" + v + "'");
          ivars.push_back(v);
        }
    }

    if (ivars.empty()) {
      std::vector<Rat> p;
      p.reserve(phi.stuple.size());
      for (const auto& t : phi.stuple) p.push_back(term_eval_S(m, t, env));
      return make(set_member(phi.sset, p));
    }

    std::map<std::string, int> proj;
    IntervalBox domain_box;
    for (const auto& v : ivars) {
      proj[v] = static_cast<int>(domain_box.dims.size());
      domain_box.dims.push_back(ienv.at(v));
    }
    IntervalBox hull;
    hull.dims.reserve(phi.stuple.size());
    for (const auto& t : phi.stuple) {
      ContFunc f = compile(t, env, proj, domain_box.dim());
      hull.dims.push_back(func_hull(f, domain_box));
    }
    switch (box_test(phi.sset, hull)) {
      case BoxRelation::Inside:
        return make(true);
      case BoxRelation::Outside:
        return make(false);
      case BoxRelation::Boundary: {
        Verdict v;
        v.value = Value::Unknown;
        return v;
      }
    }
    return Verdict{};
  }

  ContFunc compile(const TermS& t, const Env& env, const std::map<std::string, int>& proj,
                   int arity) const {
    switch (t.kind) {
      case TermS::Kind::Var: {
        auto it = env.svals.find(t.name);
        if (it != env.svals.end()) return ContFunc::constant(it->second, arity);
        return ContFunc::proj(proj.at(t.name), arity);
      }
      case TermS::Kind::Lit:
        return ContFunc::constant(t.lit, arity);
      case TermS::Kind::Cross:
        return ContFunc::constant(term_eval_S(m, t, env), arity);
      case TermS::Kind::Builtin: {
        std::vector<ContFunc> args;
        args.reserve(t.sargs.size());
        for (const auto& a : t.sargs) args.push_back(compile(a, env, proj, arity));
        switch (t.fn) {
          case TermS::Fn::CutSum:
            return ContFunc::apply(ContFunc::Kind::CutSum, std::move(args));
          case TermS::Fn::CutDiff:
            return ContFunc::apply(ContFunc::Kind::CutDiff, std::move(args));
          case TermS::Fn::Min:
            return ContFunc::apply(ContFunc::Kind::Min, std::move(args));
          case TermS::Fn::Max:
            return ContFunc::apply(ContFunc::Kind::Max, std::move(args));
          case TermS::Fn::Compl:
            return ContFunc::apply(ContFunc::Kind::Compl, std::move(args));
          case TermS::Fn::Scale:
            return ContFunc::scale(t.lit, std::move(args[0]));
          case TermS::Fn::Pwl:
            return ContFunc::pwl(t.breaks, std::move(args[0]));
          default:
            break;
        }
        throw Error(Error::Kind::Input, "malformed builtin term");
      }
    }
    throw Error(Error::Kind::Input, "malformed space-sort term");
  }

  Verdict eval_connective(const Formula& phi, const Env& env, const IntervalEnv& ienv) const {
    const bool is_and = phi.kind == Formula::Kind::And;
    const Value decisive = is_and ? Value::False : Value::True;
    Verdict out;
    out.value = is_and ? Value::True : Value::False;
    for (const auto& ch : phi.children) {
      Verdict v = run(ch, env, ienv);
      out.resolution = std::min(out.resolution, v.resolution);
      out.budget_hit = out.budget_hit || v.budget_hit;
      if (v.value == decisive) {
        out.value = decisive;
        out.witness = std::move(v.witness);
        return out;
      }
      if (v.value == Value::Unknown) out.value = Value::Unknown;
    }
    return out;
  }

  Verdict eval_hquant(const Formula& phi, const Env& env, const IntervalEnv& ienv) const {
    const bool is_forall = phi.kind == Formula::Kind::ForallH;
    const Value decisive = is_forall ? Value::False : Value::True;
    Verdict out;
    out.value = is_forall ? Value::True : Value::False;
    Env sub = env;
    for (int e = 0; e < m.size(); ++e) {
      sub.hvals[phi.var] = e;
      Verdict v = run(phi.children[0], sub, ienv);
      out.resolution = std::min(out.resolution, v.resolution);
      out.budget_hit = out.budget_hit || v.budget_hit;
      if (v.value == decisive) {
        out.value = decisive;
        out.witness.emplace_back(phi.var, m.elem_name(e));
        for (auto& w : v.witness) out.witness.push_back(std::move(w));
        return out;
      }
      if (v.value == Value::Unknown) out.value = Value::Unknown;
    }
    return out;
  }

  struct BoxResult {
    Value decided = Value::Unknown;  // contribution of this box
    bool split = false;              // subdivide further
    Rat resolution = Rat(1);
    bool budget_hit = false;
    std::vector<std::pair<std::string, std::string>> witness;
  };

  // Branch-and-bound over [0,1] for one space-sort variable. Boxes are
  // processed generation by generation (all boxes of a generation share one
  // width), so verdicts and witnesses do not depend on thread scheduling.
  Verdict eval_squant(const Formula& phi, const Env& env, const IntervalEnv& ienv) const {
    const bool is_forall = phi.kind == Formula::Kind::ForallS;

    std::vector<Interval> gen{Interval{Rat(0), Rat(1)}};
    Rat width = Rat(1);
    std::uint64_t used = 0;

    Verdict out;
    out.value = is_forall ? Value::True : Value::False;
    bool residual_unknown = false;

    while (!gen.empty()) {
      if (used + gen.size() > opt.max_boxes) {
        out.value = Value::Unknown;
        out.budget_hit = true;
        out.witness.clear();
        return out;
      }
      used += gen.size();
      out.resolution = std::min(out.resolution, width);

      std::vector<BoxResult> results(gen.size());
      const bool mature = width <= opt.delta;  // no further splitting

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (opt.parallel && gen.size() > 1)
#endif
      for (long i = 0; i < static_cast<long>(gen.size()); ++i)
        results[i] = examine_box(phi, env, ienv, gen[i], is_forall, mature);

      std::vector<Interval> next;
      for (std::size_t i = 0; i < results.size(); ++i) {
        BoxResult& r = results[i];
        out.resolution = std::min(out.resolution, r.resolution);
        out.budget_hit = out.budget_hit || r.budget_hit;
        if (r.decided == (is_forall ? Value::False : Value::True)) {
          // First decisive box in canonical order wins.
          out.value = r.decided;
          out.witness = std::move(r.witness);
          return out;
        }
        if (r.split) {
          auto [lo, hi] = box_bisect(IntervalBox{{gen[i]}});
          next.push_back(lo.dims[0]);
          next.push_back(hi.dims[0]);
        } else if (r.decided == Value::Unknown) {
          residual_unknown = true;
        }
      }
      gen = std::move(next);
      width = width / 2;
    }

    if (residual_unknown) out.value = Value::Unknown;
    return out;
  }

  BoxResult examine_box(const Formula& phi, const Env& env, const IntervalEnv& ienv,
                        const Interval& box, bool is_forall, bool mature) const {
    BoxResult r;

    IntervalEnv sub_ienv = ienv;
    sub_ienv[phi.var] = box;
    Env sub_env = env;
    sub_env.svals.erase(phi.var);  // interval binding shadows any outer one

    Verdict bv = run(phi.children[0], sub_env, sub_ienv);
    r.resolution = bv.resolution;
    r.budget_hit = bv.budget_hit;

    const Value good = is_forall ? Value::True : Value::False;     // box discharged
    const Value decisive = is_forall ? Value::False : Value::True; // quantifier decided

    if (bv.value == good) {
      r.decided = good;
      return r;
    }
    if (bv.value == decisive) {
      // The body has this value on the whole box; the midpoint is a concrete
      // rational representative.
      r.decided = decisive;
      r.witness.emplace_back(phi.var, rat_str((box.lo + box.hi) / 2));
      return r;
    }

    // Unknown on the box: probe rational points for a decisive witness.
    sub_ienv.erase(phi.var);
    const Rat mid = (box.lo + box.hi) / 2;
    for (const Rat& p : {mid, box.lo, box.hi}) {
      sub_env.svals[phi.var] = p;
      Verdict pv = run(phi.children[0], sub_env, sub_ienv);
      r.resolution = std::min(r.resolution, pv.resolution);
      r.budget_hit = r.budget_hit || pv.budget_hit;
      if (pv.value == decisive) {
        r.decided = decisive;
        r.witness.emplace_back(phi.var, rat_str(p));
        for (auto& w : pv.witness) r.witness.push_back(std::move(w));
        return r;
      }
    }

    r.split = !mature;
    return r;
  }
};

}  // namespace

Verdict eval(const Structure& m, const Formula& phi, const Env& env, const EvalOptions& opt) {
  if (!(opt.delta > 0)) throw Error(Error::Kind::Precondition, "delta must be positive");
  FreeVars fv = free_vars(phi);
  for (const auto& v : fv.hvars)
    if (!env.hvals.count(v))
      throw Error(Error::Kind::UnknownSymbol, "unbound home-sort variable '" + v + "'");
  for (const auto& v : fv.svars)
    if (!env.svals.count(v))
      throw Error(Error::Kind::UnknownSymbol, "unbound space-sort variable '" + v + "'");
  for (const auto& [name, e] : env.hvals)
    if (e < 0 || e >= m.size())
      throw Error(Error::Kind::Input, "binding for '" + name + "' is not a domain element");
  for (const auto& [name, r] : env.svals)
    if (!in_unit(r)) throw Error(Error::Kind::Range, "binding for '" + name + "' outside [0,1]");

  Evaluator ev{m, opt};
  return ev.run(phi, env, {});
}

EpsSchedule EpsSchedule::standard() {
  EpsSchedule s;
  for (int d = 2; d <= 64; d *= 2) s.steps.push_back(Rat(1, d));
  return s;
}

void EpsSchedule::validate() const {
  if (steps.empty()) throw Error(Error::Kind::Precondition, "empty radius schedule");
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (!(steps[i] > 0)) throw Error(Error::Kind::Precondition, "schedule radii must be positive");
    if (i > 0 && !(steps[i] < steps[i - 1]))
      throw Error(Error::Kind::Precondition, "schedule must be strictly decreasing");
  }
}

ApproxSatResult eval_approx_sat(const Structure& m, const Formula& phi, const Env& env,
                                const EpsSchedule& sched, const EvalOptions& opt) {
  sched.validate();
  ApproxSatResult out;
  Verdict finest_verdict;
  for (std::size_t i = 0; i < sched.steps.size(); ++i) {
    Formula approx = approximate(phi, sched.steps[i]);
    Verdict v = eval(m, approx, env, opt);
    if (v.is_false()) {
      // A certified failure of one approximation refutes the whole family,
      // since coarser radii are implied by finer ones.
      out.verdict = v;
      out.refuting_eps = sched.steps[i];
      return out;
    }
    if (i + 1 == sched.steps.size()) finest_verdict = v;
  }
  // True at the finest radius implies every coarser approximation.
  out.verdict = finest_verdict;
  if (!finest_verdict.is_true()) out.verdict.value = Verdict::Value::Unknown;
  return out;
}

}  // namespace twosort
