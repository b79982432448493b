#include "twosort/metric.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "twosort/error.hpp"

namespace twosort {

namespace {

int require_d(const Structure& m, const std::string& dsym) {
  int g = m.cross_index(dsym);
  if (g < 0)
    throw Error(Error::Kind::UnknownSymbol, "no cross-sort symbol '" + dsym + "' declared");
  if (m.sig.crossfuncs[g].arity != 2)
    throw Error(Error::Kind::Arity, "'" + dsym + "' must be binary");
  return g;
}

}  // namespace

void validate_metric(const Structure& m, MetricFlag flag, const std::string& dsym) {
  int g = require_d(m, dsym);
  const auto& table = m.cross_tables[g];
  auto d = [&](int i, int j) { return table.at({i, j}); };
  int n = m.size();
  for (int i = 0; i < n; ++i) {
    if (d(i, i) != 0)
      throw Error(Error::Kind::Input,
                  dsym + "(" + m.elem_name(i) + "," + m.elem_name(i) + ") must be 0");
    for (int j = 0; j < n; ++j) {
      if (d(i, j) != d(j, i))
        throw Error(Error::Kind::Input, "symmetry fails on (" + m.elem_name(i) + "," +
                                            m.elem_name(j) + ")");
      if (flag == MetricFlag::Metric && i != j && d(i, j) == 0)
        throw Error(Error::Kind::Input, "distinct elements " + m.elem_name(i) + "," +
                                            m.elem_name(j) + " at distance 0");
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (d(i, k) > d(i, j) + d(j, k))
          throw Error(Error::Kind::Input,
                      "triangle inequality fails on (" + m.elem_name(i) + "," + m.elem_name(j) +
                          "," + m.elem_name(k) + ")");
}

Structure load_metric_space(const std::string& text, MetricFlag flag, const std::string& dsym) {
  Structure m = load_structure(text);
  validate_metric(m, flag, dsym);
  return m;
}

Structure load_metric_space_file(const std::string& path, MetricFlag flag,
                                 const std::string& dsym) {
  std::ifstream in(path);
  if (!in) throw Error(Error::Kind::Input, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_metric_space(buf.str(), flag, dsym);
}

Rat metric_distance(const Structure& m, int a, int b, const std::string& dsym) {
  int g = require_d(m, dsym);
  return m.cross_tables[g].at({a, b});
}

Rat sup_distance(const Structure& m, const std::vector<int>& a, const std::vector<int>& b,
                 const std::string& dsym) {
  if (a.size() != b.size() || a.empty())
    throw Error(Error::Kind::Dimension, "tuples must be nonempty and of equal length");
  Rat out = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    out = std::max(out, metric_distance(m, a[i], b[i], dsym));
  return out;
}

std::vector<Formula> gen_uniform_continuity_sentences(const Signature& sig,
                                                      const std::string& fsym,
                                                      const std::vector<std::pair<Rat, Rat>>& moduli,
                                                      const std::string& dsym) {
  const Signature::Sym* f = sig.find_hfunc(fsym);
  if (!f) throw Error(Error::Kind::UnknownSymbol, "no function '" + fsym + "' declared");
  const Signature::Sym* d = sig.find_crossfunc(dsym);
  if (!d || d->arity != 2)
    throw Error(Error::Kind::UnknownSymbol, "no binary cross symbol '" + dsym + "' declared");

  std::vector<Formula> out;
  for (const auto& [eps, delta] : moduli) {
    if (!(eps > 0) || eps > 1 || !(delta > 0) || delta > 1)
      throw Error(Error::Kind::Range, "moduli must lie in (0,1]");

    std::vector<TermH> xs, ys;
    std::vector<std::string> names;
    for (int i = 0; i < f->arity; ++i) {
      std::string x = "x" + std::to_string(i + 1), y = "y" + std::to_string(i + 1);
      xs.push_back(TermH::var(x));
      ys.push_back(TermH::var(y));
      names.push_back(x);
      names.push_back(y);
    }

    std::vector<Formula> disjuncts;
    for (int i = 0; i < f->arity; ++i)
      disjuncts.push_back(Formula::satom({TermS::cross(dsym, {xs[i], ys[i]})},
                                         ClosedSet::make_box({{ {delta, Rat(1)} }})));
    disjuncts.push_back(Formula::satom(
        {TermS::cross(dsym, {TermH::func(fsym, xs), TermH::func(fsym, ys)})},
        ClosedSet::make_box({{ {Rat(0), eps} }})));

    Formula body = Formula::disj(std::move(disjuncts));
    for (auto it = names.rbegin(); it != names.rend(); ++it)
      body = Formula::quant(Formula::Kind::ForallH, *it, std::move(body));
    out.push_back(std::move(body));
  }
  return out;
}

namespace {

// max(d(x1,z1), ..., d(xm,zm)): the supremum distance between the x- and
// z-tuples as a term. Instantiating z with a tuple a separates a from any b
// with positive distance, since the term vanishes at x:=a, z:=a.
SimTerm sup_distance_term(int tuple_len, const std::string& dsym) {
  std::vector<std::string> xv, zv;
  for (int i = 1; i <= tuple_len; ++i) {
    xv.push_back("x" + std::to_string(i));
    zv.push_back("z" + std::to_string(i));
  }
  std::vector<TermS> comps;
  for (int i = 0; i < tuple_len; ++i)
    comps.push_back(TermS::cross(dsym, {TermH::var(xv[i]), TermH::var(zv[i])}));
  TermS term = tuple_len == 1 ? comps[0] : TermS::builtin(TermS::Fn::Max, comps);
  return {std::move(term), std::move(xv), std::move(zv)};
}

}  // namespace

std::vector<SimTerm> default_sim_term_corpus(int tuple_len, const std::string& dsym) {
  if (tuple_len < 1) throw Error(Error::Kind::Dimension, "tuple length must be positive");
  std::vector<std::string> xv, zv{"z1"};
  for (int i = 1; i <= tuple_len; ++i) xv.push_back("x" + std::to_string(i));

  auto dterm = [&](int i) { return TermS::cross(dsym, {TermH::var(xv[i]), TermH::var(zv[0])}); };

  std::vector<SimTerm> out;
  for (int i = 0; i < tuple_len; ++i) out.push_back({dterm(i), xv, zv});
  out.push_back(sup_distance_term(tuple_len, dsym));
  // Depth-two combinations over the first components.
  int j = tuple_len > 1 ? 1 : 0;
  out.push_back({TermS::builtin(TermS::Fn::CutSum, {dterm(0), dterm(j)}), xv, zv});
  out.push_back({TermS::builtin(TermS::Fn::CutDiff, {dterm(0), dterm(j)}), xv, zv});
  out.push_back({TermS::builtin(TermS::Fn::Min, {dterm(0), dterm(j)}), xv, zv});
  out.push_back({TermS::builtin(TermS::Fn::Max, {dterm(0), dterm(j)}), xv, zv});
  out.push_back(
      {TermS::builtin(TermS::Fn::CutSum, {dterm(0), TermS::builtin(TermS::Fn::CutDiff, {dterm(j), dterm(0)})}),
       xv, zv});
  return out;
}

bool SimDistanceReport::pass() const {
  if (zero_distance) {
    for (const auto& r : equivalences)
      if (!r.pass) return false;
    return true;
  }
  return separation && separation->pass && separation_at_a;
}

bool SimDistanceReport::indeterminate() const {
  if (zero_distance) {
    bool any_unknown = false;
    for (const auto& r : equivalences) {
      if (r.verdict.is_false()) return false;  // hard failure dominates
      any_unknown = any_unknown || r.verdict.is_unknown();
    }
    return any_unknown;
  }
  return separation && separation->verdict.is_unknown();
}

SimDistanceReport check_sim_vs_distance(const Structure& m, const std::vector<int>& a,
                                        const std::vector<int>& b,
                                        const std::vector<SimTerm>& corpus,
                                        const EvalOptions& opt, const std::string& dsym) {
  if (a.size() != b.size() || a.empty())
    throw Error(Error::Kind::Dimension, "tuples must be nonempty and of equal length");
  for (int e : a)
    if (e < 0 || e >= m.size()) throw Error(Error::Kind::Input, "tuple element out of range");
  for (int e : b)
    if (e < 0 || e >= m.size()) throw Error(Error::Kind::Input, "tuple element out of range");

  SimDistanceReport report;
  report.distance = sup_distance(m, a, b, dsym);
  report.zero_distance = report.distance == 0;

  auto bind_xy = [&](const SimFormula& sf) {
    Env env;
    for (std::size_t i = 0; i < sf.xvars.size(); ++i) env.hvals[sf.xvars[i]] = a[i];
    for (std::size_t i = 0; i < sf.yvars.size(); ++i) env.hvals[sf.yvars[i]] = b[i];
    return env;
  };

  if (report.zero_distance) {
    for (const auto& t : corpus) {
      if (t.xvars.size() != a.size())
        throw Error(Error::Kind::Dimension, "corpus term arity does not match the tuples");
      SimFormula sf = build_sim_formula(t, ClosedSet::diagonal2());
      Verdict v = eval(m, sf.formula, bind_xy(sf), opt);
      report.equivalences.push_back({to_text(t.term), v, v.is_true()});
    }
    return report;
  }

  // Positive distance: the sup-distance term separates the tuples.
  SimTerm sep = sup_distance_term(static_cast<int>(a.size()), dsym);
  SimFormula sf = build_sim_formula(sep, ClosedSet::diagonal2());
  Verdict v = eval(m, sf.formula, bind_xy(sf), opt);
  report.separation = SimDistanceRecord{to_text(sep.term), v, v.is_false()};

  // The concrete witness from the proof: instantiate z with a itself, where
  // the term vanishes on the a-side and equals the tuple distance on the
  // b-side.
  Env at_a, at_b;
  for (std::size_t i = 0; i < a.size(); ++i) {
    at_a.hvals[sep.xvars[i]] = a[i];
    at_b.hvals[sep.xvars[i]] = b[i];
    at_a.hvals[sep.zvars[i]] = a[i];
    at_b.hvals[sep.zvars[i]] = a[i];
  }
  report.separation_at_a = term_eval_S(m, sep.term, at_a) != term_eval_S(m, sep.term, at_b);
  return report;
}

}  // namespace twosort
