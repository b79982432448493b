#include "twosort/randgen.hpp"

#include <algorithm>

#include "twosort/error.hpp"

namespace twosort {

namespace {

int pick(std::mt19937_64& rng, int n) {
  return static_cast<int>(rng() % static_cast<std::uint64_t>(n));
}

bool chance(std::mt19937_64& rng, int percent) { return pick(rng, 100) < percent; }

}  // namespace

Rat random_grid_value(std::mt19937_64& rng, int grid_den) {
  return Rat(pick(rng, grid_den + 1), grid_den);
}

Structure random_structure(std::mt19937_64& rng, const StructureGenParams& p) {
  static const std::vector<std::string> names = {"a", "b", "c", "e", "h", "k", "m", "n"};
  int n = p.min_elems + pick(rng, p.max_elems - p.min_elems + 1);
  Structure m;
  m.domain.assign(names.begin(), names.begin() + n);

  if (p.with_relation) m.sig.relations.push_back({"R", 2});
  if (p.with_hfunc) m.sig.hfuncs.push_back({"f", 1});
  for (int i = 0; i < p.unary_cross; ++i)
    m.sig.crossfuncs.push_back({i == 0 ? "g" : "g" + std::to_string(i + 1), 1});
  if (p.with_binary_cross) m.sig.crossfuncs.push_back({"d", 2});

  m.rel_tables.resize(m.sig.relations.size());
  m.hfunc_tables.resize(m.sig.hfuncs.size());
  m.cross_tables.resize(m.sig.crossfuncs.size());

  if (p.with_relation) {
    for (const auto& t : all_tuples(n, 2))
      if (chance(rng, 40)) m.rel_tables[0].insert(t);
  }
  if (p.with_hfunc) {
    for (const auto& t : all_tuples(n, 1)) m.hfunc_tables[0][t] = pick(rng, n);
  }
  for (std::size_t g = 0; g < m.sig.crossfuncs.size(); ++g) {
    int arity = m.sig.crossfuncs[g].arity;
    if (arity == 2 && p.with_binary_cross && m.sig.crossfuncs[g].name == "d") {
      // Symmetric with zero diagonal; not necessarily a metric.
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
          Rat v = i == j ? Rat(0) : random_grid_value(rng, p.grid_den);
          m.cross_tables[g][{i, j}] = v;
          m.cross_tables[g][{j, i}] = v;
        }
    } else {
      for (const auto& t : all_tuples(n, arity))
        m.cross_tables[g][t] = random_grid_value(rng, p.grid_den);
    }
  }
  m.validate();
  return m;
}

namespace {

ClosedSet random_primitive_set(std::mt19937_64& rng, const SetGenParams& p) {
  auto grid = [&] { return random_grid_value(rng, p.grid_den); };
  int kind = pick(rng, p.halfspaces ? 4 : 3);
  switch (kind) {
    case 0: {  // point
      std::vector<Rat> pt;
      for (int i = 0; i < p.dim; ++i) {
        if (!p.point_pool.empty() && chance(rng, 60))
          pt.push_back(p.point_pool[pick(rng, static_cast<int>(p.point_pool.size()))]);
        else
          pt.push_back(grid());
      }
      return ClosedSet::make_point(pt);
    }
    case 1:
    case 2: {  // box
      IntervalBox b;
      for (int i = 0; i < p.dim; ++i) {
        Rat lo = grid(), hi = grid();
        if (lo > hi) std::swap(lo, hi);
        b.dims.push_back({lo, hi});
      }
      return ClosedSet::make_box(std::move(b));
    }
    default: {  // halfspace with |a|_1 <= 2
      std::vector<Rat> a(p.dim, Rat(0));
      int nz = p.dim == 1 ? 1 : 1 + pick(rng, 2);
      for (int i = 0; i < nz; ++i) a[p.dim == 1 ? 0 : (i + pick(rng, p.dim)) % p.dim] = chance(rng, 50) ? Rat(1) : Rat(-1);
      bool any = false;
      for (const auto& c : a) any = any || c != 0;
      if (!any) a[0] = Rat(1);
      Rat b = Rat(pick(rng, 4 * p.grid_den + 1) - 2 * p.grid_den, p.grid_den);
      return ClosedSet::make_halfspace(std::move(a), std::move(b));
    }
  }
}

}  // namespace

ClosedSet random_set(std::mt19937_64& rng, const SetGenParams& p) {
  if (p.max_depth > 0 && chance(rng, 35)) {
    SetGenParams sub = p;
    sub.max_depth = p.max_depth - 1;
    std::vector<ClosedSet> cs;
    cs.push_back(random_set(rng, sub));
    cs.push_back(random_set(rng, sub));
    return chance(rng, 50) ? ClosedSet::make_union(std::move(cs))
                           : ClosedSet::make_inter(std::move(cs));
  }
  if (p.dim == 2 && chance(rng, 25)) {
    ClosedSet d = ClosedSet::diagonal2();
    if (chance(rng, 50)) d = set_fatten(d, Rat(1, 1 << (2 + pick(rng, 2))));
    return d;
  }
  return random_primitive_set(rng, p);
}

namespace {

struct FormulaGen {
  std::mt19937_64& rng;
  const Structure& m;
  const FormulaGenParams& p;
  std::vector<std::string> hvars;  // free pool plus currently bound
  std::vector<std::string> svars;  // currently bound only
  int fresh = 0;
  std::vector<Rat> point_pool;

  FormulaGen(std::mt19937_64& r, const Structure& mm, const FormulaGenParams& pp)
      : rng(r), m(mm), p(pp) {
    if (p.max_free_hvars < 1)
      throw Error(Error::Kind::Precondition, "formula generator needs at least one pool variable");
    for (int i = 1; i <= p.max_free_hvars; ++i) hvars.push_back("x" + std::to_string(i));
    for (const auto& table : m.cross_tables)
      for (const auto& [k, v] : table) {
        (void)k;
        point_pool.push_back(v);
      }
    std::sort(point_pool.begin(), point_pool.end());
    point_pool.erase(std::unique(point_pool.begin(), point_pool.end()), point_pool.end());
  }

  std::string random_hvar() { return hvars[pick(rng, static_cast<int>(hvars.size()))]; }

  TermH random_hterm() {
    if (!m.sig.hfuncs.empty() && chance(rng, 25)) {
      const auto& f = m.sig.hfuncs[pick(rng, static_cast<int>(m.sig.hfuncs.size()))];
      std::vector<TermH> args;
      for (int i = 0; i < f.arity; ++i) args.push_back(TermH::var(random_hvar()));
      return TermH::func(f.name, std::move(args));
    }
    return TermH::var(random_hvar());
  }

  TermS random_sterm(int depth) {
    if (depth > 0 && chance(rng, 45)) {
      int n_kinds = p.fancy_builtins ? 7 : 5;
      switch (pick(rng, n_kinds)) {
        case 0:
          return TermS::builtin(TermS::Fn::CutSum, {random_sterm(depth - 1), random_sterm(depth - 1)});
        case 1:
          return TermS::builtin(TermS::Fn::CutDiff, {random_sterm(depth - 1), random_sterm(depth - 1)});
        case 2:
          return TermS::builtin(TermS::Fn::Min, {random_sterm(depth - 1), random_sterm(depth - 1)});
        case 3:
          return TermS::builtin(TermS::Fn::Max, {random_sterm(depth - 1), random_sterm(depth - 1)});
        case 4:
          return TermS::builtin(TermS::Fn::Compl, {random_sterm(depth - 1)});
        case 5:
          return TermS::scaled(Rat(1, 1 + pick(rng, 3)), random_sterm(depth - 1));
        default:
          return TermS::pwl({{Rat(0), Rat(0)}, {Rat(1, 2), Rat(1)}, {Rat(1), Rat(0)}},
                            random_sterm(depth - 1));
      }
    }
    int choices = svars.empty() ? 2 : 3;
    switch (pick(rng, choices)) {
      case 0: {
        if (!m.sig.crossfuncs.empty()) {
          const auto& g = m.sig.crossfuncs[pick(rng, static_cast<int>(m.sig.crossfuncs.size()))];
          std::vector<TermH> args;
          for (int i = 0; i < g.arity; ++i) args.push_back(random_hterm());
          return TermS::cross(g.name, std::move(args));
        }
        [[fallthrough]];
      }
      case 1:
        if (!point_pool.empty() && chance(rng, 40))
          return TermS::literal(point_pool[pick(rng, static_cast<int>(point_pool.size()))]);
        return TermS::literal(random_grid_value(rng, p.grid_den));
      default:
        return TermS::var(svars[pick(rng, static_cast<int>(svars.size()))]);
    }
  }

  Formula random_hatom() {
    bool neg = p.allow_negated_atoms && chance(rng, 30);
    if (!m.sig.relations.empty() && chance(rng, 70)) {
      const auto& r = m.sig.relations[pick(rng, static_cast<int>(m.sig.relations.size()))];
      std::vector<TermH> args;
      for (int i = 0; i < r.arity; ++i) args.push_back(random_hterm());
      return Formula::hatom(r.name, std::move(args), neg);
    }
    return Formula::heq(random_hterm(), random_hterm(), neg);
  }

  Formula random_satom() {
    int dim = (p.max_satom_dim >= 2 && chance(rng, 30)) ? 2 : 1;
    SetGenParams sp;
    sp.dim = dim;
    sp.grid_den = p.grid_den;
    sp.point_pool = point_pool;
    std::vector<TermS> tuple;
    for (int i = 0; i < dim; ++i) tuple.push_back(random_sterm(2));
    return Formula::satom(std::move(tuple), random_set(rng, sp));
  }

  Formula atom() {
    bool can_h = !m.sig.relations.empty() || !m.sig.hfuncs.empty() || hvars.size() > 1;
    bool can_s = !m.sig.crossfuncs.empty() || !svars.empty();
    if (can_s && (!can_h || chance(rng, 60))) return random_satom();
    return random_hatom();
  }

  Formula gen(int depth) {
    if (depth <= 0) return atom();
    int roll = pick(rng, 100);
    if (roll < 25) {
      std::vector<Formula> cs{gen(depth - 1), gen(depth - 1)};
      return Formula::conj(std::move(cs));
    }
    if (roll < 50) {
      std::vector<Formula> cs{gen(depth - 1), gen(depth - 1)};
      return Formula::disj(std::move(cs));
    }
    if (roll < 70 && p.allow_hquant) {
      std::string v = "u" + std::to_string(++fresh);
      hvars.push_back(v);
      Formula body = gen(depth - 1);
      hvars.pop_back();
      return Formula::quant(chance(rng, 50) ? Formula::Kind::ForallH : Formula::Kind::ExistsH, v,
                            std::move(body));
    }
    if (roll < 90 && p.allow_squant) {
      std::string v = "s" + std::to_string(++fresh);
      svars.push_back(v);
      Formula body = gen(depth - 1);
      svars.pop_back();
      return Formula::quant(chance(rng, 50) ? Formula::Kind::ForallS : Formula::Kind::ExistsS, v,
                            std::move(body));
    }
    return atom();
  }
};

}  // namespace

Formula random_formula(std::mt19937_64& rng, const Structure& m, const FormulaGenParams& p) {
  FormulaGen gen(rng, m, p);
  return gen.gen(p.max_depth);
}

Env random_env(std::mt19937_64& rng, const Structure& m, const Formula& phi) {
  Env env;
  FreeVars fv = free_vars(phi);
  for (const auto& v : fv.hvars) env.hvals[v] = pick(rng, m.size());
  for (const auto& v : fv.svars) env.svals[v] = random_grid_value(rng, 16);
  return env;
}

}  // namespace twosort
