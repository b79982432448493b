#include "twosort/structures.hpp"

#include <fstream>
#include <sstream>

#include "twosort/error.hpp"

namespace twosort {

namespace {

const Signature::Sym* find_sym(const std::vector<Signature::Sym>& v, const std::string& n) {
  for (const auto& s : v)
    if (s.name == n) return &s;
  return nullptr;
}

}  // namespace

const Signature::Sym* Signature::find_relation(const std::string& n) const {
  return find_sym(relations, n);
}
const Signature::Sym* Signature::find_hfunc(const std::string& n) const {
  return find_sym(hfuncs, n);
}
const Signature::Sym* Signature::find_crossfunc(const std::string& n) const {
  return find_sym(crossfuncs, n);
}

bool Signature::has_symbol(const std::string& n) const {
  return find_relation(n) || find_hfunc(n) || find_crossfunc(n);
}

void Signature::validate() const {
  std::set<std::string> names;
  auto check = [&](const Sym& s, int min_arity, const char* what) {
    if (!names.insert(s.name).second)
      throw Error(Error::Kind::UnknownSymbol, "duplicate symbol '" + s.name + "'");
    if (s.arity < min_arity)
      throw Error(Error::Kind::Arity, std::string(what) + " '" + s.name + "' has arity " +
                                          std::to_string(s.arity));
  };
  for (const auto& s : relations) check(s, 0, "relation");
  for (const auto& s : hfuncs) check(s, 0, "function");
  // Mixed-sort functions H^n x S^m -> S are outside the supported fragment;
  // the declaration syntax only admits H^n -> S with n >= 1.
  for (const auto& s : crossfuncs) check(s, 1, "cross-sort function");
}

int Structure::elem_index(const std::string& name) const {
  for (int i = 0; i < size(); ++i)
    if (domain[i] == name) return i;
  return -1;
}

namespace {

int index_of(const std::vector<Signature::Sym>& v, const std::string& n) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i].name == n) return static_cast<int>(i);
  return -1;
}

}  // namespace

int Structure::rel_index(const std::string& n) const { return index_of(sig.relations, n); }
int Structure::hfunc_index(const std::string& n) const { return index_of(sig.hfuncs, n); }
int Structure::cross_index(const std::string& n) const { return index_of(sig.crossfuncs, n); }

std::vector<std::vector<int>> all_tuples(int size, int length) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(length, 0);
  if (length == 0) {
    out.push_back(cur);
    return out;
  }
  while (true) {
    out.push_back(cur);
    int i = length - 1;
    while (i >= 0 && cur[i] == size - 1) cur[i--] = 0;
    if (i < 0) break;
    ++cur[i];
  }
  return out;
}

void Structure::validate() const {
  sig.validate();
  if (domain.empty()) throw Error(Error::Kind::Input, "empty domain");
  std::set<std::string> seen;
  for (const auto& e : domain)
    if (!seen.insert(e).second)
      throw Error(Error::Kind::Input, "duplicate domain element '" + e + "'");

  if (rel_tables.size() != sig.relations.size() || hfunc_tables.size() != sig.hfuncs.size() ||
      cross_tables.size() != sig.crossfuncs.size())
    throw Error(Error::Kind::Input, "table count does not match signature");

  for (std::size_t r = 0; r < sig.relations.size(); ++r)
    for (const auto& tup : rel_tables[r]) {
      if (static_cast<int>(tup.size()) != sig.relations[r].arity)
        throw Error(Error::Kind::Arity, "relation tuple arity mismatch in '" + sig.relations[r].name + "'");
      for (int e : tup)
        if (e < 0 || e >= size())
          throw Error(Error::Kind::Input, "relation tuple mentions unknown element");
    }

  for (std::size_t f = 0; f < sig.hfuncs.size(); ++f) {
    const auto& sym = sig.hfuncs[f];
    for (const auto& tup : all_tuples(size(), sym.arity)) {
      auto it = hfunc_tables[f].find(tup);
      if (it == hfunc_tables[f].end())
        throw Error(Error::Kind::Totality, "function table '" + sym.name + "' is not total");
      if (it->second < 0 || it->second >= size())
        throw Error(Error::Kind::Input, "function '" + sym.name + "' maps outside the domain");
    }
  }

  for (std::size_t g = 0; g < sig.crossfuncs.size(); ++g) {
    const auto& sym = sig.crossfuncs[g];
    for (const auto& tup : all_tuples(size(), sym.arity)) {
      auto it = cross_tables[g].find(tup);
      if (it == cross_tables[g].end())
        throw Error(Error::Kind::Totality, "cross table '" + sym.name + "' is not total");
      if (!in_unit(it->second))
        throw Error(Error::Kind::Range, "cross table '" + sym.name + "' has a value outside [0,1]");
    }
  }
}

namespace {

// Structure file tokens: whitespace-separated words inside line-oriented
// sections; '#' starts a comment.
struct SectionLine {
  std::string header;  // e.g. "sig", "rel R", "funS g"
  std::vector<std::string> items;
};

std::vector<SectionLine> split_sections(const std::string& text) {
  std::vector<SectionLine> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) {
      if (tok.front() == '[') {
        std::string header = tok.substr(1);
        while (header.empty() || header.back() != ']') {
          std::string more;
          if (!(ls >> more))
            throw Error(Error::Kind::Syntax, "unterminated section header", lineno, 1);
          header += " " + more;
        }
        header.pop_back();
        out.push_back({header, {}});
      } else {
        if (out.empty())
          throw Error(Error::Kind::Syntax, "content before any section header", lineno, 1);
        out.back().items.push_back(tok);
      }
    }
  }
  return out;
}

Signature::Sym parse_sym_decl(const std::string& tok) {
  auto slash = tok.find('/');
  if (slash == std::string::npos)
    throw Error(Error::Kind::Syntax, "symbol declaration '" + tok + "' needs name/arity");
  Signature::Sym s;
  s.name = tok.substr(0, slash);
  try {
    s.arity = std::stoi(tok.substr(slash + 1));
  } catch (...) {
    throw Error(Error::Kind::Syntax, "bad arity in '" + tok + "'");
  }
  return s;
}

// Parse "(a b)" style tuples which the section splitter has broken into
// words: re-join and split on parens.
std::vector<std::vector<std::string>> group_tuples(const std::vector<std::string>& items,
                                                   const std::string& where) {
  std::vector<std::vector<std::string>> out;
  std::vector<std::string> cur;
  bool open = false;
  for (std::string tok : items) {
    while (!tok.empty() && tok.front() == '(') {
      if (open) throw Error(Error::Kind::Syntax, "nested '(' in " + where);
      open = true;
      cur.clear();
      tok = tok.substr(1);
    }
    int closes = 0;
    while (!tok.empty() && tok.back() == ')') {
      ++closes;
      tok.pop_back();
    }
    if (!tok.empty()) {
      if (!open) throw Error(Error::Kind::Syntax, "stray token '" + tok + "' in " + where);
      cur.push_back(tok);
    }
    while (closes-- > 0) {
      if (!open) throw Error(Error::Kind::Syntax, "unbalanced ')' in " + where);
      open = false;
      out.push_back(cur);
      cur.clear();
    }
  }
  if (open) throw Error(Error::Kind::Syntax, "unbalanced '(' in " + where);
  return out;
}

}  // namespace

Structure load_structure(const std::string& text) {
  Structure m;
  auto sections = split_sections(text);

  for (const auto& sec : sections) {
    std::istringstream hs(sec.header);
    std::string head;
    hs >> head;
    if (head == "sig") {
      std::string kind;
      std::vector<std::string> toks = sec.items;
      for (std::size_t i = 0; i < toks.size(); ++i) {
        const std::string& tok = toks[i];
        if (tok == ";") continue;
        if (tok == "rel" || tok == "funH" || tok == "funS") {
          kind = tok;
          continue;
        }
        if (kind.empty())
          throw Error(Error::Kind::Syntax, "signature entry '" + tok + "' before rel/funH/funS");
        Signature::Sym s = parse_sym_decl(tok);
        if (kind == "rel")
          m.sig.relations.push_back(s);
        else if (kind == "funH")
          m.sig.hfuncs.push_back(s);
        else
          m.sig.crossfuncs.push_back(s);
      }
    } else if (head == "domain") {
      m.domain = sec.items;
    }
  }
  m.sig.validate();
  if (m.domain.empty()) throw Error(Error::Kind::Input, "missing [domain] section");
  m.rel_tables.resize(m.sig.relations.size());
  m.hfunc_tables.resize(m.sig.hfuncs.size());
  m.cross_tables.resize(m.sig.crossfuncs.size());

  auto elem = [&](const std::string& name) {
    int i = m.elem_index(name);
    if (i < 0) throw Error(Error::Kind::UnknownSymbol, "unknown domain element '" + name + "'");
    return i;
  };

  for (const auto& sec : sections) {
    std::istringstream hs(sec.header);
    std::string head, symname;
    hs >> head >> symname;
    if (head == "sig" || head == "domain") continue;
    if (head == "rel") {
      int r = m.rel_index(symname);
      if (r < 0) throw Error(Error::Kind::UnknownSymbol, "undeclared relation '" + symname + "'");
      for (const auto& tup : group_tuples(sec.items, "[rel " + symname + "]")) {
        std::vector<int> ix;
        for (const auto& e : tup) ix.push_back(elem(e));
        if (static_cast<int>(ix.size()) != m.sig.relations[r].arity)
          throw Error(Error::Kind::Arity, "tuple arity mismatch in [rel " + symname + "]");
        m.rel_tables[r].insert(ix);
      }
    } else if (head == "funH" || head == "funS") {
      // Entries look like "a->b" or "(a b)->1/2"; normalize to key/value.
      std::string joined;
      for (const auto& tok : sec.items) joined += tok + " ";
      std::vector<std::pair<std::string, std::string>> entries;
      std::size_t pos = 0;
      while (pos < joined.size()) {
        auto arrow = joined.find("->", pos);
        if (arrow == std::string::npos) {
          std::string rest = joined.substr(pos);
          if (rest.find_first_not_of(" \t") != std::string::npos)
            throw Error(Error::Kind::Syntax, "dangling tokens in [" + sec.header + "]");
          break;
        }
        std::string key = joined.substr(pos, arrow - pos);
        auto vend = joined.find(' ', arrow + 2);
        if (vend == std::string::npos) vend = joined.size();
        std::string val = joined.substr(arrow + 2, vend - (arrow + 2));
        entries.emplace_back(key, val);
        pos = vend;
        while (pos < joined.size() && joined[pos] == ' ') ++pos;
      }
      auto parse_key = [&](std::string key) {
        std::vector<int> ix;
        std::string cleaned;
        for (char c : key) cleaned += (c == '(' || c == ')') ? ' ' : c;
        std::istringstream ks(cleaned);
        std::string e;
        while (ks >> e) ix.push_back(elem(e));
        return ix;
      };
      if (head == "funH") {
        int f = m.hfunc_index(symname);
        if (f < 0) throw Error(Error::Kind::UnknownSymbol, "undeclared function '" + symname + "'");
        for (auto& [key, val] : entries) {
          std::vector<int> ix = parse_key(key);
          if (static_cast<int>(ix.size()) != m.sig.hfuncs[f].arity)
            throw Error(Error::Kind::Arity, "entry arity mismatch in [funH " + symname + "]");
          if (!m.hfunc_tables[f].emplace(ix, elem(val)).second)
            throw Error(Error::Kind::Input, "duplicate entry in [funH " + symname + "]");
        }
      } else {
        int g = m.cross_index(symname);
        if (g < 0)
          throw Error(Error::Kind::UnknownSymbol, "undeclared cross function '" + symname + "'");
        for (auto& [key, val] : entries) {
          std::vector<int> ix = parse_key(key);
          if (static_cast<int>(ix.size()) != m.sig.crossfuncs[g].arity)
            throw Error(Error::Kind::Arity, "entry arity mismatch in [funS " + symname + "]");
          Rat v = parse_rational(val);
          if (!in_unit(v))
            throw Error(Error::Kind::Range, "value " + val + " outside [0,1] in [funS " + symname + "]");
          if (!m.cross_tables[g].emplace(ix, v).second)
            throw Error(Error::Kind::Input, "duplicate entry in [funS " + symname + "]");
        }
      }
    } else {
      throw Error(Error::Kind::Syntax, "unknown section [" + sec.header + "]");
    }
  }

  m.validate();
  return m;
}

Structure load_structure_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Error::Kind::Input, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_structure(buf.str());
}

int term_eval_H(const Structure& m, const TermH& t, const Env& env) {
  switch (t.kind) {
    case TermH::Kind::Var: {
      auto it = env.hvals.find(t.name);
      if (it == env.hvals.end())
        throw Error(Error::Kind::UnknownSymbol, "unbound home-sort variable '" + t.name + "'");
      return it->second;
    }
    case TermH::Kind::Param: {
      int i = m.elem_index(t.name);
      if (i < 0) throw Error(Error::Kind::UnknownSymbol, "unknown element '" + t.name + "'");
      return i;
    }
    case TermH::Kind::Func: {
      int f = m.hfunc_index(t.name);
      if (f < 0) throw Error(Error::Kind::UnknownSymbol, "unknown function '" + t.name + "'");
      std::vector<int> args;
      args.reserve(t.args.size());
      for (const auto& a : t.args) args.push_back(term_eval_H(m, a, env));
      auto it = m.hfunc_tables[f].find(args);
      if (it == m.hfunc_tables[f].end())
        throw Error(Error::Kind::Totality, "missing table entry for '" + t.name + "'");
      return it->second;
    }
  }
  throw Error(Error::Kind::Input, "malformed home-sort term");
}

Rat term_eval_S(const Structure& m, const TermS& t, const Env& env) {
  switch (t.kind) {
    case TermS::Kind::Var: {
      auto it = env.svals.find(t.name);
      if (it == env.svals.end())
        throw Error(Error::Kind::UnknownSymbol, "unbound space-sort variable '" + t.name + "'");
      return it->second;
    }
    case TermS::Kind::Lit:
      return t.lit;
    case TermS::Kind::Cross: {
      int g = m.cross_index(t.name);
      if (g < 0) throw Error(Error::Kind::UnknownSymbol, "unknown cross function '" + t.name + "'");
      std::vector<int> args;
      args.reserve(t.hargs.size());
      for (const auto& a : t.hargs) args.push_back(term_eval_H(m, a, env));
      auto it = m.cross_tables[g].find(args);
      if (it == m.cross_tables[g].end())
        throw Error(Error::Kind::Totality, "missing table entry for '" + t.name + "'");
      return it->second;
    }
    case TermS::Kind::Builtin: {
      std::vector<Rat> vals;
      vals.reserve(t.sargs.size());
      for (const auto& a : t.sargs) vals.push_back(term_eval_S(m, a, env));
      switch (t.fn) {
        case TermS::Fn::CutSum:
          return cut_sum(vals[0], vals[1]);
        case TermS::Fn::CutDiff:
          return cut_diff(vals[0], vals[1]);
        case TermS::Fn::Min: {
          Rat out = vals[0];
          for (const auto& v : vals) out = std::min(out, v);
          return out;
        }
        case TermS::Fn::Max: {
          Rat out = vals[0];
          for (const auto& v : vals) out = std::max(out, v);
          return out;
        }
        case TermS::Fn::Compl:
          return 1 - vals[0];
        case TermS::Fn::Scale:
          return clamp_unit(t.lit * vals[0]);
        case TermS::Fn::Pwl:
          return pwl_at(t.breaks, vals[0]);
        default:
          break;
      }
      throw Error(Error::Kind::Input, "malformed builtin term");
    }
  }
  throw Error(Error::Kind::Input, "malformed space-sort term");
}

}  // namespace twosort
