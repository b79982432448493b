#include <algorithm>
#include <cctype>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "twosort/error.hpp"
#include "twosort/structures.hpp"
#include "twosort/syntax.hpp"

namespace twosort {

namespace {

struct SExpr {
  bool is_atom = false;
  std::string atom;
  std::vector<SExpr> items;
  int line = 0, col = 0;
};

struct Lexer {
  const std::string& text;
  std::size_t pos = 0;
  int line = 1, col = 1;

  explicit Lexer(const std::string& t) : text(t) {}

  void advance() {
    if (text[pos] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++pos;
  }

  void skip_ws() {
    while (pos < text.size()) {
      char c = text[pos];
      if (c == ';') {  // comment to end of line
        while (pos < text.size() && text[pos] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  SExpr read() {
    skip_ws();
    if (pos >= text.size()) throw Error(Error::Kind::Syntax, "unexpected end of input", line, col);
    SExpr e;
    e.line = line;
    e.col = col;
    if (text[pos] == '(') {
      advance();
      while (true) {
        skip_ws();
        if (pos >= text.size())
          throw Error(Error::Kind::Syntax, "missing ')'", e.line, e.col);
        if (text[pos] == ')') {
          advance();
          break;
        }
        e.items.push_back(read());
      }
      return e;
    }
    if (text[pos] == ')') throw Error(Error::Kind::Syntax, "unexpected ')'", line, col);
    e.is_atom = true;
    while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])) &&
           text[pos] != '(' && text[pos] != ')' && text[pos] != ';')
      e.atom += text[pos], advance();
    return e;
  }
};

bool looks_numeric(const std::string& s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  return i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.');
}

[[noreturn]] void fail(const SExpr& at, Error::Kind k, const std::string& msg) {
  throw Error(k, msg, at.line, at.col);
}

Rat read_rat(const SExpr& e) {
  if (!e.is_atom || !looks_numeric(e.atom)) fail(e, Error::Kind::Syntax, "expected a rational");
  try {
    return parse_rational(e.atom);
  } catch (const Error& err) {
    fail(e, Error::Kind::Syntax, err.what());
  }
}

Rat read_unit_rat(const SExpr& e) {
  Rat r = read_rat(e);
  if (!in_unit(r)) fail(e, Error::Kind::Range, "rational literal outside [0,1]");
  return r;
}

struct Reader {
  const Signature* sig;
  const std::vector<std::string>* domain;
  // Sorts committed so far for variables (bound stack entries shadow free
  // uses; free uses are global to the formula).
  std::vector<std::pair<std::string, SortTag>> bound;
  std::map<std::string, SortTag> free_sorts;

  std::optional<SortTag> bound_sort(const std::string& n) const {
    for (auto it = bound.rbegin(); it != bound.rend(); ++it)
      if (it->first == n) return it->second;
    return std::nullopt;
  }

  bool is_domain_elem(const std::string& n) const {
    return domain && std::find(domain->begin(), domain->end(), n) != domain->end();
  }

  void commit_free(const SExpr& at, const std::string& n, SortTag s) {
    auto [it, fresh] = free_sorts.emplace(n, s);
    if (!fresh && it->second != s)
      fail(at, Error::Kind::Sort, "variable '" + n + "' used at both sorts");
  }

  TermH read_hterm(const SExpr& e) {
    if (e.is_atom) {
      if (looks_numeric(e.atom))
        fail(e, Error::Kind::Sort, "rational '" + e.atom + "' in home-sort position");
      if (auto bs = bound_sort(e.atom)) {
        if (*bs != SortTag::H)
          fail(e, Error::Kind::Sort, "space-sort variable '" + e.atom + "' in home-sort position");
        return TermH::var(e.atom);
      }
      if (sig) {
        if (const auto* f = sig->find_hfunc(e.atom)) {
          if (f->arity != 0)
            fail(e, Error::Kind::Arity, "function '" + e.atom + "' needs " +
                                            std::to_string(f->arity) + " arguments");
          return TermH::func(e.atom, {});
        }
        if (sig->find_crossfunc(e.atom) || sig->find_relation(e.atom))
          fail(e, Error::Kind::Sort, "symbol '" + e.atom + "' is not a home-sort term");
      }
      if (is_domain_elem(e.atom)) return TermH::param(e.atom);
      commit_free(e, e.atom, SortTag::H);
      return TermH::var(e.atom);
    }
    if (e.items.empty() || !e.items[0].is_atom)
      fail(e, Error::Kind::Syntax, "malformed home-sort term");
    const std::string& head = e.items[0].atom;
    if (sig) {
      const auto* f = sig->find_hfunc(head);
      if (!f) fail(e.items[0], Error::Kind::UnknownSymbol, "unknown function '" + head + "'");
      if (f->arity != static_cast<int>(e.items.size()) - 1)
        fail(e, Error::Kind::Arity, "function '" + head + "' needs " + std::to_string(f->arity) +
                                        " arguments");
    }
    std::vector<TermH> args;
    for (std::size_t i = 1; i < e.items.size(); ++i) args.push_back(read_hterm(e.items[i]));
    return TermH::func(head, std::move(args));
  }

  TermS read_sterm(const SExpr& e) {
    if (e.is_atom) {
      if (looks_numeric(e.atom)) return TermS::literal(read_unit_rat(e));
      if (auto bs = bound_sort(e.atom)) {
        if (*bs != SortTag::S)
          fail(e, Error::Kind::Sort, "home-sort variable '" + e.atom + "' in space-sort position");
        return TermS::var(e.atom);
      }
      if (sig && sig->has_symbol(e.atom))
        fail(e, Error::Kind::Sort, "symbol '" + e.atom + "' in space-sort position");
      if (is_domain_elem(e.atom))
        fail(e, Error::Kind::Sort, "element '" + e.atom + "' in space-sort position");
      commit_free(e, e.atom, SortTag::S);
      return TermS::var(e.atom);
    }
    if (e.items.empty() || !e.items[0].is_atom)
      fail(e, Error::Kind::Syntax, "malformed space-sort term");
    const std::string& head = e.items[0].atom;
    auto sargs = [&](std::size_t from) {
      std::vector<TermS> out;
      for (std::size_t i = from; i < e.items.size(); ++i) out.push_back(read_sterm(e.items[i]));
      return out;
    };
    try {
      if (head == "csum") return TermS::builtin(TermS::Fn::CutSum, sargs(1));
      if (head == "cdiff") return TermS::builtin(TermS::Fn::CutDiff, sargs(1));
      if (head == "min") return TermS::builtin(TermS::Fn::Min, sargs(1));
      if (head == "max") return TermS::builtin(TermS::Fn::Max, sargs(1));
      if (head == "compl") return TermS::builtin(TermS::Fn::Compl, sargs(1));
      if (head == "scale") {
        if (e.items.size() != 3) fail(e, Error::Kind::Arity, "scale takes a factor and one term");
        Rat factor = read_rat(e.items[1]);
        return TermS::scaled(factor, read_sterm(e.items[2]));
      }
      if (head == "pwl") {
        if (e.items.size() != 3) fail(e, Error::Kind::Arity, "pwl takes breakpoints and one term");
        const SExpr& bl = e.items[1];
        if (bl.is_atom) fail(bl, Error::Kind::Syntax, "expected breakpoint list");
        std::vector<std::pair<Rat, Rat>> breaks;
        for (const auto& bp : bl.items) {
          if (bp.is_atom || bp.items.size() != 2)
            fail(bp, Error::Kind::Syntax, "breakpoint must be (x y)");
          breaks.emplace_back(read_unit_rat(bp.items[0]), read_unit_rat(bp.items[1]));
        }
        return TermS::pwl(std::move(breaks), read_sterm(e.items[2]));
      }
    } catch (const Error& err) {
      if (err.line == 0) fail(e, err.kind, err.what());
      throw;
    }
    // Cross-sort application g(h-terms).
    if (sig) {
      const auto* g = sig->find_crossfunc(head);
      if (!g) fail(e.items[0], Error::Kind::UnknownSymbol, "unknown cross function '" + head + "'");
      if (g->arity != static_cast<int>(e.items.size()) - 1)
        fail(e, Error::Kind::Arity, "cross function '" + head + "' needs " +
                                        std::to_string(g->arity) + " arguments");
    }
    if (e.items.size() < 2)
      fail(e, Error::Kind::Arity, "cross function '" + head + "' needs arguments");
    std::vector<TermH> args;
    for (std::size_t i = 1; i < e.items.size(); ++i) args.push_back(read_hterm(e.items[i]));
    return TermS::cross(head, std::move(args));
  }

  ClosedSet read_set(const SExpr& e) {
    if (e.is_atom || e.items.empty() || !e.items[0].is_atom)
      fail(e, Error::Kind::Syntax, "malformed set expression");
    const std::string& head = e.items[0].atom;
    try {
      if (head == "box") {
        IntervalBox b;
        for (std::size_t i = 1; i < e.items.size(); ++i) {
          const SExpr& iv = e.items[i];
          if (iv.is_atom || iv.items.size() != 2)
            fail(iv, Error::Kind::Syntax, "box interval must be (lo hi)");
          b.dims.push_back({read_unit_rat(iv.items[0]), read_unit_rat(iv.items[1])});
        }
        return ClosedSet::make_box(std::move(b));
      }
      if (head == "point") {
        std::vector<Rat> p;
        for (std::size_t i = 1; i < e.items.size(); ++i) p.push_back(read_unit_rat(e.items[i]));
        if (p.empty()) fail(e, Error::Kind::Dimension, "point needs coordinates");
        return ClosedSet::make_point(p);
      }
      if (head == "halfspace") {
        if (e.items.size() != 3 || e.items[1].is_atom)
          fail(e, Error::Kind::Syntax, "halfspace takes (coeffs) bound");
        std::vector<Rat> a;
        for (const auto& c : e.items[1].items) a.push_back(read_rat(c));
        return ClosedSet::make_halfspace(std::move(a), read_rat(e.items[2]));
      }
      if (head == "union" || head == "inter") {
        std::vector<ClosedSet> cs;
        for (std::size_t i = 1; i < e.items.size(); ++i) cs.push_back(read_set(e.items[i]));
        if (cs.empty()) fail(e, Error::Kind::Syntax, head + " needs children");
        return head == "union" ? ClosedSet::make_union(std::move(cs))
                               : ClosedSet::make_inter(std::move(cs));
      }
      if (head == "diag") {
        if (e.items.size() != 2 || !e.items[1].is_atom || e.items[1].atom != "2")
          fail(e, Error::Kind::Dimension, "only (diag 2) is supported");
        return ClosedSet::diagonal2();
      }
    } catch (const Error& err) {
      if (err.line == 0) fail(e, err.kind, err.what());
      throw;
    }
    fail(e.items[0], Error::Kind::Syntax, "unknown set constructor '" + head + "'");
  }

  Formula read_formula(const SExpr& e) {
    if (e.is_atom) fail(e, Error::Kind::Syntax, "expected a formula");
    if (e.items.empty() || !e.items[0].is_atom)
      fail(e, Error::Kind::Syntax, "malformed formula");
    const std::string& head = e.items[0].atom;

    auto read_children = [&](std::size_t min_count) {
      std::vector<Formula> out;
      for (std::size_t i = 1; i < e.items.size(); ++i) out.push_back(read_formula(e.items[i]));
      if (out.size() < min_count)
        fail(e, Error::Kind::Arity, "'" + head + "' needs more arguments");
      return out;
    };

    if (head == "and") return Formula::conj(read_children(1));
    if (head == "or") return Formula::disj(read_children(1));
    if (head == "not") {
      if (e.items.size() != 2) fail(e, Error::Kind::Arity, "not takes one formula");
      Formula inner = read_formula(e.items[1]);
      // Negation directly over a plain home-sort atom is itself an atom.
      if (inner.is_hatomic() && !inner.negated) {
        inner.negated = true;
        return inner;
      }
      return Formula::lnot(std::move(inner));
    }
    if (head == "forallH" || head == "existsH" || head == "forallS" || head == "existsS") {
      if (e.items.size() != 3 || !e.items[1].is_atom || looks_numeric(e.items[1].atom))
        fail(e, Error::Kind::Syntax, head + " takes a variable and a body");
      SortTag s = (head == "forallH" || head == "existsH") ? SortTag::H : SortTag::S;
      bound.emplace_back(e.items[1].atom, s);
      Formula body = read_formula(e.items[2]);
      bound.pop_back();
      Formula::Kind k = head == "forallH"  ? Formula::Kind::ForallH
                        : head == "existsH" ? Formula::Kind::ExistsH
                        : head == "forallS" ? Formula::Kind::ForallS
                                            : Formula::Kind::ExistsS;
      return Formula::quant(k, e.items[1].atom, std::move(body));
    }
    if (head == "in") {
      if (e.items.size() != 3 || e.items[1].is_atom)
        fail(e, Error::Kind::Syntax, "in takes a term tuple and a set");
      std::vector<TermS> tuple;
      for (const auto& t : e.items[1].items) tuple.push_back(read_sterm(t));
      if (tuple.empty()) fail(e.items[1], Error::Kind::Dimension, "empty term tuple");
      ClosedSet set = read_set(e.items[2]);
      if (static_cast<int>(tuple.size()) != set.dim())
        fail(e, Error::Kind::Dimension,
             "tuple length " + std::to_string(tuple.size()) + " does not match set dimension " +
                 std::to_string(set.dim()));
      return Formula::satom(std::move(tuple), std::move(set));
    }
    if (head == "=") {
      if (e.items.size() != 3) fail(e, Error::Kind::Arity, "= takes two home-sort terms");
      return Formula::heq(read_hterm(e.items[1]), read_hterm(e.items[2]));
    }
    // Relation atom.
    if (sig) {
      const auto* r = sig->find_relation(head);
      if (!r) fail(e.items[0], Error::Kind::UnknownSymbol, "unknown relation '" + head + "'");
      if (r->arity != static_cast<int>(e.items.size()) - 1)
        fail(e, Error::Kind::Arity,
             "relation '" + head + "' needs " + std::to_string(r->arity) + " arguments");
    }
    std::vector<TermH> args;
    for (std::size_t i = 1; i < e.items.size(); ++i) args.push_back(read_hterm(e.items[i]));
    return Formula::hatom(head, std::move(args));
  }
};

}  // namespace

Formula parse_formula(const std::string& text, const Signature* sig,
                      const std::vector<std::string>* domain) {
  Lexer lex(text);
  SExpr top = lex.read();
  lex.skip_ws();
  if (lex.pos < text.size())
    throw Error(Error::Kind::Syntax, "trailing input after formula", lex.line, lex.col);
  Reader r{sig, domain, {}, {}};
  return r.read_formula(top);
}

ClosedSet parse_set(const std::string& text) {
  Lexer lex(text);
  SExpr top = lex.read();
  lex.skip_ws();
  if (lex.pos < text.size())
    throw Error(Error::Kind::Syntax, "trailing input after set", lex.line, lex.col);
  Reader r{nullptr, nullptr, {}, {}};
  return r.read_set(top);
}

TermS parse_sterm(const std::string& text, const Signature* sig) {
  Lexer lex(text);
  SExpr top = lex.read();
  lex.skip_ws();
  if (lex.pos < text.size())
    throw Error(Error::Kind::Syntax, "trailing input after term", lex.line, lex.col);
  Reader r{sig, nullptr, {}, {}};
  return r.read_sterm(top);
}

}  // namespace twosort
