#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "rational.hpp"
#include "words.hpp"

namespace mzv {

enum class SymKind : std::uint8_t { gamma, i_pi, zeta };

// Graded symbol: gamma, ipi (both weight 1), or a convergent zeta z(r1,...,rk)
// with r1 >= 2, named canonically by composition.
struct ConstSymbol {
  SymKind kind{SymKind::gamma};
  std::vector<std::uint32_t> comp;  // zeta only

  ConstSymbol() = default;
  explicit ConstSymbol(SymKind k) : kind(k) {
    if (k == SymKind::zeta) throw std::invalid_argument("zeta symbol needs a composition");
  }
  explicit ConstSymbol(std::vector<std::uint32_t> c) : kind(SymKind::zeta), comp(std::move(c)) {
    if (comp.empty() || comp.front() < 2)
      throw std::invalid_argument("zeta symbol needs a convergent composition (r1 >= 2)");
    for (std::uint32_t r : comp)
      if (r == 0) throw std::invalid_argument("composition parts are positive");
  }

  int weight() const {
    if (kind != SymKind::zeta) return 1;
    int s = 0;
    for (std::uint32_t r : comp) s += static_cast<int>(r);
    return s;
  }

  bool operator==(const ConstSymbol& o) const { return kind == o.kind && comp == o.comp; }

  // gamma < ipi < all zetas; zetas by weight, then by Y-word order of the
  // composition (y1 > y2 > ..., so e.g. z(3) < z(2,1) at weight 3)
  bool operator<(const ConstSymbol& o) const {
    if (kind != o.kind) return static_cast<int>(kind) < static_cast<int>(o.kind);
    if (kind != SymKind::zeta) return false;
    int w = weight(), ow = o.weight();
    if (w != ow) return w < ow;
    return lex_less(word_from_composition(comp), word_from_composition(o.comp));
  }

  std::string str() const {
    switch (kind) {
      case SymKind::gamma:
        return "gamma";
      case SymKind::i_pi:
        return "ipi";
      case SymKind::zeta: {
        std::string s = "z(";
        for (std::size_t i = 0; i < comp.size(); ++i) {
          if (i) s += ",";
          s += std::to_string(comp[i]);
        }
        return s + ")";
      }
    }
    return {};
  }
};

// zeta symbol from a word on either alphabet (X words are transcoded)
inline ConstSymbol zeta_symbol(const Word& w) {
  if (w.alph == Alphabet::Y) return ConstSymbol(w.a);
  auto y = transcode(w);
  if (!y) throw std::invalid_argument("word has no Y transcription: " + w.str());
  return ConstSymbol(y->a);
}

// Monomial: multiset of symbols, stored sorted descending.
struct ConstMonomial {
  std::vector<ConstSymbol> syms;

  ConstMonomial() = default;
  explicit ConstMonomial(std::vector<ConstSymbol> s) : syms(std::move(s)) {
    std::sort(syms.begin(), syms.end(), [](const ConstSymbol& a, const ConstSymbol& b) {
      return b < a;
    });
  }

  int weight() const {
    int s = 0;
    for (const auto& y : syms) s += y.weight();
    return s;
  }
  bool empty() const { return syms.empty(); }

  bool operator==(const ConstMonomial& o) const { return syms == o.syms; }
  bool operator<(const ConstMonomial& o) const {
    int w = weight(), ow = o.weight();
    if (w != ow) return w < ow;
    return std::lexicographical_compare(syms.begin(), syms.end(), o.syms.begin(), o.syms.end());
  }

  ConstMonomial operator*(const ConstMonomial& o) const {
    std::vector<ConstSymbol> s = syms;
    s.insert(s.end(), o.syms.begin(), o.syms.end());
    return ConstMonomial(std::move(s));
  }

  std::string str() const {
    if (syms.empty()) return "1";
    std::string out;
    std::size_t i = 0;
    while (i < syms.size()) {
      std::size_t j = i;
      while (j < syms.size() && syms[j] == syms[i]) ++j;
      if (!out.empty()) out += "\xc2\xb7";
      out += syms[i].str();
      if (j - i > 1) out += "^" + std::to_string(j - i);
      i = j;
    }
    return out;
  }
};

// Commutative polynomial over Q in the graded symbols.
struct ConstPoly {
  std::map<ConstMonomial, Rational> terms;

  ConstPoly() = default;

  static ConstPoly constant(const Rational& q) {
    ConstPoly p;
    if (q != 0) p.terms.emplace(ConstMonomial{}, q);
    return p;
  }
  static ConstPoly one() { return constant(Rational(1)); }
  static ConstPoly symbol(const ConstSymbol& s, const Rational& c = Rational(1)) {
    ConstPoly p;
    if (c != 0) p.terms.emplace(ConstMonomial({s}), c);
    return p;
  }
  static ConstPoly zeta(const std::vector<std::uint32_t>& comp) {
    return symbol(ConstSymbol(comp));
  }
  static ConstPoly zeta(const Word& w) { return symbol(zeta_symbol(w)); }
  static ConstPoly gamma() { return symbol(ConstSymbol(SymKind::gamma)); }
  static ConstPoly ipi() { return symbol(ConstSymbol(SymKind::i_pi)); }

  bool is_zero() const { return terms.empty(); }

  void add_term(const ConstMonomial& m, const Rational& c) {
    if (c == 0) return;
    auto [it, fresh] = terms.emplace(m, c);
    if (!fresh) {
      it->second += c;
      if (it->second == 0) terms.erase(it);
    }
  }

  Rational coeff(const ConstMonomial& m) const {
    auto it = terms.find(m);
    return it == terms.end() ? Rational(0) : it->second;
  }

  ConstPoly& operator+=(const ConstPoly& o) {
    for (const auto& [m, c] : o.terms) add_term(m, c);
    return *this;
  }
  ConstPoly& operator-=(const ConstPoly& o) {
    for (const auto& [m, c] : o.terms) add_term(m, -c);
    return *this;
  }
  friend ConstPoly operator+(ConstPoly a, const ConstPoly& b) { return a += b; }
  friend ConstPoly operator-(ConstPoly a, const ConstPoly& b) { return a -= b; }
  ConstPoly operator-() const {
    ConstPoly p;
    for (const auto& [m, c] : terms) p.terms.emplace(m, -c);
    return p;
  }

  friend ConstPoly operator*(const ConstPoly& a, const ConstPoly& b) {
    ConstPoly p;
    for (const auto& [ma, ca] : a.terms)
      for (const auto& [mb, cb] : b.terms) p.add_term(ma * mb, ca * cb);
    return p;
  }
  ConstPoly& operator*=(const ConstPoly& o) { return *this = *this * o; }
  friend ConstPoly operator*(ConstPoly a, const Rational& s) {
    if (s == 0) return ConstPoly{};
    for (auto& [m, c] : a.terms) c *= s;
    return a;
  }
  friend ConstPoly operator*(const Rational& s, ConstPoly a) { return std::move(a) * s; }

  bool operator==(const ConstPoly& o) const { return terms == o.terms; }

  bool is_homogeneous() const {
    int w = -1;
    for (const auto& [m, c] : terms) {
      if (w < 0) w = m.weight();
      if (m.weight() != w) return false;
    }
    return true;
  }
  int weight() const {
    int w = 0;
    for (const auto& [m, c] : terms) w = std::max(w, m.weight());
    return w;
  }
  ConstPoly weight_part(int w) const {
    ConstPoly p;
    for (const auto& [m, c] : terms)
      if (m.weight() == w) p.terms.emplace(m, c);
    return p;
  }

  std::string str() const {
    if (terms.empty()) return "0";
    std::string out;
    // largest monomial first
    for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
      Rational a = it->second;
      if (out.empty()) {
        if (a < 0) {
          out += "-";
          a = -a;
        }
      } else {
        out += (a < 0) ? " - " : " + ";
        if (a < 0) a = -a;
      }
      bool unit_mon = it->first.empty();
      if (a != 1 || unit_mon) {
        out += rational_to_string(a);
        if (!unit_mon) out += "\xc2\xb7";
      }
      if (!unit_mon) out += it->first.str();
    }
    return out;
  }
};

// ---- rewriting against a relation table ---------------------------------

using RewriteMap = std::map<ConstSymbol, ConstPoly>;

// Replaces every occurrence of a head symbol by its right-hand side until
// none remains. Heads must rewrite to polynomials in strictly smaller
// symbols, which the relation tables guarantee. One substitution layer per
// pass, with like terms recombined between passes so cancellation keeps the
// intermediate polynomials small.
inline ConstPoly normalize(const ConstPoly& p, const RewriteMap& rules) {
  ConstPoly cur = p;
  for (int pass = 0; pass < 100000; ++pass) {
    ConstPoly next;
    bool changed = false;
    for (const auto& [m, c] : cur.terms) {
      std::size_t pos = m.syms.size();
      for (std::size_t i = 0; i < m.syms.size(); ++i)
        if (rules.count(m.syms[i])) {
          pos = i;
          break;
        }
      if (pos == m.syms.size()) {
        next.add_term(m, c);
        continue;
      }
      changed = true;
      std::vector<ConstSymbol> rest = m.syms;
      const ConstSymbol head = m.syms[pos];
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(pos));
      ConstMonomial mr(std::move(rest));
      for (const auto& [rm, rc] : rules.at(head).terms) next.add_term(mr * rm, c * rc);
    }
    cur = std::move(next);
    if (!changed) return cur;
  }
  throw std::logic_error("normalize does not terminate");
}

// ---- numeric evaluation --------------------------------------------------

// Evaluator must provide: N zeta(comp), N gamma(), N pi(), N from_rational(q).
// Returns (real, imaginary) parts; ipi^k cycles through i^k.
template <class N, class Evaluator>
inline std::pair<N, N> eval_numeric(const ConstPoly& p, Evaluator& ev) {
  N re = ev.from_rational(Rational(0));
  N im = ev.from_rational(Rational(0));
  for (const auto& [m, c] : p.terms) {
    N v = ev.from_rational(c);
    int ipi_count = 0;
    for (const ConstSymbol& s : m.syms) {
      switch (s.kind) {
        case SymKind::gamma:
          v = v * ev.gamma();
          break;
        case SymKind::i_pi:
          v = v * ev.pi();
          ++ipi_count;
          break;
        case SymKind::zeta:
          v = v * ev.zeta(s.comp);
          break;
      }
    }
    switch (ipi_count % 4) {
      case 0:
        re = re + v;
        break;
      case 1:
        im = im + v;
        break;
      case 2:
        re = re - v;
        break;
      case 3:
        im = im - v;
        break;
    }
  }
  return {re, im};
}

}  // namespace mzv
