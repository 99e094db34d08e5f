#pragma once

#include <functional>
#include <map>
#include <optional>
#include <utility>

#include "rational.hpp"
#include "words.hpp"

namespace mzv {

enum class Prod : std::uint8_t { shuffle, stuffle, concat };

template <class C>
inline bool coeff_is_zero(const C& c) {
  if constexpr (requires { c.is_zero(); })
    return c.is_zero();
  else
    return c == 0;
}

// Noncommutative polynomial with coefficients in C, words iterated in
// canonical (weight, lex) order for reproducibility.
template <class C>
struct NCPoly {
  Alphabet alph{Alphabet::X};
  std::map<Word, C> terms;

  NCPoly() = default;
  explicit NCPoly(Alphabet al) : alph(al) {}

  static NCPoly unit(Alphabet al, const C& c) {
    NCPoly p(al);
    if (!coeff_is_zero(c)) p.terms.emplace(Word{al, {}}, c);
    return p;
  }
  static NCPoly from_word(const Word& w, const C& c) {
    NCPoly p(w.alph);
    if (!coeff_is_zero(c)) p.terms.emplace(w, c);
    return p;
  }

  bool is_zero() const { return terms.empty(); }

  C coeff(const Word& w) const {
    auto it = terms.find(w);
    return it == terms.end() ? C{} : it->second;
  }

  void add_term(const Word& w, const C& c) {
    if (coeff_is_zero(c)) return;
    auto [it, fresh] = terms.emplace(w, c);
    if (!fresh) {
      it->second += c;
      if (coeff_is_zero(it->second)) terms.erase(it);
    }
  }

  NCPoly& operator+=(const NCPoly& o) {
    for (const auto& [w, c] : o.terms) add_term(w, c);
    return *this;
  }
  NCPoly& operator-=(const NCPoly& o) {
    for (const auto& [w, c] : o.terms) add_term(w, C{} - c);
    return *this;
  }
  friend NCPoly operator+(NCPoly a, const NCPoly& b) { return a += b; }
  friend NCPoly operator-(NCPoly a, const NCPoly& b) { return a -= b; }

  NCPoly& operator*=(const C& s) {
    if (coeff_is_zero(s)) {
      terms.clear();
      return *this;
    }
    for (auto& [w, c] : terms) c = c * s;
    for (auto it = terms.begin(); it != terms.end();)
      it = coeff_is_zero(it->second) ? terms.erase(it) : std::next(it);
    return *this;
  }
  friend NCPoly operator*(NCPoly a, const C& s) { return a *= s; }
  friend NCPoly operator*(const C& s, NCPoly a) { return a *= s; }

  bool operator==(const NCPoly& o) const { return alph == o.alph && terms == o.terms; }

  int max_weight() const {
    int m = 0;
    for (const auto& [w, c] : terms) m = std::max(m, w.weight());
    return m;
  }
  int min_weight() const {
    int m = -1;
    for (const auto& [w, c] : terms) {
      int k = w.weight();
      if (m < 0 || k < m) m = k;
    }
    return m < 0 ? 0 : m;
  }
};

using QPoly = NCPoly<Rational>;

template <class C>
inline NCPoly<C> truncate(const NCPoly<C>& p, int max_w) {
  NCPoly<C> out(p.alph);
  for (const auto& [w, c] : p.terms)
    if (w.weight() <= max_w) out.terms.emplace(w, c);
  return out;
}

// Text form "2·x0x1x1 + x1x0x1"; terms in canonical word order.
inline std::string poly_to_string(const QPoly& p) {
  if (p.terms.empty()) return "0";
  std::string out;
  for (const auto& [w, c] : p.terms) {
    Rational a = c;
    if (out.empty()) {
      if (a < 0) {
        out += "-";
        a = -a;
      }
    } else {
      out += (a < 0) ? " - " : " + ";
      if (a < 0) a = -a;
    }
    if (a != 1 || w.empty()) {
      out += rational_to_string(a);
      if (!w.empty()) out += "\xc2\xb7";  // middle dot
    }
    if (!w.empty()) out += w.str();
  }
  return out;
}

template <class C>
inline std::string poly_to_string(const NCPoly<C>& p,
                                  const std::function<std::string(const C&)>& coeff_str) {
  if (p.terms.empty()) return "0";
  std::string out;
  for (const auto& [w, c] : p.terms) {
    if (!out.empty()) out += " + ";
    out += "(" + coeff_str(c) + ")";
    if (!w.empty()) {
      out += "\xc2\xb7";
      out += w.str();
    }
  }
  return out;
}

// ---- word-level products ----------------------------------------------

inline QPoly shuffle_words(const Word& u, const Word& v) {
  static std::map<std::pair<Word, Word>, QPoly> memo;
  if (u.empty()) return QPoly::from_word(v, Rational(1));
  if (v.empty()) return QPoly::from_word(u, Rational(1));
  auto key = std::make_pair(u, v);
  auto it = memo.find(key);
  if (it != memo.end()) return it->second;
  Word ut = subword(u, 1, u.size() - 1), vt = subword(v, 1, v.size() - 1);
  QPoly r(u.alph);
  for (const auto& [w, c] : shuffle_words(ut, v).terms) r.add_term(prepend(u.alph, u.a[0], w), c);
  for (const auto& [w, c] : shuffle_words(u, vt).terms) r.add_term(prepend(u.alph, v.a[0], w), c);
  memo.emplace(key, r);
  return r;
}

inline QPoly stuffle_words(const Word& u, const Word& v) {
  if (u.alph != Alphabet::Y && !u.empty()) throw std::invalid_argument("stuffle is a Y product");
  static std::map<std::pair<Word, Word>, QPoly> memo;
  if (u.empty()) return QPoly::from_word(v, Rational(1));
  if (v.empty()) return QPoly::from_word(u, Rational(1));
  auto key = std::make_pair(u, v);
  auto it = memo.find(key);
  if (it != memo.end()) return it->second;
  Word ut = subword(u, 1, u.size() - 1), vt = subword(v, 1, v.size() - 1);
  QPoly r(Alphabet::Y);
  for (const auto& [w, c] : stuffle_words(ut, v).terms) r.add_term(prepend(Alphabet::Y, u.a[0], w), c);
  for (const auto& [w, c] : stuffle_words(u, vt).terms) r.add_term(prepend(Alphabet::Y, v.a[0], w), c);
  for (const auto& [w, c] : stuffle_words(ut, vt).terms)
    r.add_term(prepend(Alphabet::Y, u.a[0] + v.a[0], w), c);
  memo.emplace(key, r);
  return r;
}

inline QPoly word_product(Prod p, const Word& u, const Word& v) {
  switch (p) {
    case Prod::shuffle:
      return shuffle_words(u, v);
    case Prod::stuffle:
      return stuffle_words(u, v);
    case Prod::concat:
      return QPoly::from_word(concat(u, v), Rational(1));
  }
  throw std::logic_error("bad product");
}

inline QPoly shuffle(const QPoly& a, const QPoly& b) {
  QPoly r(a.alph);
  for (const auto& [u, cu] : a.terms)
    for (const auto& [v, cv] : b.terms) r += shuffle_words(u, v) * (cu * cv);
  return r;
}

inline QPoly stuffle(const QPoly& a, const QPoly& b) {
  QPoly r(Alphabet::Y);
  for (const auto& [u, cu] : a.terms)
    for (const auto& [v, cv] : b.terms) r += stuffle_words(u, v) * (cu * cv);
  return r;
}

inline QPoly apply_product(Prod p, const QPoly& a, const QPoly& b) {
  QPoly r(a.terms.empty() ? b.alph : a.alph);
  for (const auto& [u, cu] : a.terms)
    for (const auto& [v, cv] : b.terms) r += word_product(p, u, v) * (cu * cv);
  return r;
}

// Concatenation product for arbitrary coefficients, truncated by weight.
template <class C>
inline NCPoly<C> concat_mul(const NCPoly<C>& a, const NCPoly<C>& b, int max_w) {
  NCPoly<C> r(a.terms.empty() ? b.alph : a.alph);
  for (const auto& [u, cu] : a.terms) {
    if (u.weight() > max_w) continue;
    for (const auto& [v, cv] : b.terms) {
      if (u.weight() + v.weight() > max_w) continue;
      r.add_term(concat(u, v), cu * cv);
    }
  }
  return r;
}

template <class C, class D>
inline NCPoly<C> convert_coeffs(const NCPoly<D>& p, const std::function<C(const D&)>& f) {
  NCPoly<C> r(p.alph);
  for (const auto& [w, c] : p.terms) r.add_term(w, f(c));
  return r;
}

// ---- residuals ---------------------------------------------------------

// S |> P strips P from the front: <S |> u | w> = <S | u w>.
template <class C>
inline NCPoly<C> residual_right(const NCPoly<C>& s, const Word& u) {
  NCPoly<C> r(s.alph);
  for (const auto& [w, c] : s.terms) {
    if (w.size() < u.size()) continue;
    if (std::equal(u.a.begin(), u.a.end(), w.a.begin()))
      r.add_term(subword(w, u.size(), w.size() - u.size()), c);
  }
  return r;
}

// u <| S strips u from the back: <u <| S | w> = <S | w u>.
template <class C>
inline NCPoly<C> residual_left(const Word& u, const NCPoly<C>& s) {
  NCPoly<C> r(s.alph);
  for (const auto& [w, c] : s.terms) {
    if (w.size() < u.size()) continue;
    if (std::equal(u.a.begin(), u.a.end(), w.a.end() - u.size()))
      r.add_term(subword(w, 0, w.size() - u.size()), c);
  }
  return r;
}

// bilinear extensions in the stripped argument
template <class C>
inline NCPoly<C> residual_right(const NCPoly<C>& s, const QPoly& p) {
  NCPoly<C> r(s.alph);
  for (const auto& [u, c] : p.terms) {
    NCPoly<C> part = residual_right(s, u);
    if constexpr (std::is_same_v<C, Rational>)
      r += part * c;
    else
      r += part * C::constant(c);
  }
  return r;
}

template <class C>
inline NCPoly<C> residual_left(const QPoly& p, const NCPoly<C>& s) {
  NCPoly<C> r(s.alph);
  for (const auto& [u, c] : p.terms) {
    NCPoly<C> part = residual_left(u, s);
    if constexpr (std::is_same_v<C, Rational>)
      r += part * c;
    else
      r += part * C::constant(c);
  }
  return r;
}

// ---- coproducts (dual to shuffle / stuffle) ----------------------------

// Returns sum of (u, v, coeff) with <w | u *prod* v> = coeff, all splits included.
inline const std::vector<std::tuple<Word, Word, Rational>>& coproduct(Prod p, const Word& w) {
  if (p == Prod::concat) throw std::invalid_argument("deconcatenation not routed here");
  static std::map<std::pair<Prod, Word>, std::vector<std::tuple<Word, Word, Rational>>> memo;
  auto key = std::make_pair(p, w);
  auto it = memo.find(key);
  if (it != memo.end()) return it->second;
  std::map<std::pair<Word, Word>, Rational> acc;
  if (w.empty()) {
    acc[{w, w}] = 1;
  } else {
    Word tail = subword(w, 1, w.size() - 1);
    std::uint32_t x = w.a[0];
    for (const auto& [u, v, c] : coproduct(p, tail)) {
      acc[{prepend(w.alph, x, u), v}] += c;
      acc[{u, prepend(w.alph, x, v)}] += c;
      if (p == Prod::stuffle) {
        // y_x splits as y_i (x) y_j with i + j = x
        for (std::uint32_t i = 1; i < x; ++i)
          acc[{prepend(w.alph, i, u), prepend(w.alph, x - i, v)}] += c;
      }
    }
  }
  std::vector<std::tuple<Word, Word, Rational>> out;
  for (const auto& [uv, c] : acc)
    if (c != 0) out.emplace_back(uv.first, uv.second, c);
  return memo.emplace(key, std::move(out)).first->second;
}

// ---- group-likeness ----------------------------------------------------

// Checks <S|e>=1 and <S|u*v> = <S|u><S|v> for proper u, v with |u|+|v| <= max_w.
// Returns the first failing pair, or nullopt on success.
template <class C>
inline std::optional<std::pair<Word, Word>> grouplike_defect(const NCPoly<C>& s, Prod p,
                                                             int max_w) {
  Word eps{s.alph, {}};
  C one = [] {
    if constexpr (std::is_same_v<C, Rational>)
      return Rational(1);
    else
      return C::one();
  }();
  if (!coeff_is_zero(s.coeff(eps) - one)) return std::make_pair(eps, eps);
  for (int wu = 1; wu < max_w; ++wu) {
    for (const Word& u : all_words(s.alph, wu)) {
      for (int wv = wu; wu + wv <= max_w; ++wv) {
        for (const Word& v : all_words(s.alph, wv)) {
          if (wu == wv && lex_less(v, u)) continue;
          C lhs{};
          for (const auto& [w, c] : word_product(p, u, v).terms) lhs += c * s.coeff(w);
          C rhs = s.coeff(u) * s.coeff(v);
          if (!coeff_is_zero(lhs - rhs)) return std::make_pair(u, v);
        }
      }
    }
  }
  return std::nullopt;
}

template <class C>
inline bool grouplike_check(const NCPoly<C>& s, Prod p, int max_w) {
  return !grouplike_defect(s, p, max_w).has_value();
}

// ---- exp / log for the concatenation product ---------------------------

template <class C>
inline NCPoly<C> exp_trunc(const NCPoly<C>& p, int max_w) {
  if (!coeff_is_zero(p.coeff(Word{p.alph, {}})))
    throw std::invalid_argument("exp_trunc needs a proper argument");
  NCPoly<C> pow = NCPoly<C>::unit(p.alph, [] {
    if constexpr (std::is_same_v<C, Rational>)
      return Rational(1);
    else
      return C::one();
  }());
  NCPoly<C> out = pow;
  int mw = p.min_weight();
  if (p.is_zero()) return out;
  Rational invfact(1);
  for (int k = 1; k * mw <= max_w; ++k) {
    pow = concat_mul(pow, p, max_w);
    invfact /= k;
    if constexpr (std::is_same_v<C, Rational>)
      out += pow * invfact;
    else
      out += pow * C::constant(invfact);
  }
  return out;
}

template <class C>
inline NCPoly<C> log_trunc(const NCPoly<C>& s, int max_w) {
  NCPoly<C> t = s;
  Word eps{s.alph, {}};
  C one = [] {
    if constexpr (std::is_same_v<C, Rational>)
      return Rational(1);
    else
      return C::one();
  }();
  if (!coeff_is_zero(t.coeff(eps) - one))
    throw std::invalid_argument("log_trunc needs constant term 1");
  t.add_term(eps, C{} - one);
  NCPoly<C> out(s.alph), pow = NCPoly<C>::unit(s.alph, one);
  int mw = t.min_weight();
  if (t.is_zero()) return out;
  for (int k = 1; k * mw <= max_w; ++k) {
    pow = concat_mul(pow, t, max_w);
    Rational c = Rational((k % 2) ? 1 : -1) / k;
    if constexpr (std::is_same_v<C, Rational>)
      out += pow * c;
    else
      out += pow * C::constant(c);
  }
  return out;
}

// ---- projector onto primitive elements ---------------------------------

// pi1(w) = sum_{k>=1} (-1)^(k-1)/k sum <w | u1 * ... * uk> u1...uk  (ui proper).
inline QPoly pi1_word(Prod p, const Word& w) {
  if (w.empty()) return QPoly(w.alph);
  QPoly out = QPoly::from_word(w, Rational(1));
  // each nonempty piece has weight >= 1, so at most weight(w) pieces
  for (int k = 2; k <= w.weight(); ++k) {
    // T_k(w): all ways to cut w into k proper pieces under the reduced
    // coproduct, concatenated back together.
    std::map<Word, Rational> tk;
    std::function<void(const Word&, int, const Word&, const Rational&)> rec =
        [&](const Word& rest, int parts, const Word& acc, const Rational& coef) {
          if (parts == 1) {
            if (rest.empty()) return;
            Word full = concat(acc, rest);
            auto [it, fresh] = tk.emplace(full, coef);
            if (!fresh) it->second += coef;
            return;
          }
          for (const auto& [u, v, c] : coproduct(p, rest)) {
            if (u.empty() || v.empty()) continue;
            rec(v, parts - 1, concat(acc, u), coef * c);
          }
        };
    rec(w, k, Word{w.alph, {}}, Rational(1));
    Rational c = Rational((k % 2) ? 1 : -1) / k;
    for (const auto& [u, co] : tk) out.add_term(u, co * c);
  }
  return out;
}

inline QPoly pi1_project(Prod p, const QPoly& s) {
  QPoly out(s.alph);
  for (const auto& [w, c] : s.terms)
    if (!w.empty()) out += pi1_word(p, w) * c;
  return out;
}

// ---- letter-substitution morphisms -------------------------------------

enum class XMorphism : std::uint8_t { rho_1mz, rho_1m1z, rho_1z, mu };

// images on letters, as X-polynomials of degree 1
inline QPoly morphism_letter(XMorphism m, std::uint32_t letter) {
  QPoly p(Alphabet::X);
  Word x0{Alphabet::X, {0}}, x1{Alphabet::X, {1}};
  switch (m) {
    case XMorphism::rho_1mz:  // z -> 1-z : x0 -> -x1, x1 -> -x0
      p.add_term(letter == 0 ? x1 : x0, Rational(-1));
      break;
    case XMorphism::rho_1m1z:  // z -> 1-1/z : x0 -> -x0+x1, x1 -> -x0
      if (letter == 0) {
        p.add_term(x0, Rational(-1));
        p.add_term(x1, Rational(1));
      } else {
        p.add_term(x0, Rational(-1));
      }
      break;
    case XMorphism::rho_1z:  // z -> 1/z : x0 -> -x0+x1, x1 -> x1
      if (letter == 0) {
        p.add_term(x0, Rational(-1));
        p.add_term(x1, Rational(1));
      } else {
        p.add_term(x1, Rational(1));
      }
      break;
    case XMorphism::mu:  // swap x0 <-> x1
      p.add_term(letter == 0 ? x1 : x0, Rational(1));
      break;
  }
  return p;
}

template <class C>
inline NCPoly<C> apply_morphism(XMorphism m, const NCPoly<C>& s, int max_w = 1 << 20) {
  NCPoly<C> out(Alphabet::X);
  for (const auto& [w, c] : s.terms) {
    if (w.weight() > max_w) continue;
    QPoly img = QPoly::unit(Alphabet::X, Rational(1));
    for (std::uint32_t letter : w.a) img = concat_mul(img, morphism_letter(m, letter), max_w);
    for (const auto& [v, cv] : img.terms) {
      if constexpr (std::is_same_v<C, Rational>)
        out.add_term(v, c * cv);
      else
        out.add_term(v, c * C::constant(cv));
    }
  }
  return out;
}

// ---- projections between X and Y series --------------------------------

// Pi_Y: keep words ending in x1 (and eps), transcode to Y.
template <class C>
inline NCPoly<C> pi_Y(const NCPoly<C>& s) {
  NCPoly<C> out(Alphabet::Y);
  for (const auto& [w, c] : s.terms) {
    auto t = transcode(w);
    if (t) out.add_term(*t, c);
  }
  return out;
}

// Pi_X: embed a Y-series into X by transcoding each word.
template <class C>
inline NCPoly<C> pi_X(const NCPoly<C>& s) {
  NCPoly<C> out(Alphabet::X);
  for (const auto& [w, c] : s.terms) out.add_term(*transcode(w), c);
  return out;
}

}  // namespace mzv
