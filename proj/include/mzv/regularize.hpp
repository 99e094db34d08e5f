#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "bases.hpp"
#include "constants.hpp"
#include "ncpoly.hpp"

namespace mzv {

// ---- regularization morphisms -------------------------------------------
//
// Each morphism factors through the Radford decomposition: a word is written
// as a polynomial in its Lyndon words (for the given product), the images of
// the Lyndon generators are substituted, and the result is multiplied out in
// the commutative value ring.

namespace detail {

template <class F>
inline ConstPoly reg_morphism(Prod p, const QPoly& q, F&& lyndon_value) {
  ConstPoly out;
  for (const auto& [mono, c] : radford_decompose(p, q).terms) {
    ConstPoly prod = ConstPoly::constant(c);
    for (const Word& l : mono) {
      prod = prod * lyndon_value(l);
      if (prod.is_zero()) break;
    }
    out += prod;
  }
  return out;
}

}  // namespace detail

// x0, x1 |-> 0; every other X-Lyndon word is convergent and maps to its zeta
inline ConstPoly zeta_shuffle_reg(const QPoly& q) {
  if (q.alph != Alphabet::X)
    throw std::invalid_argument("zeta_shuffle_reg expects X words");
  return detail::reg_morphism(Prod::shuffle, q, [](const Word& l) {
    return l.size() == 1 ? ConstPoly{} : ConstPoly::zeta(l);
  });
}
inline ConstPoly zeta_shuffle_reg(const Word& w) {
  return zeta_shuffle_reg(QPoly::from_word(w, Rational(1)));
}

// y1 |-> 0; every other Y-Lyndon word starts with a letter of index >= 2
inline ConstPoly zeta_stuffle_reg(const QPoly& q) {
  if (q.alph != Alphabet::Y)
    throw std::invalid_argument("zeta_stuffle_reg expects Y words");
  return detail::reg_morphism(Prod::stuffle, q, [](const Word& l) {
    return (l.size() == 1 && l.a[0] == 1) ? ConstPoly{} : ConstPoly::zeta(l);
  });
}
inline ConstPoly zeta_stuffle_reg(const Word& w) {
  return zeta_stuffle_reg(QPoly::from_word(w, Rational(1)));
}

// y1 |-> gamma
inline ConstPoly gamma_reg(const QPoly& q) {
  if (q.alph != Alphabet::Y) throw std::invalid_argument("gamma_reg expects Y words");
  return detail::reg_morphism(Prod::stuffle, q, [](const Word& l) {
    return (l.size() == 1 && l.a[0] == 1) ? ConstPoly::gamma() : ConstPoly::zeta(l);
  });
}
inline ConstPoly gamma_reg(const Word& w) {
  return gamma_reg(QPoly::from_word(w, Rational(1)));
}

// ---- Bell polynomials ----------------------------------------------------

// Exponential partial Bell polynomial b_{n,k}(t1..t_{n-k+1}), read off the
// double generating series exp(u sum_l t_l v^l/l!) = sum b_{n,k} u^k v^n/n!.
template <class R>
inline R bell_partial(int n, int k, const std::vector<R>& t) {
  if (k < 1 || k > n) throw std::invalid_argument("bell_partial needs 1 <= k <= n");
  if (static_cast<int>(t.size()) < n - k + 1)
    throw std::invalid_argument("bell_partial needs t_1..t_{n-k+1}");
  // [v^n] (sum_l t_l v^l/l!)^k * n!/k!
  std::vector<R> pow(static_cast<std::size_t>(n) + 1, R{});
  if constexpr (std::is_same_v<R, Rational>)
    pow[0] = Rational(1);
  else
    pow[0] = R::one();
  for (int step = 0; step < k; ++step) {
    std::vector<R> nxt(static_cast<std::size_t>(n) + 1, R{});
    for (int a = 0; a <= n; ++a) {
      if (coeff_is_zero(pow[a])) continue;
      for (int l = 1; l <= n - k + 1 && a + l <= n; ++l)
        nxt[a + l] += pow[a] * t[l - 1] * (Rational(1) / factorial(l));
    }
    pow = std::move(nxt);
  }
  return pow[n] * (factorial(n) / factorial(k));
}

// ---- the Gamma-type series B and B' ---------------------------------------

namespace detail {
inline Word y1_power(int n) {
  return Word{Alphabet::Y, std::vector<std::uint32_t>(static_cast<std::size_t>(n), 1)};
}
}  // namespace detail

// B(y1) = exp(gamma y1 - sum_{k>=2} zeta(k)(-y1)^k/k) as a series on the
// words y1^n
inline NCPoly<ConstPoly> b_series(int max_w) {
  NCPoly<ConstPoly> arg(Alphabet::Y);
  for (int k = 1; k <= max_w; ++k) {
    ConstPoly g = (k == 1) ? ConstPoly::gamma()
                           : ConstPoly::zeta({static_cast<std::uint32_t>(k)});
    arg.add_term(detail::y1_power(k), g * (Rational((k % 2) ? 1 : -1) / k));
  }
  return exp_trunc(arg, max_w);
}

// B'(y1) = e^{-gamma y1} B(y1) = exp(-sum_{k>=2} zeta(k)(-y1)^k/k)
inline NCPoly<ConstPoly> bprime_series(int max_w) {
  NCPoly<ConstPoly> arg(Alphabet::Y);
  for (int k = 2; k <= max_w; ++k)
    arg.add_term(detail::y1_power(k),
                 ConstPoly::zeta({static_cast<std::uint32_t>(k)}) *
                     (Rational((k % 2) ? 1 : -1) / k));
  return exp_trunc(arg, max_w);
}

// ---- symbolic generating series -------------------------------------------

enum class RegKind { shuffle, stuffle, gamma };

// Series over ConstPoly whose coefficient on each word is its regularized
// value; the constant term is 1.
inline NCPoly<ConstPoly> build_Z(RegKind kind, int max_w) {
  if (max_w < 1) throw std::invalid_argument("build_Z needs max_w >= 1");
  Alphabet al = (kind == RegKind::shuffle) ? Alphabet::X : Alphabet::Y;
  NCPoly<ConstPoly> z = NCPoly<ConstPoly>::unit(al, ConstPoly::one());
  for (int w = 1; w <= max_w; ++w)
    for (const Word& u : all_words(al, w)) {
      switch (kind) {
        case RegKind::shuffle:
          z.add_term(u, zeta_shuffle_reg(u));
          break;
        case RegKind::stuffle:
          z.add_term(u, zeta_stuffle_reg(u));
          break;
        case RegKind::gamma:
          z.add_term(u, gamma_reg(u));
          break;
      }
    }
  return z;
}

// ---- generalized Euler constants: the closed form --------------------------

// gamma_{x1^k w} = sum_{i=0}^k (1/i!) zeta_sh(x0[(-1)^(k-i) x1^(k-i) shuffle u])
//                  * sum_j b_{i,j}(gamma, -zeta(2), 2 zeta(3), ...),  w = x0 u,
// with x1^(k-i) the plain word. Independent of the Radford route; used to
// cross-check gamma_reg.
inline ConstPoly gamma_closed_form(int k, const Word& w) {
  if (w.alph != Alphabet::X || w.size() < 2 || w.a.front() != 0 || w.a.back() != 1)
    throw std::invalid_argument("gamma_closed_form needs a convergent X word");
  if (k < 0) throw std::invalid_argument("gamma_closed_form needs k >= 0");
  Word u = subword(w, 1, w.size() - 1);

  // t_1 = gamma, t_m = (-1)^(m-1) (m-1)! zeta(m)
  std::vector<ConstPoly> t;
  for (int m = 1; m <= k; ++m)
    t.push_back(m == 1 ? ConstPoly::gamma()
                       : ConstPoly::zeta({static_cast<std::uint32_t>(m)}) *
                             (Rational((m % 2) ? 1 : -1) * factorial(m - 1)));

  ConstPoly out;
  for (int i = 0; i <= k; ++i) {
    int j = k - i;
    Word x1j{Alphabet::X, std::vector<std::uint32_t>(static_cast<std::size_t>(j), 1)};
    QPoly sh = shuffle(QPoly::from_word(x1j, Rational((j % 2) ? -1 : 1)),
                       QPoly::from_word(u, Rational(1)));
    QPoly inner(Alphabet::X);
    for (const auto& [v, c] : sh.terms) inner.add_term(prepend(Alphabet::X, 0, v), c);
    ConstPoly bf = ConstPoly::one();
    if (i >= 1) {
      ConstPoly s;
      for (int jj = 1; jj <= i; ++jj) s += bell_partial(i, jj, t);
      bf = s;
    }
    out += zeta_shuffle_reg(inner) * bf * (Rational(1) / factorial(i));
  }
  return out;
}

}  // namespace mzv
