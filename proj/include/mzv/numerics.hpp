#pragma once

#include <boost/multiprecision/mpfr.hpp>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "constants.hpp"
#include "rational.hpp"
#include "regularize.hpp"
#include "words.hpp"

namespace mzv {

using Real = boost::multiprecision::mpfr_float;

// absolute bound on one rounding of x at its own mpfr precision
inline double round_slack(const Real& x) {
  long p = mpfr_get_prec(x.backend().data());
  double ax = std::fabs(x.convert_to<double>());
  if (!std::isfinite(ax)) ax = 1e300;
  int e = static_cast<int>(std::max(-900L, 2 - p));
  return std::ldexp(ax + 1.0, e);
}

// value at working precision plus a certified absolute error bound
struct BigReal {
  Real value{0};
  double bound{0};

  BigReal() = default;
  BigReal(Real v, double b) : value(std::move(v)), bound(b) {}

  friend BigReal operator+(const BigReal& a, const BigReal& b) {
    Real s = a.value + b.value;
    double e = a.bound + b.bound + round_slack(s);
    return {std::move(s), e};
  }
  friend BigReal operator-(const BigReal& a, const BigReal& b) {
    Real s = a.value - b.value;
    double e = a.bound + b.bound + round_slack(s);
    return {std::move(s), e};
  }
  friend BigReal operator*(const BigReal& a, const BigReal& b) {
    Real s = a.value * b.value;
    double av = std::fabs(a.value.convert_to<double>()) * (1 + 1e-12) + 1e-300;
    double bv = std::fabs(b.value.convert_to<double>()) * (1 + 1e-12) + 1e-300;
    double e = av * b.bound + bv * a.bound + a.bound * b.bound + round_slack(s);
    return {std::move(s), e};
  }

  double approx() const { return value.convert_to<double>(); }
};

inline BigReal abs_value(const BigReal& a) {
  return {a.value < 0 ? Real(-a.value) : a.value, a.bound};
}

struct EvalContext {
  unsigned digits;       // requested decimal digits
  unsigned work_digits;  // internal working precision

  std::map<std::vector<std::uint32_t>, BigReal> zeta_cache;
  std::map<Word, BigReal> li_half_cache;
  std::optional<BigReal> gamma_cache, pi_cache;

  explicit EvalContext(unsigned d = 40) : digits(d), work_digits(d + 15) {
    if (d < 20) throw std::invalid_argument("precision must be at least 20 digits");
  }

  // mpfr temporaries pick up the thread default precision
  void activate() const { Real::default_precision(work_digits); }

  BigReal from_rational(const Rational& q) const {
    activate();
    Real v = Real(numerator(q)) / Real(denominator(q));
    double b = round_slack(v);
    return {std::move(v), b};
  }
};

inline const BigReal& euler_gamma(EvalContext& ctx) {
  if (!ctx.gamma_cache) {
    ctx.activate();
    Real g(0);
    mpfr_const_euler(g.backend().data(), MPFR_RNDN);
    ctx.gamma_cache = BigReal{g, round_slack(g)};
  }
  return *ctx.gamma_cache;
}

inline const BigReal& pi_const(EvalContext& ctx) {
  if (!ctx.pi_cache) {
    ctx.activate();
    Real p(0);
    mpfr_const_pi(p.backend().data(), MPFR_RNDN);
    ctx.pi_cache = BigReal{p, round_slack(p)};
  }
  return *ctx.pi_cache;
}

// ---- polylogarithms at small |z| ------------------------------------------

// Li_w(z) = sum a_n(w) z^n with a_n(x0 u) = a_n(u)/n and
// a_n(x1 u) = (1/n) sum_{m<n} a_m(u); all |a_n| <= 1, so the tail beyond N
// is below z^{N+1}/(1-z) <= 2^-N for z <= 1/2.
inline BigReal li_taylor(const Word& w, const Rational& z, EvalContext& ctx) {
  if (w.alph != Alphabet::X) throw std::invalid_argument("li_taylor expects an X word");
  if (!(z > 0) || z > Rational(1, 2))
    throw std::invalid_argument("li_taylor expects z in (0, 1/2]");
  if (!w.empty() && w.a.back() == 0)
    throw std::domain_error("divergent at 0 (trailing x0): " + w.str());
  ctx.activate();
  int N = static_cast<int>(3.33 * ctx.digits) + 10;

  std::vector<Real> a(static_cast<std::size_t>(N) + 1, Real(0));
  a[0] = 1;
  for (std::size_t i = w.size(); i-- > 0;) {
    std::vector<Real> b(static_cast<std::size_t>(N) + 1, Real(0));
    if (w.a[i] == 0) {
      for (int n = 1; n <= N; ++n) b[n] = a[n] / n;
    } else {
      Real pref(0);
      for (int n = 1; n <= N; ++n) {
        pref += a[n - 1];
        b[n] = pref / n;
      }
    }
    a = std::move(b);
  }

  Real zr = Real(numerator(z)) / Real(denominator(z));
  Real pw(1), sum(a[0]);
  for (int n = 1; n <= N; ++n) {
    pw *= zr;
    sum += a[n] * pw;
  }
  double tail = std::ldexp(1.0, -N);
  double arith = static_cast<double>((w.size() + 3) * static_cast<std::size_t>(N)) *
                 round_slack(sum);
  return {std::move(sum), tail + arith};
}

inline const BigReal& li_half_cached(EvalContext& ctx, const Word& w) {
  auto it = ctx.li_half_cache.find(w);
  if (it == ctx.li_half_cache.end())
    it = ctx.li_half_cache.emplace(w, li_taylor(w, Rational(1, 2), ctx)).first;
  return it->second;
}

// ---- polyzetas via path splitting at 1/2 -----------------------------------

// zeta(w) = sum over splits w = uv of Li_{u-reversed-and-swapped}(1/2) Li_v(1/2):
// the left half of the integration path is pulled back to [0,1/2] by t -> 1-t,
// which reverses the word and swaps the letters; the orientation and form
// signs cancel. Every factor converges geometrically at 1/2.
inline BigReal zeta_value(const std::vector<std::uint32_t>& comp, EvalContext& ctx) {
  if (comp.empty() || comp.front() < 2) throw std::domain_error("divergent composition");
  auto it = ctx.zeta_cache.find(comp);
  if (it != ctx.zeta_cache.end()) return it->second;

  Word y = word_from_composition(comp);
  auto x = transcode(y);
  if (!x) throw std::logic_error("composition failed to transcode");
  ctx.activate();
  BigReal total = ctx.from_rational(Rational(0));
  BigReal one = ctx.from_rational(Rational(1));
  for (std::size_t i = 0; i <= x->size(); ++i) {
    Word u = subword(*x, 0, i);
    Word v = subword(*x, i, x->size() - i);
    BigReal lu = u.empty() ? one : li_half_cached(ctx, hat_dual(u));
    BigReal lv = v.empty() ? one : li_half_cached(ctx, v);
    total = total + lu * lv;
  }
  ctx.zeta_cache.emplace(comp, total);
  return total;
}

inline BigReal zeta_value(const Word& w, EvalContext& ctx) {
  if (w.alph == Alphabet::Y) return zeta_value(w.a, ctx);
  auto y = transcode(w);
  if (!y) throw std::domain_error("divergent word: " + w.str());
  return zeta_value(y->a, ctx);
}

// Truncated multiple summation with an integral tail bound; depth <= 2.
// Slow and crude on purpose: an independent check of the path-split route.
inline BigReal zeta_naive(const std::vector<std::uint32_t>& comp, long terms, EvalContext& ctx) {
  if (comp.empty() || comp.front() < 2) throw std::domain_error("divergent composition");
  if (comp.size() > 2) throw std::invalid_argument("naive summation kept to depth <= 2");
  ctx.activate();
  Real sum(0);
  long ops = 0;
  if (comp.size() == 1) {
    for (long n = terms; n >= 1; --n) {
      Real t(n);
      sum += 1 / pow(t, static_cast<unsigned>(comp[0]));
    }
    ops = terms;
  } else {
    Real inner(0);  // H_{r2}(n1 - 1), updated incrementally
    for (long n1 = 2; n1 <= terms; ++n1) {
      Real t(n1 - 1);
      inner += 1 / pow(t, static_cast<unsigned>(comp[1]));
      sum += inner / pow(Real(n1), static_cast<unsigned>(comp[0]));
    }
    ops = 2 * terms;
  }
  // tail: sum_{n>M} n^-r1 (H_{r2} factor <= 1 + ln n grows slower than n^eps)
  double M = static_cast<double>(terms);
  double r1 = comp[0];
  double hfac = comp.size() == 2 ? (2.0 + std::log(M)) : 1.0;
  double tail = hfac * std::pow(M, 1.0 - r1) / (r1 - 1.0);
  double arith = static_cast<double>(ops + 10) * round_slack(sum) * 4;
  return {std::move(sum), tail + arith};
}

// ---- harmonic sums ---------------------------------------------------------

// H_{r1..rk}(N) = sum_{N >= n1 > ... > nk >= 1} prod n_i^{-r_i}, exact.
// One pass over n with the running sums s[i] = H_{r_i..r_k}(n); updating
// shallow levels first keeps everything at the n-1 state they need.
inline Rational harmonic_sum(const std::vector<std::uint32_t>& comp, long N) {
  if (N < 0) throw std::invalid_argument("harmonic_sum needs N >= 0");
  if (N > 100000)
    throw std::invalid_argument("exact harmonic sums stop at N = 1e5; use float mode");
  std::size_t k = comp.size();
  std::vector<Rational> s(k + 1, Rational(0));
  s[k] = 1;
  for (long n = 1; n <= N; ++n)
    for (std::size_t i = 0; i < k; ++i) {
      Integer p = 1;
      for (std::uint32_t r = 0; r < comp[i]; ++r) p *= n;
      s[i] += s[i + 1] / Rational(p);
    }
  return s[0];
}

// float mode: same scheme at working precision
inline BigReal harmonic_sum_real(const std::vector<std::uint32_t>& comp, long N,
                                 EvalContext& ctx) {
  if (N < 0) throw std::invalid_argument("harmonic_sum needs N >= 0");
  ctx.activate();
  std::size_t k = comp.size();
  std::vector<Real> s(k + 1, Real(0));
  s[k] = 1;
  for (long n = 1; n <= N; ++n)
    for (std::size_t i = 0; i < k; ++i) s[i] += s[i + 1] / pow(Real(n), comp[i]);
  double arith = static_cast<double>(k * static_cast<std::size_t>(N + 1) + 10) *
                 round_slack(s[0]) * 4;
  return {std::move(s[0]), arith};
}

// ---- bridge to the symbol ring ---------------------------------------------

struct StdEvaluator {
  EvalContext* ctx;
  BigReal zeta(const std::vector<std::uint32_t>& c) { return zeta_value(c, *ctx); }
  BigReal gamma() { return euler_gamma(*ctx); }
  BigReal pi() { return pi_const(*ctx); }
  BigReal from_rational(const Rational& q) { return ctx->from_rational(q); }
};

// |p| evaluated over the complex split; vanishes when the magnitude stays
// within the propagated bound plus the tolerance.
inline std::pair<bool, BigReal> check_vanishes(const ConstPoly& p, EvalContext& ctx,
                                               double tol) {
  StdEvaluator ev{&ctx};
  auto [re, im] = eval_numeric<BigReal>(p, ev);
  BigReal residual = abs_value(re) + abs_value(im);
  bool ok = residual.value <= Real(tol) + Real(residual.bound);
  return {ok, residual};
}

// ---- finite parts of divergent harmonic sums --------------------------------

// Subtracts from H_w(N) every term of the asymptotic expansion carrying a
// positive power of the divergent coordinate H_{y1}(N); with lambda =
// H_{y1}(N) - gamma the predicted coefficient of lambda^j/j! is the
// regularized value of the tail of w behind its y1^j prefix. The residue
// estimates gamma_w up to O(polylog(N)/N).
inline BigReal finite_part_estimate(const Word& w, long N, EvalContext& ctx) {
  if (w.alph != Alphabet::Y || w.empty())
    throw std::invalid_argument("finite_part_estimate expects a nonempty Y word");
  if (N < 1000) throw std::invalid_argument("finite_part_estimate needs N >= 1e3");
  BigReal h = harmonic_sum_real(w.a, N, ctx);
  BigReal lambda = harmonic_sum_real({1}, N, ctx) - euler_gamma(ctx);
  StdEvaluator ev{&ctx};
  BigReal out = h;
  BigReal lam_pow = ctx.from_rational(Rational(1));
  Word v = w;
  int j = 0;
  while (!v.empty() && v.a.front() == 1) {
    v = subword(v, 1, v.size() - 1);
    ++j;
    lam_pow = lam_pow * lambda;
    auto [re, im] = eval_numeric<BigReal>(gamma_reg(v), ev);
    out = out - ctx.from_rational(Rational(1) / factorial(static_cast<unsigned>(j))) *
                    lam_pow * re;
  }
  return out;
}

}  // namespace mzv
