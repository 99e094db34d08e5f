#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "ncpoly.hpp"

namespace mzv {

template <class C>
inline C pairing(const NCPoly<C>& a, const QPoly& b) {
  C s{};
  for (const auto& [w, c] : b.terms) {
    if constexpr (std::is_same_v<C, Rational>)
      s += a.coeff(w) * c;
    else
      s += a.coeff(w) * C::constant(c);
  }
  return s;
}

// Lyndon bracketing along the standard factorization; Lie element for the
// concatenation commutator. Classical dual of the S-family on the X side.
inline QPoly lyndon_bracket(const Word& l) {
  if (!is_lyndon(l)) throw std::invalid_argument("bracketing needs a Lyndon word");
  if (l.size() == 1) return QPoly::from_word(l, Rational(1));
  auto [u, v] = standard_factorization(l);
  QPoly a = lyndon_bracket(u), b = lyndon_bracket(v);
  int max_w = l.weight();
  return concat_mul(a, b, max_w) - concat_mul(b, a, max_w);
}

// Dual pair of graded bases for (Q<X>, shuffle) or (Q<Y>, stuffle):
//   S_w: S_eps = 1; S_l = x·S_u for Lyndon l = xu; divided product powers
//        S_w = S_{l1}^{i1} ... S_{lk}^{ik} / (i1!...ik!) for composite w.
//   P_l (Lyndon): the dual family obtained by inverting the unitriangular
//        matrix <w, S_v> weight by weight; P_w = P_{l1}...P_{lk} (concat)
//        along the nonincreasing factorization for composite w.
class DualBasis {
 public:
  DualBasis(Alphabet al, Prod prod, int max_weight, const std::string& cache_dir = "")
      : alph_(al), prod_(prod), maxw_(max_weight) {
    if ((prod == Prod::stuffle) != (al == Alphabet::Y))
      throw std::invalid_argument("shuffle lives on X, stuffle on Y");
    lyndon_ = lyndon_generate(al, max_weight);
    for (int w = 1; w <= max_weight; ++w) {
      if (!cache_dir.empty() && load_level(cache_dir, w)) continue;
      build_level(w);
      if (!cache_dir.empty()) save_level(cache_dir, w);
    }
  }

  Alphabet alphabet() const { return alph_; }
  Prod product() const { return prod_; }
  int max_weight() const { return maxw_; }
  const std::vector<Word>& lyndon_words() const { return lyndon_; }

  const QPoly& S(const Word& w) {
    if (w.weight() > maxw_) throw std::invalid_argument("word above basis cutoff");
    auto it = s_.find(w);
    if (it != s_.end()) return it->second;
    return s_.emplace(w, compute_S(w)).first->second;
  }

  const QPoly& P(const Word& w) {
    if (w.weight() > maxw_) throw std::invalid_argument("word above basis cutoff");
    auto it = p_.find(w);
    if (it != p_.end()) return it->second;
    if (is_lyndon(w)) throw std::logic_error("Lyndon duals are built level by level");
    QPoly prod = QPoly::unit(alph_, Rational(1));
    for (const Word& f : lyndon_factorize(w)) prod = concat_mul(prod, P(f), maxw_);
    return p_.emplace(w, std::move(prod)).first->second;
  }

 private:
  QPoly compute_S(const Word& w) {
    if (w.empty()) return QPoly::unit(alph_, Rational(1));
    if (is_lyndon(w)) {
      QPoly tail = S(subword(w, 1, w.size() - 1));
      QPoly out(alph_);
      for (const auto& [v, c] : tail.terms) out.add_term(prepend(alph_, w.a[0], v), c);
      return out;
    }
    auto factors = lyndon_factorize(w);
    QPoly out = QPoly::unit(alph_, Rational(1));
    std::size_t i = 0;
    while (i < factors.size()) {
      std::size_t j = i;
      while (j < factors.size() && factors[j] == factors[i]) ++j;
      Rational invfact(1);
      for (std::size_t k = 2; k <= j - i; ++k) invfact /= static_cast<long>(k);
      QPoly pw = QPoly::unit(alph_, Rational(1));
      const QPoly& base = S(factors[i]);
      for (std::size_t k = i; k < j; ++k) pw = apply_product(prod_, pw, base);
      out = apply_product(prod_, out, pw * invfact);
      i = j;
    }
    return out;
  }

  void build_level(int wt) {
    auto words = all_words(alph_, wt);  // lex ascending
    const std::size_t n = words.size();
    std::map<Word, std::size_t> index;
    for (std::size_t i = 0; i < n; ++i) index.emplace(words[i], i);
    // columns: S_{words[j]}; unit triangular with support on rows i <= j
    std::vector<std::map<std::size_t, Rational>> col(n);
    for (std::size_t j = 0; j < n; ++j) {
      for (const auto& [v, c] : S(words[j]).terms) {
        std::size_t i = index.at(v);
        if (i > j)
          throw std::logic_error("dual triangularity violated at " + words[j].str());
        col[j][i] = c;
      }
      if (col[j].count(j) == 0 || col[j][j] != 1)
        throw std::logic_error("dual family not unit triangular at " + words[j].str());
    }
    for (const Word& l : lyndon_) {
      if (l.weight() != wt) continue;
      std::size_t li = index.at(l);
      // forward substitution for b with b^T M = e_l^T
      std::vector<Rational> b(n, Rational(0));
      QPoly pl(alph_);
      for (std::size_t j = 0; j < n; ++j) {
        Rational acc = (j == li) ? Rational(1) : Rational(0);
        for (const auto& [i, m] : col[j])
          if (i < j) acc -= b[i] * m;
        b[j] = acc;
        if (b[j] != 0) pl.add_term(words[j], b[j]);
      }
      p_.emplace(l, std::move(pl));
    }
  }

  static std::string prod_tag(Prod p) { return p == Prod::shuffle ? "sh" : "qsh"; }

  std::string level_path(const std::string& dir, int wt) const {
    return dir + "/basis_" + std::string(alph_ == Alphabet::X ? "X" : "Y") + "_" +
           prod_tag(prod_) + "_w" + std::to_string(wt) + ".json";
  }

  static nlohmann::json poly_json(const QPoly& p) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [w, c] : p.terms) j[w.str()] = rational_to_string(c);
    return j;
  }

  QPoly poly_from_json(const nlohmann::json& j) const {
    QPoly p(alph_);
    for (auto it = j.begin(); it != j.end(); ++it)
      p.add_term(parse_word(it.key(), alph_), parse_rational(it.value().get<std::string>()));
    return p;
  }

  void save_level(const std::string& dir, int wt) {
    nlohmann::json entries = nlohmann::json::array();
    for (const Word& l : lyndon_) {
      if (l.weight() != wt) continue;
      entries.push_back({{"lyndon", l.str()},
                         {"lie_elem", poly_json(p_.at(l))},
                         {"dual", poly_json(S(l))}});
    }
    nlohmann::json j = {{"alphabet", alph_ == Alphabet::X ? "X" : "Y"},
                        {"weight", wt},
                        {"entries", entries}};
    std::ofstream out(level_path(dir, wt));
    if (out) out << j.dump(1) << "\n";
  }

  bool load_level(const std::string& dir, int wt) {
    std::ifstream in(level_path(dir, wt));
    if (!in) return false;
    nlohmann::json j;
    try {
      in >> j;
      if (j.at("weight").get<int>() != wt) return false;
      std::size_t expect = 0;
      for (const Word& l : lyndon_)
        if (l.weight() == wt) ++expect;
      if (j.at("entries").size() != expect) return false;
      std::map<Word, std::pair<QPoly, QPoly>> got;
      for (const auto& e : j.at("entries")) {
        Word l = parse_word(e.at("lyndon").get<std::string>(), alph_);
        if (!is_lyndon(l) || l.weight() != wt) return false;
        got.emplace(l, std::make_pair(poly_from_json(e.at("lie_elem")),
                                      poly_from_json(e.at("dual"))));
      }
      if (got.size() != expect) return false;
      for (auto& [l, pair] : got) {
        p_[l] = std::move(pair.first);
        s_[l] = std::move(pair.second);
      }
      return true;
    } catch (const std::exception&) {
      return false;
    }
  }

  Alphabet alph_;
  Prod prod_;
  int maxw_;
  std::vector<Word> lyndon_;
  std::map<Word, QPoly> s_, p_;
};

struct DualBasisPair {
  Word lyndon;
  QPoly lie_elem;  // P_l
  QPoly dual;      // S_l
};

inline DualBasisPair pbw_pair(DualBasis& basis, const Word& l) {
  if (!is_lyndon(l)) throw std::invalid_argument("pbw_pair needs a Lyndon word: " + l.str());
  return DualBasisPair{l, basis.P(l), basis.S(l)};
}

// ---- Radford decomposition ---------------------------------------------
// Commutative polynomial in Lyndon-word indeterminates; a monomial is a
// sorted multiset of Lyndon words.
using LyndonMonomial = std::vector<Word>;

struct LyndonPoly {
  std::map<LyndonMonomial, Rational> terms;

  void add(const LyndonMonomial& m, const Rational& c) {
    if (c == 0) return;
    auto [it, fresh] = terms.emplace(m, c);
    if (!fresh) {
      it->second += c;
      if (it->second == 0) terms.erase(it);
    }
  }
  LyndonPoly& operator+=(const LyndonPoly& o) {
    for (const auto& [m, c] : o.terms) add(m, c);
    return *this;
  }
  LyndonPoly& operator*=(const Rational& s) {
    if (s == 0) {
      terms.clear();
      return *this;
    }
    for (auto& [m, c] : terms) c *= s;
    return *this;
  }
  bool operator==(const LyndonPoly& o) const { return terms == o.terms; }
};

// plain product powers of the monomial's words under the named product
inline QPoly radford_expand_monomial(Prod prod, const LyndonMonomial& m, Alphabet al) {
  QPoly out = QPoly::unit(al, Rational(1));
  for (const Word& l : m) out = apply_product(prod, out, QPoly::from_word(l, Rational(1)));
  return out;
}

inline QPoly radford_expand(Prod prod, const LyndonPoly& q, Alphabet al) {
  QPoly out(al);
  for (const auto& [m, c] : q.terms) out += radford_expand_monomial(prod, m, al) * c;
  return out;
}

namespace detail {
inline const LyndonPoly& radford_word(Prod prod, const Word& w) {
  static std::map<std::pair<Prod, Word>, LyndonPoly> memo;
  auto key = std::make_pair(prod, w);
  auto it = memo.find(key);
  if (it != memo.end()) return it->second;
  LyndonPoly q;
  if (w.empty()) {
    q.add({}, Rational(1));
    return memo.emplace(key, std::move(q)).first->second;
  }
  LyndonMonomial m = lyndon_factorize(w);
  std::sort(m.begin(), m.end());
  Rational mult(1);  // product of multiplicities' factorials
  std::size_t i = 0;
  while (i < m.size()) {
    std::size_t j = i;
    Rational f(1);
    while (j < m.size() && m[j] == m[i]) {
      ++j;
      f *= static_cast<long>(j - i);
    }
    mult *= f;
    i = j;
  }
  QPoly expanded = radford_expand_monomial(prod, m, w.alph) * (Rational(1) / mult);
  q.add(m, Rational(1) / mult);
  expanded.add_term(w, Rational(-1));
  for (const auto& [v, c] : expanded.terms) {
    if (v == w) throw std::logic_error("radford leading-term failure at " + w.str());
    if (!lex_less(v, w)) throw std::logic_error("radford triangularity failure at " + w.str());
    LyndonPoly sub = radford_word(prod, v);
    sub *= -c;
    q += sub;
  }
  return memo.emplace(key, std::move(q)).first->second;
}
}  // namespace detail

inline LyndonPoly radford_decompose(Prod prod, const QPoly& p) {
  LyndonPoly out;
  for (const auto& [w, c] : p.terms) {
    LyndonPoly part = detail::radford_word(prod, w);
    part *= c;
    out += part;
  }
  return out;
}

// ---- MRS factorization ---------------------------------------------------

inline std::vector<Word> lyndon_descending(Alphabet al, int max_w) {
  auto ls = lyndon_generate(al, max_w);
  std::sort(ls.begin(), ls.end(), [](const Word& a, const Word& b) { return lex_less(b, a); });
  return ls;
}

// c_l = <S | S_l> for each Lyndon l up to the cutoff; S must be group-like.
template <class C>
inline std::vector<std::pair<Word, C>> mrs_factorize(const NCPoly<C>& s, Prod prod,
                                                     DualBasis& basis, int cutoff) {
  auto defect = grouplike_defect(s, prod, cutoff);
  if (defect)
    throw std::domain_error("series is not group-like: fails at (" + defect->first.str() +
                            ", " + defect->second.str() + ")");
  std::vector<std::pair<Word, C>> out;
  for (const Word& l : lyndon_descending(s.alph, cutoff))
    out.emplace_back(l, pairing(s, basis.S(l)));
  return out;
}

// prod^{descending} exp(c_l P_l) under concatenation, truncated at cutoff
template <class C>
inline NCPoly<C> mrs_reconstruct(const std::vector<std::pair<Word, C>>& coeffs,
                                 DualBasis& basis, int cutoff) {
  Alphabet al = basis.alphabet();
  C one = [] {
    if constexpr (std::is_same_v<C, Rational>)
      return Rational(1);
    else
      return C::one();
  }();
  NCPoly<C> out = NCPoly<C>::unit(al, one);
  auto order = lyndon_descending(al, cutoff);
  std::map<Word, C> cmap;
  for (const auto& [l, c] : coeffs) cmap.emplace(l, c);
  for (const Word& l : order) {
    auto it = cmap.find(l);
    if (it == cmap.end() || coeff_is_zero(it->second)) continue;
    NCPoly<C> arg(al);
    for (const auto& [w, q] : basis.P(l).terms) {
      if constexpr (std::is_same_v<C, Rational>)
        arg.add_term(w, it->second * q);
      else
        arg.add_term(w, it->second * C::constant(q));
    }
    out = concat_mul(out, exp_trunc(arg, cutoff), cutoff);
  }
  return out;
}

// Coefficient-wise check of prod^{descending} exp(S_l (x) P_l) = sum_w w (x) w.
inline std::optional<std::pair<Word, Word>> mrs_diagonal_defect(DualBasis& basis, int cutoff) {
  Alphabet al = basis.alphabet();
  Prod prod = basis.product();
  using Tensor = std::map<std::pair<Word, Word>, Rational>;
  Tensor acc;
  acc[{Word{al, {}}, Word{al, {}}}] = 1;
  for (const Word& l : lyndon_descending(al, cutoff)) {
    // exp(S_l (x) P_l) truncated: sum_k S_l^{sh k}/k! (x) P_l^{conc k}
    std::vector<std::pair<QPoly, QPoly>> powers;
    QPoly sp = QPoly::unit(al, Rational(1)), pp = QPoly::unit(al, Rational(1));
    Rational invfact(1);
    for (int k = 0; k * l.weight() <= cutoff; ++k) {
      if (k > 0) {
        sp = apply_product(prod, sp, basis.S(l));
        pp = concat_mul(pp, basis.P(l), cutoff);
        invfact /= k;
      }
      powers.emplace_back(truncate(sp * invfact, cutoff), pp);
    }
    Tensor next;
    for (const auto& [uv, c] : acc) {
      for (const auto& [sl, pl] : powers) {
        QPoly left = apply_product(prod, QPoly::from_word(uv.first, Rational(1)), sl);
        QPoly right = concat_mul(QPoly::from_word(uv.second, Rational(1)), pl, cutoff);
        for (const auto& [u, cu] : left.terms) {
          if (u.weight() > cutoff) continue;
          for (const auto& [v, cv] : right.terms) {
            Rational add = c * cu * cv;
            if (add == 0) continue;
            auto [it, fresh] = next.emplace(std::make_pair(u, v), add);
            if (!fresh) {
              it->second += add;
              if (it->second == 0) next.erase(it);
            }
          }
        }
      }
    }
    acc = std::move(next);
  }
  for (int wu = 0; wu <= cutoff; ++wu)
    for (const Word& u : wu ? all_words(al, wu) : std::vector<Word>{Word{al, {}}})
      for (int wv = 0; wv <= cutoff; ++wv)
        for (const Word& v : wv ? all_words(al, wv) : std::vector<Word>{Word{al, {}}}) {
          auto it = acc.find({u, v});
          Rational got = (it == acc.end()) ? Rational(0) : it->second;
          if (got != ((u == v) ? Rational(1) : Rational(0))) return std::make_pair(u, v);
        }
  return std::nullopt;
}

}  // namespace mzv
