#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bases.hpp"
#include "constants.hpp"
#include "json.hpp"
#include "ncpoly.hpp"
#include "regularize.hpp"
#include "words.hpp"

namespace mzv {

enum class RelKind : std::uint8_t { double_shuffle, duality, hexagon };

struct Relation {
  ConstPoly poly;  // asserted = 0
  int weight = 0;
  RelKind kind = RelKind::double_shuffle;
  Word source{Alphabet::Y, {}};

  std::string provenance() const {
    const char* k = kind == RelKind::double_shuffle ? "double_shuffle"
                    : kind == RelKind::duality      ? "duality"
                                                    : "hexagon";
    return std::string(k) + "(" + source.str() + ")";
  }
};

inline Relation make_relation(ConstPoly p, RelKind kind, const Word& src) {
  if (p.is_zero()) throw std::logic_error("empty relation from " + src.str());
  if (!p.is_homogeneous())
    throw std::logic_error("relation not weight-homogeneous from " + src.str());
  int w = p.weight();
  if (w < 2) throw std::logic_error("nonzero constant relation from " + src.str());
  return {std::move(p), w, kind, src};
}

// Replace every symbol sitting on a non-Lyndon word by the quasi-shuffle
// expansion of that word, so relations live on Lyndon generators only.
inline ConstPoly lyndonize(const ConstPoly& p) {
  ConstPoly out;
  for (const auto& [m, c] : p.terms) {
    ConstPoly acc = ConstPoly::constant(c);
    for (const ConstSymbol& s : m.syms) {
      if (s.kind == SymKind::zeta) {
        Word w = word_from_composition(s.comp);
        if (!is_lyndon(w)) {
          acc = acc * zeta_stuffle_reg(w);
          continue;
        }
      }
      acc = acc * ConstPoly::symbol(s);
    }
    out += acc;
  }
  return out;
}

// One-pass substitution homomorphism on symbols (unlike normalize, which
// rewrites to a fixpoint and so cannot take z(l) -> z(l) + t).
inline ConstPoly substitute(const ConstPoly& p, const std::map<ConstSymbol, ConstPoly>& img) {
  ConstPoly out;
  for (const auto& [m, c] : p.terms) {
    ConstPoly acc = ConstPoly::constant(c);
    for (const ConstSymbol& s : m.syms) {
      auto it = img.find(s);
      acc = acc * (it == img.end() ? ConstPoly::symbol(s) : it->second);
    }
    out += acc;
  }
  return out;
}

// ---- relation families -----------------------------------------------------

namespace detail {

// coefficients of y1^j in B'(y1), ready for prefix splitting
inline std::vector<ConstPoly> bprime_coeffs(int max_w) {
  NCPoly<ConstPoly> bp = bprime_series(max_w);
  std::vector<ConstPoly> bj(static_cast<std::size_t>(max_w) + 1);
  for (int j = 0; j <= max_w; ++j)
    bj[j] = bp.coeff(Word{Alphabet::Y, std::vector<std::uint32_t>(static_cast<std::size_t>(j), 1)});
  return bj;
}

// stuffle route minus shuffle route for one Y-word: the defect of
// Z_stuffle = B'(y1) Pi_Y Z_shuffle at w, as a polynomial in Lyndon symbols
inline ConstPoly double_shuffle_defect(const Word& w, const std::vector<ConstPoly>& bj) {
  ConstPoly r = zeta_stuffle_reg(w);
  std::size_t lead = 0;
  while (lead < w.size() && w.a[lead] == 1) ++lead;
  for (std::size_t j = 0; j <= lead; ++j) {
    if (bj[j].is_zero()) continue;
    r -= bj[j] * zeta_shuffle_reg(*transcode(subword(w, j, w.size() - j)));
  }
  return r;
}

}  // namespace detail

// Coefficient comparison in Z_stuffle = B'(y1) Pi_Y Z_shuffle: for each Y-word
// w the stuffle-regularized value must match sum_{w = y1^j v} b'_j times the
// shuffle-regularized value of v transcoded. Both sides expand over Lyndon
// generators, so a mismatch is a genuine polynomial identity among polyzetas.
inline std::vector<Relation> derive_double_shuffle(int max_w) {
  if (max_w < 2) throw std::invalid_argument("derive_double_shuffle needs max_w >= 2");
  std::vector<ConstPoly> bj = detail::bprime_coeffs(max_w);
  std::vector<Relation> out;
  for (int wt = 2; wt <= max_w; ++wt)
    for (const Word& w : all_words(Alphabet::Y, wt)) {
      ConstPoly r = detail::double_shuffle_defect(w, bj);
      if (!r.is_zero()) out.push_back(make_relation(std::move(r), RelKind::double_shuffle, w));
    }
  return out;
}

// zeta(w) = zeta(reverse-and-swap of w), one representative per orbit.
inline std::vector<Relation> derive_duality(int max_w) {
  if (max_w < 3) throw std::invalid_argument("derive_duality needs max_w >= 3");
  std::vector<Relation> out;
  for (int wt = 3; wt <= max_w; ++wt)
    for (const Word& w : all_words(Alphabet::X, wt)) {
      if (w.a.front() != 0 || w.a.back() != 1) continue;
      Word h = hat_dual(w);
      if (!lex_less(h, w)) continue;  // self-dual, or the orbit mate reports it
      out.push_back(make_relation(ConstPoly::zeta(w) - ConstPoly::zeta(h), RelKind::duality, w));
    }
  return out;
}

namespace detail {

inline int ipi_count(const ConstMonomial& m) {
  int k = 0;
  for (const ConstSymbol& s : m.syms)
    if (s.kind == SymKind::i_pi) ++k;
  return k;
}

inline ConstPoly strip_common_ipi(const ConstPoly& p) {
  int mn = -1;
  for (const auto& [m, c] : p.terms) {
    int k = ipi_count(m);
    if (mn < 0 || k < mn) mn = k;
  }
  if (mn <= 0) return p;
  ConstPoly out;
  for (const auto& [m, c] : p.terms) {
    std::vector<ConstSymbol> syms;
    int dropped = 0;
    for (const ConstSymbol& s : m.syms) {
      if (s.kind == SymKind::i_pi && dropped < mn) {
        ++dropped;
        continue;
      }
      syms.push_back(s);
    }
    out.add_term(ConstMonomial(std::move(syms)), c);
  }
  return out;
}

inline ConstPoly make_monic(const ConstPoly& p) {
  if (p.is_zero()) return p;
  return p * (Rational(1) / p.terms.rbegin()->second);
}

}  // namespace detail

// Coefficients of Z e^{i pi x0} rho(Z e^{i pi x0}) rho^2(Z e^{i pi x0}) = 1
// with rho the letter substitution for z -> 1 - 1/z. Each coefficient splits
// by parity of its i*pi power; nonzero parts, with the shared i*pi factor
// removed, are relations over Q[i pi]. The product is expanded one weight past
// the cutoff: stripping i*pi off an odd part lowers the weight by one, and the
// weight-3 Euler relation lives in the weight-4 coefficients.
inline std::vector<Relation> hexagon_check(int max_w) {
  if (max_w < 1 || max_w > 6) throw std::invalid_argument("hexagon cutoff must be in 1..6");
  int exp_w = max_w + 1;
  using CP = NCPoly<ConstPoly>;
  CP factor = build_Z(RegKind::shuffle, exp_w);
  CP e(Alphabet::X);
  e.add_term(Word{Alphabet::X, {0}}, ConstPoly::ipi());
  factor = concat_mul(factor, exp_trunc(e, exp_w), exp_w);

  CP h = factor;
  CP rot = apply_morphism(XMorphism::rho_1m1z, factor, exp_w);
  h = concat_mul(h, rot, exp_w);
  rot = apply_morphism(XMorphism::rho_1m1z, rot, exp_w);
  h = concat_mul(h, rot, exp_w);
  if (!(h.coeff(Word{Alphabet::X, {}}) == ConstPoly::one()))
    throw std::logic_error("hexagon product lost its unit term");

  std::vector<Relation> out;
  std::set<std::string> seen;
  for (int wt = 1; wt <= exp_w; ++wt)
    for (const Word& w : all_words(Alphabet::X, wt)) {
      ConstPoly c = h.coeff(w);
      if (c.is_zero()) continue;
      ConstPoly parts[2];
      for (const auto& [m, q] : c.terms) parts[detail::ipi_count(m) % 2].add_term(m, q);
      for (ConstPoly& part : parts) {
        if (part.is_zero()) continue;
        ConstPoly rel = detail::make_monic(detail::strip_common_ipi(part));
        if (rel.weight() > max_w) continue;
        if (seen.insert(rel.str()).second)
          out.push_back(make_relation(std::move(rel), RelKind::hexagon, w));
      }
    }
  return out;
}

// ---- per-weight elimination -------------------------------------------------

struct PivotEntry {
  ConstSymbol head;
  std::string provenance;
};

struct RelationTable {
  int max_weight = 0;
  RewriteMap rewrites;  // head symbol -> polynomial in irreducibles
  std::vector<ConstSymbol> irreducibles;
  std::vector<PivotEntry> certificate;                 // pivots in elimination order
  std::vector<std::pair<Word, bool>> duality_implied;  // source, already implied?

  bool operator==(const RelationTable& o) const {
    return max_weight == o.max_weight && rewrites == o.rewrites &&
           irreducibles == o.irreducibles;
  }
};

// Echelonizes weight by weight. Pivot choice: the lexicographically largest
// top-weight symbol over all remaining rows, so newly named constants get
// rewritten toward older ones. Deterministic for a fixed relation order.
inline RelationTable reduce_table(const std::vector<Relation>& rels) {
  RelationTable t;
  std::map<int, std::vector<const Relation*>> by_weight;
  for (const Relation& r : rels) {
    if (!r.poly.is_homogeneous() || r.poly.weight() != r.weight)
      throw std::invalid_argument("relation not homogeneous: " + r.provenance());
    t.max_weight = std::max(t.max_weight, r.weight);
    by_weight[r.weight].push_back(&r);
  }
  for (int wt = 2; wt <= t.max_weight; ++wt) {
    struct Row {
      ConstPoly poly;
      const Relation* src;
      bool used = false, implied = false;
    };
    std::vector<Row> rows;
    for (const Relation* r : by_weight[wt]) rows.push_back({lyndonize(r->poly), r, false, false});
    while (true) {
      Row* best = nullptr;
      ConstSymbol best_sym;
      for (Row& row : rows) {
        if (row.used) continue;
        row.poly = normalize(row.poly, t.rewrites);
        if (row.poly.is_zero()) {
          row.used = row.implied = true;
          continue;
        }
        // a top-weight symbol can only sit alone in a monomial; the map is
        // graded, so such monomials are the largest ones
        const ConstMonomial& top = row.poly.terms.rbegin()->first;
        if (top.syms.size() != 1 || top.syms[0].kind != SymKind::zeta ||
            top.syms[0].weight() != wt)
          continue;
        if (!best || best_sym < top.syms[0]) {
          best = &row;
          best_sym = top.syms[0];
        }
      }
      if (!best) break;
      Rational c = best->poly.coeff(ConstMonomial({best_sym}));
      t.rewrites.emplace(best_sym,
                         ConstPoly::symbol(best_sym) - best->poly * (Rational(1) / c));
      t.certificate.push_back({best_sym, best->src->provenance()});
      best->used = true;
    }
    for (Row& row : rows) {
      if (!row.used) {
        ConstPoly rest = normalize(row.poly, t.rewrites);
        if (!rest.is_zero())
          throw std::logic_error("inconsistent relation from " + row.src->provenance() + ": " +
                                 rest.str() + " = 0");
        row.implied = true;
      }
      if (row.src->kind == RelKind::duality)
        t.duality_implied.emplace_back(row.src->source, row.implied);
    }
    // composite convergent words get their definitional expansions; untouched
    // Lyndon symbols are irreducible at this weight
    for (const Word& w : all_words(Alphabet::Y, wt)) {
      if (w.a.front() < 2) continue;
      ConstSymbol s(w.a);
      if (t.rewrites.count(s)) continue;
      if (!is_lyndon(w))
        t.rewrites.emplace(s, normalize(zeta_stuffle_reg(w), t.rewrites));
      else
        t.irreducibles.push_back(s);
    }
  }
  for (auto& [head, rhs] : t.rewrites) rhs = normalize(rhs, t.rewrites);
  return t;
}

inline std::vector<int> irreducible_counts(const RelationTable& t) {
  std::vector<int> counts(static_cast<std::size_t>(std::max(t.max_weight + 1, 1)), 0);
  for (const ConstSymbol& s : t.irreducibles) ++counts[static_cast<std::size_t>(s.weight())];
  return counts;
}

// ---- kernel generators -------------------------------------------------------

// Pure-zeta polynomial back to a shuffle polynomial on X: each symbol to its
// word, each product to a shuffle.
inline QPoly shuffle_representative(const ConstPoly& p) {
  QPoly out(Alphabet::X);
  for (const auto& [m, c] : p.terms) {
    QPoly acc = QPoly::unit(Alphabet::X, c);
    for (const ConstSymbol& s : m.syms) {
      if (s.kind != SymKind::zeta)
        throw std::invalid_argument("no shuffle representative for " + s.str());
      acc = shuffle(acc, QPoly::from_word(*transcode(word_from_composition(s.comp)), Rational(1)));
    }
    out += acc;
  }
  return out;
}

// For each convergent Lyndon word, the difference between the word and the
// shuffle representative of its rewritten value: an explicit element of the
// kernel of evaluation. Irreducible generators give the zero polynomial.
inline std::vector<std::pair<Word, QPoly>> kernel_generators(const RelationTable& t, int max_w) {
  if (max_w < 3) throw std::invalid_argument("kernel_generators needs max_w >= 3");
  if (max_w > t.max_weight) throw std::invalid_argument("relation table is too shallow");
  std::vector<std::pair<Word, QPoly>> out;
  for (const Word& l : lyndon_generate(Alphabet::Y, max_w)) {
    if (l.weight() < 2 || l.a.front() < 2) continue;
    ConstPoly val = normalize(ConstPoly::zeta(l), t.rewrites);
    QPoly q = QPoly::from_word(*transcode(l), Rational(1)) - shuffle_representative(val);
    out.emplace_back(l, std::move(q));
  }
  return out;
}

inline std::vector<std::pair<Word, QPoly>> kernel_generators(int max_w) {
  return kernel_generators(reduce_table(derive_double_shuffle(max_w)), max_w);
}

// ---- associator perturbation --------------------------------------------------

struct PerturbedPair {
  NCPoly<ConstPoly> phi;  // X series, shuffle group-like
  NCPoly<ConstPoly> psi;  // Y series, quasi-shuffle group-like
  std::vector<std::pair<Word, ConstPoly>> coordinates;  // factorization coefficients
};

// phi = Z_shuffle e^C for a proper Lie perturbation C, psi the matching
// quasi-shuffle character built with phi's own depth-one coordinates in B'.
inline PerturbedPair associator_perturb(const QPoly& c_series, int max_w) {
  if (c_series.alph != Alphabet::X)
    throw std::invalid_argument("perturbation must be an X series");
  if (max_w < 2) throw std::invalid_argument("associator cutoff must be >= 2");
  QPoly c = truncate(c_series, max_w);
  if (c.coeff(Word{Alphabet::X, {}}) != 0)
    throw std::invalid_argument("perturbation must have no constant term");
  if (c.coeff(Word{Alphabet::X, {0}}) != 0 || c.coeff(Word{Alphabet::X, {1}}) != 0)
    throw std::invalid_argument("perturbation must vanish in weight 1");
  if (grouplike_defect(exp_trunc(c, max_w), Prod::shuffle, max_w))
    throw std::invalid_argument("perturbation is not primitive at the cutoff");

  NCPoly<ConstPoly> ec = exp_trunc(
      convert_coeffs<ConstPoly, Rational>(
          c, [](const Rational& q) { return ConstPoly::constant(q); }),
      max_w);
  NCPoly<ConstPoly> phi = concat_mul(build_Z(RegKind::shuffle, max_w), ec, max_w);

  DualBasis xb(Alphabet::X, Prod::shuffle, max_w);
  auto coords = mrs_factorize(phi, Prod::shuffle, xb, max_w);

  NCPoly<ConstPoly> arg(Alphabet::Y);
  for (int k = 2; k <= max_w; ++k) {
    std::vector<std::uint32_t> xw(static_cast<std::size_t>(k), 0);
    xw.back() = 1;
    ConstPoly zk = phi.coeff(Word{Alphabet::X, xw});
    if (zk.is_zero()) continue;
    arg.add_term(Word{Alphabet::Y, std::vector<std::uint32_t>(static_cast<std::size_t>(k), 1)},
                 zk * (Rational((k % 2) ? 1 : -1) / k));
  }
  NCPoly<ConstPoly> psi = concat_mul(exp_trunc(arg, max_w), pi_Y(phi), max_w);
  return {std::move(phi), std::move(psi), std::move(coords)};
}

namespace detail {
inline ConstPoly lyndon_eval(const LyndonPoly& q, const NCPoly<ConstPoly>& s) {
  ConstPoly out;
  for (const auto& [m, c] : q.terms) {
    ConstPoly acc = ConstPoly::constant(c);
    for (const Word& l : m) acc = acc * s.coeff(l);
    out += acc;
  }
  return out;
}
}  // namespace detail

// Character values of the pair on the shared symbol universe, for mapping
// relation polynomials through the perturbation.
inline std::map<ConstSymbol, ConstPoly> coordinate_images(const PerturbedPair& pr, int max_w) {
  std::map<ConstSymbol, ConstPoly> img;
  for (const Word& l : lyndon_generate(Alphabet::X, max_w)) {
    if (l.size() < 2) continue;  // x0, x1 carry no symbol
    img.emplace(zeta_symbol(l), pr.phi.coeff(l));
  }
  return img;
}

// Re-derives the relation set from the perturbed pair. phi is certified as an
// exact shuffle character; psi is only a quasi-shuffle character modulo the
// relations, and its group-like defect at each word must be the image of the
// abstract relation under the pair's coordinates. The abstract preimages are
// returned, so the set matches the unperturbed derivation for any admissible
// perturbation.
inline std::vector<Relation> derive_from_pair(const PerturbedPair& pr, int max_w) {
  if (max_w < 2) throw std::invalid_argument("derive_from_pair needs max_w >= 2");
  for (int wt = 1; wt <= max_w; ++wt)
    for (const Word& w : all_words(Alphabet::X, wt)) {
      LyndonPoly lp = radford_decompose(Prod::shuffle, QPoly::from_word(w, Rational(1)));
      if (!(detail::lyndon_eval(lp, pr.phi) == pr.phi.coeff(w)))
        throw std::logic_error("phi is not a shuffle character at " + w.str());
    }
  std::map<ConstSymbol, ConstPoly> img = coordinate_images(pr, max_w);
  std::vector<ConstPoly> bj = detail::bprime_coeffs(max_w);
  std::vector<Relation> out;
  for (int wt = 2; wt <= max_w; ++wt)
    for (const Word& w : all_words(Alphabet::Y, wt)) {
      LyndonPoly lp = radford_decompose(Prod::stuffle, QPoly::from_word(w, Rational(1)));
      ConstPoly defect = detail::lyndon_eval(lp, pr.psi) - pr.psi.coeff(w);
      ConstPoly r = detail::double_shuffle_defect(w, bj);
      if (!(substitute(r, img) == defect))
        throw std::logic_error("pair defect does not match the relation image at " + w.str());
      if (!r.is_zero()) out.push_back(make_relation(std::move(r), RelKind::double_shuffle, w));
    }
  return out;
}

// ---- adjoint regrading ---------------------------------------------------------

inline QPoly ad_word(int l) {
  QPoly a = QPoly::from_word(Word{Alphabet::X, {1}}, Rational(1));
  QPoly x0 = QPoly::from_word(Word{Alphabet::X, {0}}, Rational(1));
  for (int i = 0; i < l; ++i) a = concat_mul(x0, a, l + 1) - concat_mul(a, x0, l + 1);
  return a;
}

inline QPoly ad_product(const std::vector<std::uint32_t>& tuple) {
  QPoly out = QPoly::unit(Alphabet::X, Rational(1));
  int cap = 0;
  for (std::uint32_t m : tuple) cap += static_cast<int>(m) + 1;
  for (std::uint32_t m : tuple) out = concat_mul(out, ad_word(static_cast<int>(m)), cap);
  return out;
}

struct AdjointTerm {
  std::vector<std::uint32_t> tuple;  // (l_1..l_k) for ad^{l_1} x1 ... ad^{l_k} x1
  ConstPoly coeff;
};

// Z_shuffle regraded over products of ad^l_{x0} x1. The coefficient of a tuple
// is the regularized value of the fold U <- (x0^{l_j} shuffle U) x1, the mirror
// of reading the tuple as nested right-augmentations.
inline std::vector<AdjointTerm> adjoint_expansion(int max_w) {
  if (max_w < 2) throw std::invalid_argument("adjoint_expansion needs max_w >= 2");
  std::vector<AdjointTerm> out;
  out.push_back({{}, ConstPoly::one()});
  for (int n = 1; n <= max_w; ++n)
    for (const Word& parts : all_words(Alphabet::Y, n)) {  // compositions of n
      std::vector<std::uint32_t> tuple;
      for (std::uint32_t p : parts.a) tuple.push_back(p - 1);
      QPoly u = QPoly::unit(Alphabet::X, Rational(1));
      for (std::uint32_t m : tuple) {
        Word x0s{Alphabet::X, std::vector<std::uint32_t>(static_cast<std::size_t>(m), 0)};
        QPoly sh = shuffle(QPoly::from_word(x0s, Rational(1)), u);
        QPoly next(Alphabet::X);
        for (const auto& [v, c] : sh.terms) {
          Word vx = v;
          vx.a.push_back(1);
          next.add_term(vx, c);
        }
        u = std::move(next);
      }
      out.push_back({std::move(tuple), zeta_shuffle_reg(u)});
    }
  return out;
}

// ---- export ---------------------------------------------------------------------

inline nlohmann::json table_to_json(const RelationTable& t) {
  std::map<std::string, std::string> prov;
  for (const PivotEntry& p : t.certificate) prov[p.head.str()] = p.provenance;
  nlohmann::json weights = nlohmann::json::array();
  for (int wt = 2; wt <= t.max_weight; ++wt) {
    nlohmann::json rewrites = nlohmann::json::array();
    for (const auto& [head, rhs] : t.rewrites) {
      if (head.weight() != wt) continue;
      auto it = prov.find(head.str());
      rewrites.push_back({{"head", head.str()},
                          {"rhs", rhs.str()},
                          {"provenance",
                           it != prov.end() ? it->second
                                            : "quasi_shuffle(" +
                                                  word_from_composition(head.comp).str() + ")"}});
    }
    nlohmann::json irr = nlohmann::json::array();
    for (const ConstSymbol& s : t.irreducibles)
      if (s.weight() == wt) irr.push_back(s.str());
    weights.push_back({{"weight", wt}, {"rewrites", rewrites}, {"irreducibles", irr}});
  }
  return {{"max_weight", t.max_weight}, {"weights", weights}};
}

inline std::string table_to_markdown(const RelationTable& t) {
  std::string md = "# Polyzeta relation table\n";
  for (int wt = 2; wt <= t.max_weight; ++wt) {
    md += "\n## Weight " + std::to_string(wt) + "\n\nIrreducible: ";
    bool any = false;
    for (const ConstSymbol& s : t.irreducibles)
      if (s.weight() == wt) {
        md += (any ? ", " : "") + s.str();
        any = true;
      }
    md += any ? "\n" : "none\n";
    bool header = false;
    for (const auto& [head, rhs] : t.rewrites) {
      if (head.weight() != wt) continue;
      if (!header) {
        md += "\n| head | rewrites to |\n|---|---|\n";
        header = true;
      }
      md += "| " + head.str() + " | " + rhs.str() + " |\n";
    }
  }
  return md;
}

}  // namespace mzv
