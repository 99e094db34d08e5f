#include <catch2/catch_amalgamated.hpp>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "mzv/numerics.hpp"
#include "mzv/relations.hpp"

using namespace mzv;

namespace {

ConstPoly z(std::vector<std::uint32_t> comp) { return ConstPoly::zeta(std::move(comp)); }

const Relation* find_source(const std::vector<Relation>& rels, const std::string& word) {
  Word w = parse_word(word);
  for (const Relation& r : rels)
    if (r.source == w) return &r;
  return nullptr;
}

// monomial count of the free commutative algebra on the table's irreducibles,
// graded by weight
std::vector<int> algebra_dims(const RelationTable& t) {
  std::vector<int> dims(static_cast<std::size_t>(t.max_weight) + 1, 0);
  dims[0] = 1;
  for (const ConstSymbol& s : t.irreducibles) {
    int w = s.weight();
    for (int k = w; k <= t.max_weight; ++k) dims[static_cast<std::size_t>(k)] +=
        dims[static_cast<std::size_t>(k - w)];
  }
  return dims;
}

}  // namespace

TEST_CASE("double shuffle derivation matches the classical identities") {
  CHECK(derive_double_shuffle(2).empty());

  auto r3 = derive_double_shuffle(3);
  REQUIRE(r3.size() == 1);
  CHECK(r3[0].poly == z({2, 1}) - z({3}));
  CHECK(r3[0].weight == 3);
  CHECK(r3[0].kind == RelKind::double_shuffle);
  CHECK(r3[0].provenance() == "double_shuffle(y1y2)");

  auto r4 = derive_double_shuffle(4);
  REQUIRE(r4.size() == 5);
  const Relation* rr = find_source(r4, "y2y2");
  REQUIRE(rr);
  CHECK(rr->poly == Rational(2) * z({3, 1}) - Rational(1, 2) * z({4}));
  rr = find_source(r4, "y1y3");
  REQUIRE(rr);
  CHECK(rr->poly == Rational(1, 2) * z({2}) * z({2}) - z({3, 1}) - z({4}));
  rr = find_source(r4, "y1y1y2");
  REQUIRE(rr);
  CHECK(rr->poly ==
        Rational(-2) * z({2, 1, 1}) + z({3, 1}) + Rational(1, 2) * z({4}) +
            Rational(1, 2) * z({2}) * z({2}));

  for (const Relation& r : derive_double_shuffle(6)) {
    CHECK(r.poly.is_homogeneous());
    CHECK(r.poly.weight() == r.weight);
    CHECK(r.source.alph == Alphabet::Y);
  }
  CHECK(derive_double_shuffle(6).size() == 36);

  CHECK_THROWS_AS(derive_double_shuffle(1), std::invalid_argument);
}

TEST_CASE("relation construction rejects degenerate input") {
  CHECK_THROWS_AS(make_relation(ConstPoly(), RelKind::double_shuffle, parse_word("y2")),
                  std::logic_error);
  CHECK_THROWS_AS(make_relation(z({2}) + z({3}), RelKind::double_shuffle, parse_word("y2")),
                  std::logic_error);
  CHECK_THROWS_AS(make_relation(ConstPoly::one(), RelKind::double_shuffle, parse_word("y2")),
                  std::logic_error);
}

TEST_CASE("reduction reproduces the classical rewrite table") {
  auto t3 = reduce_table(derive_double_shuffle(3));
  REQUIRE(t3.rewrites.size() == 1);
  CHECK(t3.rewrites.at(ConstSymbol({2, 1})) == z({3}));
  REQUIRE(t3.certificate.size() == 1);
  CHECK(t3.certificate[0].head == ConstSymbol({2, 1}));
  CHECK(t3.certificate[0].provenance == "double_shuffle(y1y2)");
  CHECK(t3.irreducibles == std::vector<ConstSymbol>{ConstSymbol({2}), ConstSymbol({3})});

  auto t4 = reduce_table(derive_double_shuffle(4));
  ConstPoly z2sq = z({2}) * z({2});
  CHECK(t4.rewrites.at(ConstSymbol({4})) == Rational(2, 5) * z2sq);
  CHECK(t4.rewrites.at(ConstSymbol({3, 1})) == Rational(1, 10) * z2sq);
  CHECK(t4.rewrites.at(ConstSymbol({2, 2})) == Rational(3, 10) * z2sq);
  CHECK(t4.rewrites.at(ConstSymbol({2, 1, 1})) == Rational(2, 5) * z2sq);
  CHECK(t4.rewrites.size() == 5);
  for (const ConstSymbol& s : t4.irreducibles) CHECK(s.weight() < 4);

  CHECK(normalize(z({2, 2}), t4.rewrites) == Rational(3, 10) * z2sq);
  CHECK(normalize(z({2, 1}) * z({2}) - z({3}) * z({2}), t4.rewrites).is_zero());
}

TEST_CASE("irreducible generators through weight eight") {
  auto t8 = reduce_table(derive_double_shuffle(8));
  CHECK(irreducible_counts(t8) == std::vector<int>{0, 0, 1, 1, 0, 1, 0, 1, 1});

  std::set<std::string> names;
  for (const ConstSymbol& s : t8.irreducibles) names.insert(s.str());
  CHECK(names == std::set<std::string>{"z(2)", "z(3)", "z(5)", "z(7)", "z(6,2)"});

  // dimensions of the quotient algebra follow d_w = d_{w-2} + d_{w-3}
  auto dims = algebra_dims(t8);
  std::vector<int> expect{1, 0, 1, 1, 1, 2, 2, 3, 4};
  CHECK(dims == expect);
  for (int w = 5; w <= 8; ++w)
    CHECK(dims[static_cast<std::size_t>(w)] ==
          dims[static_cast<std::size_t>(w - 2)] + dims[static_cast<std::size_t>(w - 3)]);

  // every rewrite lands in the span of irreducible symbols
  std::set<ConstSymbol> irr(t8.irreducibles.begin(), t8.irreducibles.end());
  for (const auto& [head, rhs] : t8.rewrites) {
    CHECK_FALSE(irr.count(head));
    for (const auto& [m, c] : rhs.terms)
      for (const ConstSymbol& s : m.syms) CHECK(irr.count(s) == 1);
  }

  // every convergent word of weight <= 8 has a normal form
  for (int wt = 2; wt <= 8; ++wt)
    for (const Word& w : all_words(Alphabet::Y, wt)) {
      if (w.a.front() < 2) continue;
      ConstPoly nf = normalize(ConstPoly::zeta(w.a), t8.rewrites);
      for (const auto& [m, c] : nf.terms)
        for (const ConstSymbol& s : m.syms) CHECK(irr.count(s) == 1);
    }
}

TEST_CASE("reduction is idempotent") {
  auto t6 = reduce_table(derive_double_shuffle(6));
  std::vector<Relation> again;
  for (const auto& [head, rhs] : t6.rewrites)
    again.push_back(
        make_relation(ConstPoly::symbol(head) - rhs, RelKind::double_shuffle, parse_word("y2")));
  auto t6b = reduce_table(again);
  CHECK(t6b == t6);
}

TEST_CASE("inconsistent systems are rejected with their provenance") {
  auto rels = derive_double_shuffle(4);
  rels.push_back(make_relation(z({2}) * z({2}), RelKind::double_shuffle, parse_word("y4")));
  try {
    reduce_table(rels);
    FAIL("expected reduce_table to throw");
  } catch (const std::logic_error& e) {
    CHECK(std::string(e.what()).find("double_shuffle(y4)") != std::string::npos);
  }
}

TEST_CASE("hexagon relations recover the Euler identities") {
  CHECK(hexagon_check(1).empty());

  auto h2 = hexagon_check(2);
  REQUIRE(h2.size() == 1);
  ConstPoly euler2 = z({2}) + Rational(1, 6) * ConstPoly::ipi() * ConstPoly::ipi();
  CHECK(h2[0].poly == euler2);
  CHECK(h2[0].weight == 2);
  CHECK(h2[0].kind == RelKind::hexagon);
  CHECK(h2[0].provenance() == "hexagon(x0x1)");

  auto h3 = hexagon_check(3);
  REQUIRE(h3.size() == 2);
  CHECK(h3[0].poly == euler2);
  CHECK(h3[1].poly == z({2, 1}) - z({3}));
  CHECK(h3[1].weight == 3);
  CHECK(h3[1].source == parse_word("x0x0x0x1"));

  for (const Relation& r : hexagon_check(4)) {
    CHECK(r.weight <= 4);
    CHECK(r.poly.is_homogeneous());
  }

  CHECK_THROWS_AS(hexagon_check(0), std::invalid_argument);
  CHECK_THROWS_AS(hexagon_check(7), std::invalid_argument);
}

TEST_CASE("hexagon output reduces to zero once z(2) is tied to i pi") {
  auto rels = derive_double_shuffle(4);
  auto hex = hexagon_check(4);
  rels.insert(rels.end(), hex.begin(), hex.end());
  auto t = reduce_table(rels);
  ConstPoly z2img = Rational(-1, 6) * ConstPoly::ipi() * ConstPoly::ipi();
  CHECK(t.rewrites.at(ConstSymbol({2})) == z2img);
  for (const Relation& r : hex) CHECK(normalize(r.poly, t.rewrites).is_zero());
}

TEST_CASE("duality lists one representative per mirror pair") {
  auto d4 = derive_duality(4);
  REQUIRE(d4.size() == 2);
  CHECK(d4[0].poly == z({2, 1}) - z({3}));
  CHECK(d4[0].provenance() == "duality(x0x1x1)");
  CHECK(d4[1].poly == z({2, 1, 1}) - z({4}));
  CHECK(d4[1].provenance() == "duality(x0x1x1x1)");

  auto d6 = derive_duality(6);
  CHECK(d6.size() == 12);
  std::set<Word> sources;
  for (const Relation& r : d6) {
    const Word& w = r.source;
    Word h = hat_dual(w);
    CHECK(w.alph == Alphabet::X);
    CHECK(w.a.front() == 0);
    CHECK(w.a.back() == 1);
    CHECK(lex_less(h, w));
    CHECK(r.poly == ConstPoly::zeta(w) - ConstPoly::zeta(h));
    CHECK(r.weight == w.weight());
    sources.insert(w);
  }
  // orbit coverage: each non-self-dual convergent word appears on exactly one side
  for (int wt = 3; wt <= 6; ++wt)
    for (const Word& w : all_words(Alphabet::X, wt)) {
      if (w.a.front() != 0 || w.a.back() != 1) continue;
      Word h = hat_dual(w);
      if (h == w) continue;
      CHECK(sources.count(w) + sources.count(h) == 1);
    }

  CHECK_THROWS_AS(derive_duality(2), std::invalid_argument);
}

TEST_CASE("duality is implied by double shuffle through weight six") {
  auto rels = derive_double_shuffle(6);
  auto dual = derive_duality(6);
  rels.insert(rels.end(), dual.begin(), dual.end());
  auto mixed = reduce_table(rels);
  REQUIRE(mixed.duality_implied.size() == 12);
  for (const auto& [w, implied] : mixed.duality_implied) CHECK(implied);
  CHECK(mixed == reduce_table(derive_double_shuffle(6)));
}

TEST_CASE("kernel generators vanish under the regularized map") {
  auto kg = kernel_generators(4);
  REQUIRE(kg.size() == 6);
  CHECK(kg[0].first == parse_word("y2"));
  CHECK(kg[0].second.is_zero());
  QPoly euler = QPoly::from_word(parse_word("x0x1x1"), Rational(1)) -
                QPoly::from_word(parse_word("x0x0x1"), Rational(1));
  CHECK(kg[2].first == parse_word("y2y1"));
  CHECK(kg[2].second == euler);
  CHECK(zeta_shuffle_reg(euler) == z({2, 1}) - z({3}));

  auto t5 = reduce_table(derive_double_shuffle(5));
  for (const auto& [l, q] : kernel_generators(5)) {
    CHECK(is_lyndon(transcode(l).value_or(l)));
    CHECK(normalize(zeta_shuffle_reg(q), t5.rewrites).is_zero());
  }
  CHECK(kernel_generators(5).size() == 12);

  // the table overload agrees when handed a deeper table
  auto t8 = reduce_table(derive_double_shuffle(8));
  auto via_deep = kernel_generators(t8, 4);
  REQUIRE(via_deep.size() == kg.size());
  for (std::size_t i = 0; i < kg.size(); ++i) {
    CHECK(via_deep[i].first == kg[i].first);
    CHECK(via_deep[i].second == kg[i].second);
  }

  CHECK_THROWS_AS(kernel_generators(2), std::invalid_argument);
}

TEST_CASE("unperturbed pair reproduces the bare derivation") {
  auto pr = associator_perturb(QPoly(Alphabet::X), 4);
  for (const auto& [l, c] : pr.coordinates) {
    if (l.size() < 2) {
      CHECK(c.is_zero());
      continue;
    }
    if (l.weight() > 4) continue;
    CHECK(c == ConstPoly::zeta(l));
  }
  CHECK(pr.psi.coeff(parse_word("y2y1")) == z({2, 1}));

  auto rels = derive_from_pair(pr, 4);
  auto bare = derive_double_shuffle(4);
  REQUIRE(rels.size() == bare.size());
  for (std::size_t i = 0; i < rels.size(); ++i) {
    CHECK(rels[i].poly == bare[i].poly);
    CHECK(rels[i].source == bare[i].source);
  }
}

TEST_CASE("a Lie perturbation moves the coordinates but not the relations") {
  QPoly c = lyndon_bracket(parse_word("x0x1")) * Rational(1, 3);
  auto pr = associator_perturb(c, 4);

  ConstPoly shifted = z({2}) + ConstPoly::constant(Rational(1, 3));
  bool saw = false;
  for (const auto& [l, cc] : pr.coordinates)
    if (l == parse_word("x0x1")) {
      CHECK(cc == shifted);
      saw = true;
    }
  CHECK(saw);
  CHECK(pr.phi.coeff(parse_word("x0x0x1")) == z({3}));
  CHECK(pr.psi.coeff(parse_word("y2")) == shifted);
  CHECK(pr.psi.coeff(parse_word("y1y1")) ==
        Rational(-1, 2) * z({2}) - ConstPoly::constant(Rational(1, 6)));

  auto img = coordinate_images(pr, 4);
  CHECK(substitute(z({2}), img) == shifted);
  CHECK(substitute(z({3}), img) == z({3}));

  auto rels = derive_from_pair(pr, 4);
  auto bare = derive_double_shuffle(4);
  REQUIRE(rels.size() == bare.size());
  for (std::size_t i = 0; i < rels.size(); ++i) CHECK(rels[i].poly == bare[i].poly);
  CHECK(reduce_table(rels) == reduce_table(bare));

  // the factorization itself reassembles phi
  DualBasis xb(Alphabet::X, Prod::shuffle, 4);
  auto back = mrs_reconstruct(pr.coordinates, xb, 4);
  for (int wt = 0; wt <= 4; ++wt)
    for (const Word& w : all_words(Alphabet::X, wt)) CHECK(back.coeff(w) == pr.phi.coeff(w));
}

TEST_CASE("random Lie perturbations leave the table invariant") {
  auto lyndon = lyndon_generate(Alphabet::X, 5);
  auto t5 = reduce_table(derive_double_shuffle(5));
  std::mt19937 gen(20260814u);
  std::uniform_int_distribution<int> num(-3, 3), den(1, 4);
  for (int trial = 0; trial < 5; ++trial) {
    QPoly c(Alphabet::X);
    for (const Word& l : lyndon) {
      if (l.size() < 2) continue;
      Rational q(num(gen), den(gen));
      if (q != 0) c += lyndon_bracket(l) * q;
    }
    auto pr = associator_perturb(c, 5);
    auto table = reduce_table(derive_from_pair(pr, 5));
    CHECK(table == t5);
  }
}

TEST_CASE("perturbation preconditions") {
  CHECK_THROWS_AS(associator_perturb(QPoly(Alphabet::Y), 4), std::invalid_argument);
  CHECK_THROWS_AS(associator_perturb(QPoly(Alphabet::X), 1), std::invalid_argument);
  CHECK_THROWS_AS(associator_perturb(QPoly::unit(Alphabet::X, Rational(1)), 4),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      associator_perturb(QPoly::from_word(Word{Alphabet::X, {0}}, Rational(1)), 4),
      std::invalid_argument);
  CHECK_THROWS_AS(associator_perturb(QPoly::from_word(parse_word("x0x1"), Rational(1)), 4),
                  std::invalid_argument);

  // tampering with either side of a valid pair trips the certificate
  auto pr = associator_perturb(QPoly(Alphabet::X), 3);
  PerturbedPair bad_psi = pr;
  bad_psi.psi.add_term(parse_word("y2"), ConstPoly::one());
  CHECK_THROWS_AS(derive_from_pair(bad_psi, 3), std::logic_error);
  PerturbedPair bad_phi = pr;
  bad_phi.phi.add_term(parse_word("x0x1"), ConstPoly::one());
  CHECK_THROWS_AS(derive_from_pair(bad_phi, 3), std::logic_error);
}

TEST_CASE("iterated bracket words") {
  QPoly x1 = QPoly::from_word(Word{Alphabet::X, {1}}, Rational(1));
  CHECK(ad_word(0) == x1);
  QPoly a1(Alphabet::X);
  a1.add_term(parse_word("x0x1"), Rational(1));
  a1.add_term(parse_word("x1x0"), Rational(-1));
  CHECK(ad_word(1) == a1);
  QPoly a2(Alphabet::X);
  a2.add_term(parse_word("x0x0x1"), Rational(1));
  a2.add_term(parse_word("x0x1x0"), Rational(-2));
  a2.add_term(parse_word("x1x0x0"), Rational(1));
  CHECK(ad_word(2) == a2);
}

TEST_CASE("adjoint regrading of the shuffle series") {
  auto terms = adjoint_expansion(3);
  CHECK(terms.size() == 8);
  auto coeff_of = [&](std::vector<std::uint32_t> tuple) -> const ConstPoly& {
    for (const AdjointTerm& t : terms)
      if (t.tuple == tuple) return t.coeff;
    static ConstPoly missing = ConstPoly::constant(Rational(77));
    return missing;
  };
  CHECK(coeff_of({}) == ConstPoly::one());
  CHECK(coeff_of({0}).is_zero());
  CHECK(coeff_of({1}) == z({2}));
  CHECK(coeff_of({2}) == z({3}));
  CHECK(coeff_of({1, 0}) == z({2, 1}));
  CHECK(coeff_of({0, 1}) == Rational(-1) * z({2, 1}));

  // summing coeff * ad^{l_1}(x1) ... ad^{l_k}(x1) regrades back to Z_shuffle
  const int W = 5;
  NCPoly<ConstPoly> acc(Alphabet::X);
  for (const AdjointTerm& t : adjoint_expansion(W)) {
    QPoly m = ad_product(t.tuple);
    for (const auto& [w, q] : m.terms)
      if (w.weight() <= W) acc.add_term(w, t.coeff * q);
  }
  auto zs = build_Z(RegKind::shuffle, W);
  for (int wt = 0; wt <= W; ++wt)
    for (const Word& w : all_words(Alphabet::X, wt)) CHECK(acc.coeff(w) == zs.coeff(w));

  CHECK_THROWS_AS(adjoint_expansion(1), std::invalid_argument);
}

TEST_CASE("every derived relation verifies numerically at forty digits") {
  EvalContext ctx(40);
  std::vector<Relation> rels = derive_double_shuffle(6);
  auto dual = derive_duality(6);
  auto hex = hexagon_check(6);
  rels.insert(rels.end(), dual.begin(), dual.end());
  rels.insert(rels.end(), hex.begin(), hex.end());
  int failures = 0;
  for (const Relation& r : rels) {
    auto [ok, residual] = check_vanishes(r.poly, ctx, 1e-25);
    if (!ok) {
      ++failures;
      UNSCOPED_INFO(r.provenance() << " residual " << residual.value);
    }
  }
  CHECK(failures == 0);
  CHECK(rels.size() >= 50);
}

TEST_CASE("the two generating series agree word by word modulo the table") {
  const int W = 6;
  auto t = reduce_table(derive_double_shuffle(W));
  auto lhs = build_Z(RegKind::stuffle, W);
  auto rhs = concat_mul(bprime_series(W), pi_Y(build_Z(RegKind::shuffle, W)), W);
  for (int wt = 0; wt <= W; ++wt)
    for (const Word& w : all_words(Alphabet::Y, wt)) {
      ConstPoly diff = lhs.coeff(w) - rhs.coeff(w);
      CHECK(normalize(diff, t.rewrites).is_zero());
    }
}

TEST_CASE("generalized Euler constants agree with the closed form modulo the table") {
  auto t8 = reduce_table(derive_double_shuffle(8));
  CHECK(gamma_closed_form(0, parse_word("x0x1x1")) == zeta_shuffle_reg(parse_word("x0x1x1")));
  int pairs = 0;
  for (int wt = 2; wt <= 4; ++wt)
    for (const Word& w : all_words(Alphabet::X, wt)) {
      if (w.a.front() != 0 || w.a.back() != 1) continue;
      auto y = transcode(w);
      REQUIRE(y.has_value());
      if (y->size() > 2) continue;
      for (int k = 0; k <= 3; ++k) {
        Word full{Alphabet::X, {}};
        full.a.assign(static_cast<std::size_t>(k), 1);
        full.a.insert(full.a.end(), w.a.begin(), w.a.end());
        ConstPoly diff = gamma_closed_form(k, w) - gamma_reg(*transcode(full));
        CHECK(normalize(diff, t8.rewrites).is_zero());
        ++pairs;
      }
    }
  CHECK(pairs == 24);
}

TEST_CASE("table exports are deterministic") {
  auto t4 = reduce_table(derive_double_shuffle(4));
  auto j = table_to_json(t4);
  CHECK(j["max_weight"] == 4);
  REQUIRE(j["weights"].size() == 3);
  CHECK(j["weights"][1]["weight"] == 3);
  CHECK(j["weights"][1]["rewrites"][0]["head"] == "z(2,1)");
  CHECK(j["weights"][1]["rewrites"][0]["rhs"] == "z(3)");
  CHECK(j["weights"][1]["rewrites"][0]["provenance"] == "double_shuffle(y1y2)");
  bool saw_def = false;
  for (const auto& e : j["weights"][2]["rewrites"])
    if (e["head"] == "z(2,2)") {
      CHECK(e["provenance"] == "quasi_shuffle(y2y2)");
      saw_def = true;
    }
  CHECK(saw_def);

  auto again = table_to_json(reduce_table(derive_double_shuffle(4)));
  CHECK(j.dump() == again.dump());

  std::string md = table_to_markdown(t4);
  CHECK(md.find("## Weight 3") != std::string::npos);
  CHECK(md.find("| z(2,1) | z(3) |") != std::string::npos);
  CHECK(md == table_to_markdown(t4));
}
