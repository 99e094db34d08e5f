// Certified evaluation: polyzetas by path splitting, relation residuals, and
// the finite part of a divergent harmonic sum.
#include <cstdio>
#include <string>

#include "mzv/numerics.hpp"
#include "mzv/relations.hpp"

using namespace mzv;

namespace {
void show(const char* name, const BigReal& v, unsigned digits) {
  std::printf("  %-10s = %s  (bound %.1e)\n", name, v.value.str(digits, std::ios_base::fixed).c_str(),
              v.bound);
}
}  // namespace

int main() {
  EvalContext ctx(40);
  std::printf("polyzetas at %u digits:\n", ctx.digits);
  show("zeta(2)", zeta_value({2}, ctx), ctx.digits);
  show("zeta(3)", zeta_value({3}, ctx), ctx.digits);
  show("zeta(2,1)", zeta_value({2, 1}, ctx), ctx.digits);

  std::printf("\nresiduals of derived relations at weight <= 4:\n");
  for (const Relation& r : derive_double_shuffle(4)) {
    auto [ok, resid] = check_vanishes(r.poly, ctx, 1e-25);
    std::printf("  %-28s %s  residual %.1e\n", r.provenance().c_str(), ok ? "ok" : "FAIL",
                std::fabs(resid.approx()));
  }

  std::printf("\nEuler via the hexagon: zeta(2) + (i pi)^2/6 = 0\n");
  BigReal pi2 = pi_const(ctx) * pi_const(ctx) * ctx.from_rational(Rational(1, 6));
  std::printf("  |zeta(2) - pi^2/6| = %.1e\n",
              std::fabs((zeta_value({2}, ctx).value - pi2.value).convert_to<double>()));

  std::printf("\nfinite part of the divergent sum H_{y1y2}(N):\n");
  Word w = parse_word("y1y2", Alphabet::Y);
  StdEvaluator ev{&ctx};
  auto [re, im] = eval_numeric<BigReal>(gamma_reg(w), ev);
  (void)im;
  BigReal est = finite_part_estimate(w, 100000, ctx);
  std::printf("  gamma_reg(y1y2) = %s\n", gamma_reg(w).str().c_str());
  show("symbolic", re, 20);
  show("N=1e5", est, 20);
  std::printf("  difference %.1e\n", std::fabs((re.value - est.value).convert_to<double>()));
  return 0;
}
