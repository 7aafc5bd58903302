#include <catch2/catch_amalgamated.hpp>

#include "recurlab/coupling.hpp"
#include "recurlab/random_systems.hpp"
#include "recurlab/weights.hpp"
#include "test_support.hpp"

using namespace recurlab;

namespace {

// Three trivial actions on three points; the coupling must sit on the diagonal.
FiniteMPS three_point_trivial() {
  auto G = FiniteGroup::cyclic(2);
  std::vector<int> id = {0, 1, 2};
  Action triv = {id, id};
  return FiniteMPS(G, {"a", "b", "c"}, {rat_of(1, 2), rat_of(1, 4), rat_of(1, 4)},
                   {triv, triv, triv});
}

// Z/2 acting on two points: T1 swaps, T2 and T3 fix.  Small enough to work
// out every coupling quantity by hand.
FiniteMPS two_point_first_swap() {
  auto G = FiniteGroup::cyclic(2);
  Action swp = {{0, 1}, {1, 0}};
  Action triv = {{0, 1}, {0, 1}};
  return FiniteMPS(G, {"a", "b"}, {rat_of(1, 2), rat_of(1, 2)}, {swp, triv, triv});
}

}  // namespace

TEST_CASE("coupling of trivial actions concentrates on the diagonal") {
  FiniteMPS X = three_point_trivial();
  CoupledSystem C(X);
  REQUIRE(C.measure().size() == 3);
  REQUIRE(C.mass({0, 0, 0}) == rat_of(1, 2));
  REQUIRE(C.mass({1, 1, 1}) == rat_of(1, 4));
  REQUIRE(C.mass({2, 2, 2}) == rat_of(1, 4));
  REQUIRE(C.mass({0, 1, 1}) == 0);

  // the triple integral of indicators degenerates to the triple intersection
  Observable a0 = indicator(X, {0, 1});
  Observable a1 = indicator(X, {1, 2});
  Observable a2 = indicator(X, {1, 2});
  REQUIRE(C.integral(a0, a1, a2) == rat_of(1, 4));
  REQUIRE(C.direct_average(a0, a1, a2) == rat_of(1, 4));
  REQUIRE(verify_coupling(C).ok());
}

TEST_CASE("coupling requires three commuting actions") {
  REQUIRE_THROWS_AS(CoupledSystem(ts::two_point_swap()), PreconditionError);
}

TEST_CASE("coupling invariance and commutation on random triples") {
  Rng rng(404);
  for (int t = 0; t < 10; ++t) {
    int n1 = 2 + rng.below(2), n2 = 2 + rng.below(2);
    int n3 = (n1 * n2 <= 4) ? 2 + rng.below(2) : 2;
    FiniteMPS X = triple_product_translation_system(
        FiniteGroup::cyclic(n1), FiniteGroup::cyclic(n2), FiniteGroup::cyclic(n3));
    CoupledSystem C = furstenberg_coupling(X);
    CouplingVerification rep = verify_coupling(C);
    INFO(rep.detail);
    REQUIRE(rep.total_mass_one);
    REQUIRE(rep.marginals_match);
    REQUIRE(rep.invariant);
    REQUIRE(rep.actions_commute);
    REQUIRE(rep.projection_intertwines);

    Observable f0 = random_unit_observable(X, rng);
    Observable f1 = random_unit_observable(X, rng);
    Observable f2 = random_unit_observable(X, rng);
    REQUIRE(C.integral(f0, f1, f2) == C.direct_average(f0, f1, f2));

    std::vector<int> proj;
    FiniteMPS M = C.as_mps(&proj);
    REQUIRE(M.k() == 3);
    REQUIRE(proj.size() == static_cast<size_t>(M.points()));
    Rat total(0);
    for (const Rat& m : M.mass()) total += m;
    REQUIRE(total == 1);
  }
}

TEST_CASE("three-term average on a two-point system, by hand") {
  FiniteMPS X = two_point_first_swap();
  Observable f1 = {Rat(1), Rat(0)};
  Observable f2 = {Rat(1), Rat(1)};
  Observable f3 = {Rat(1), rat_of(1, 2)};
  K3Report rep = k3_average(X, f1, f2, f3);
  // T12 = T123 = swap, so both terms of the sweep contribute (f1 f2 f3)(a)/2
  REQUIRE(rep.average == Observable{rat_of(1, 2), rat_of(1, 2)});
  REQUIRE(rep.norm_sq_direct == rat_of(1, 4));
  REQUIRE(rep.norm_sq_coupling == rat_of(1, 4));
  REQUIRE(rep.routes_agree);
  REQUIRE_FALSE(rep.hypothesis_zero);
  REQUIRE_FALSE(rep.conclusion_zero);
  REQUIRE(rep.lift_implication_ok);
}

TEST_CASE("three-term average needs a third action") {
  Observable f = {rat_of(1, 2), rat_of(1, 2)};
  REQUIRE_THROWS_AS(k3_average(ts::two_point_swap(), f, f, f), PreconditionError);
}

TEST_CASE("direct and coupling routes agree on random triples") {
  Rng rng(405);
  for (int t = 0; t < 10; ++t) {
    int n1 = 2 + rng.below(2), n2 = 2 + rng.below(2);
    FiniteMPS X = triple_product_translation_system(FiniteGroup::cyclic(n1),
                                                    FiniteGroup::cyclic(n2),
                                                    FiniteGroup::cyclic(2));
    Observable f1 = random_unit_observable(X, rng);
    Observable f2 = random_unit_observable(X, rng);
    Observable f3 = random_unit_observable(X, rng);
    K3Report rep = k3_average(X, f1, f2, f3);
    REQUIRE(rep.routes_agree);
    REQUIRE(rep.norm_sq_direct == rep.norm_sq_coupling);
    REQUIRE(rep.lift_implication_ok);

    K3Report again = k3_average(X, f1, f2, f3);
    REQUIRE(again.average == rep.average);
    REQUIRE(again.norm_sq_direct == rep.norm_sq_direct);
    REQUIRE(again.norm_sq_coupling == rep.norm_sq_coupling);
  }
}

TEST_CASE("mean-zero first factor forces a vanishing average") {
  const int n1 = 2, n2 = 3, n3 = 2;
  FiniteMPS X = triple_product_translation_system(
      FiniteGroup::cyclic(n1), FiniteGroup::cyclic(n2), FiniteGroup::cyclic(n3));
  std::vector<Rat> xi = {Rat(1), Rat(-1)};
  std::vector<Rat> eta = {Rat(1), Rat(2), Rat(0)};
  std::vector<Rat> theta = {Rat(1), Rat(0)};
  Observable f1(X.points()), f2(X.points()), f3(X.points());
  for (int u = 0; u < n1; ++u)
    for (int v = 0; v < n2; ++v)
      for (int w = 0; w < n3; ++w) {
        int p = (u * n2 + v) * n3 + w;
        f1[p] = xi[u];
        f2[p] = eta[v];
        f3[p] = theta[w];
      }
  K3Report rep = k3_average(X, f1, f2, f3);
  for (const Rat& v : rep.average) REQUIRE(v == 0);
  REQUIRE(rep.norm_sq_direct == 0);
  REQUIRE(rep.norm_sq_coupling == 0);
  REQUIRE(rep.hypothesis_zero);
  REQUIRE(rep.conclusion_zero);
  REQUIRE(rep.routes_agree);
  REQUIRE(rep.lift_implication_ok);
}

TEST_CASE("correlation profile of constant observables") {
  FiniteMPS X = product_translation_system(FiniteGroup::cyclic(2), FiniteGroup::cyclic(3));
  KappaReport one = kappa(X, Observable(X.points(), Rat(1)));
  REQUIRE(one.B == 1);
  REQUIRE(one.kappa_id_ge_B);
  for (const Rat& v : one.kappa) REQUIRE(v == 1);

  KappaReport half = kappa(X, Observable(X.points(), rat_of(1, 2)));
  REQUIRE(half.B == rat_of(1, 16));
  REQUIRE(half.kappa_id_ge_B);
  for (const Rat& v : half.kappa) REQUIRE(v == rat_of(1, 8));
}

TEST_CASE("identity correlation dominates the fourth power of the mean") {
  Rng rng(406);
  for (int t = 0; t < 50; ++t) {
    int a = 2 + rng.below(3), b = 2 + rng.below(3);
    FiniteMPS X = product_translation_system(FiniteGroup::cyclic(a), FiniteGroup::cyclic(b));
    Observable f = random_unit_observable(X, rng);
    KappaReport rep = kappa(X, f);
    REQUIRE(rep.kappa_id_ge_B);
    REQUIRE(rep.kappa[X.group()->id()] >= rep.B);
    for (const Rat& v : rep.kappa) REQUIRE(v >= 0);
    // the induced plateau weight always normalizes to exact mean one
    WeightReport w = build_weight(X.group(), rep.kappa, rep.B, rat_of(1, 10));
    REQUIRE(w.weight.mean() == 1);
  }
}

TEST_CASE("correlation profile preconditions") {
  Rng rng(407);
  REQUIRE_THROWS_AS(kappa(ts::double_swap_pairs(), Observable(4, rat_of(1, 2))),
                    PreconditionError);  // not ergodic
  FiniteMPS lr = left_right_translation_system(FiniteGroup::quaternion());
  REQUIRE_THROWS_AS(kappa(lr, Observable(lr.points(), rat_of(1, 2))),
                    PreconditionError);  // ergodic but not magic
  FiniteMPS X = product_translation_system(FiniteGroup::cyclic(2), FiniteGroup::cyclic(2));
  Observable bad(X.points(), Rat(2));
  REQUIRE_THROWS_AS(kappa(X, bad), PreconditionError);  // range violation
  (void)rng;
}

TEST_CASE("plateau weight on a five-element profile, by hand") {
  auto G = FiniteGroup::cyclic(5);
  // B = 1/2, eps = 1/4: only the identity value 3/5 clears the plateau
  std::vector<Rat> kv = {rat_of(3, 5), Rat(0), rat_of(1, 5), rat_of(1, 4), Rat(0)};
  WeightReport rep = build_weight(G, kv, rat_of(1, 2), rat_of(1, 4));
  REQUIRE(rep.phi == std::vector<Rat>{Rat(1), Rat(0), Rat(0), Rat(0), Rat(0)});
  REQUIRE(rep.weight.chi == std::vector<Rat>{Rat(5), Rat(0), Rat(0), Rat(0), Rat(0)});
  REQUIRE(rep.weight.mean() == 1);

  // a value on the ramp picks up the linear interpolation
  kv[3] = rat_of(3, 8);
  WeightReport ramp = build_weight(G, kv, rat_of(1, 2), rat_of(1, 4));
  REQUIRE(ramp.phi[3] == rat_of(1, 2));
  REQUIRE(ramp.weight.chi ==
          std::vector<Rat>{rat_of(10, 3), Rat(0), Rat(0), rat_of(5, 3), Rat(0)});
  REQUIRE(ramp.weight.mean() == 1);
}

TEST_CASE("plateau weight rejections") {
  auto G = FiniteGroup::cyclic(3);
  std::vector<Rat> kv = {Rat(1), Rat(0), Rat(0)};
  REQUIRE_THROWS_AS(build_weight(G, kv, rat_of(1, 2), Rat(0)), PreconditionError);
  REQUIRE_THROWS_AS(build_weight(G, kv, rat_of(1, 2), Rat(-1)), PreconditionError);
  std::vector<Rat> low = {rat_of(1, 4), Rat(0), Rat(0)};
  REQUIRE_THROWS_AS(build_weight(G, low, rat_of(1, 2), rat_of(1, 10)), PreconditionError);
  std::vector<Rat> wrong = {Rat(1), Rat(0)};
  REQUIRE_THROWS_AS(build_weight(G, wrong, rat_of(1, 2), rat_of(1, 10)), DomainError);
}

TEST_CASE("weighted recurrence bound holds on magic systems") {
  Rng rng(408);
  for (int t = 0; t < 20; ++t) {
    int a = 2 + rng.below(3), b = 2 + rng.below(3);
    FiniteMPS X = product_translation_system(FiniteGroup::cyclic(a), FiniteGroup::cyclic(b));
    Observable f = indicator_mask(X, random_set(X, rng));
    for (const Rat& eps : {rat_of(1, 10), rat_of(1, 100)}) {
      LowerBoundReport rep = weighted_lower_bound_check(X, f, eps);
      REQUIRE_FALSE(rep.advisory);
      REQUIRE(rep.bound == rep.B - eps);
      REQUIRE(rep.holds);
      REQUIRE(rep.kappa_bound_holds);
      REQUIRE(rep.weighted_value >= rep.bound);
      REQUIRE(rep.weighted_kappa >= rep.bound);
      REQUIRE(rep.weight.mean() == 1);
    }
  }
}

TEST_CASE("weighted bound degrades to advisory off the magic class") {
  FiniteMPS X = left_right_translation_system(FiniteGroup::quaternion());
  Rng rng(409);
  Observable f = random_unit_observable(X, rng);
  LowerBoundReport rep = weighted_lower_bound_check(X, f, rat_of(1, 10));
  REQUIRE(rep.advisory);
  REQUIRE(rep.kappa_bound_holds);  // plateau support forces this regardless
  REQUIRE(rep.weight.mean() == 1);
}

TEST_CASE("weighted bound preconditions") {
  FiniteMPS X = product_translation_system(FiniteGroup::cyclic(2), FiniteGroup::cyclic(2));
  Observable f(X.points(), rat_of(1, 2));
  REQUIRE_THROWS_AS(weighted_lower_bound_check(X, f, Rat(0)), PreconditionError);
  REQUIRE_THROWS_AS(weighted_lower_bound_check(ts::double_swap_pairs(),
                                               Observable(4, rat_of(1, 2)), rat_of(1, 10)),
                    PreconditionError);
}

TEST_CASE("matrix coefficient realizes the correlation profile") {
  FiniteMPS X = product_translation_system(FiniteGroup::cyclic(2), FiniteGroup::cyclic(3));
  Rng rng(410);
  Observable f = random_unit_observable(X, rng);
  Observable mid = cond_exp(X, f, join(invariant_partition(X, {0}), invariant_partition(X, {1})));
  MatrixCoefficient mc(X, f, mid, f);
  REQUIRE(mc.dim() == X.points() * X.points());
  REQUIRE(mc.verify());
  KappaReport rep = kappa(X, f);
  for (int g = 0; g < X.group()->order(); ++g) REQUIRE(mc.eval(g) == rep.kappa[g]);

  // for arbitrary triples the coefficient is the plain triple correlation
  Observable f0 = random_unit_observable(X, rng);
  Observable f1 = random_unit_observable(X, rng);
  Observable f2 = random_unit_observable(X, rng);
  MatrixCoefficient plain(X, f0, f1, f2);
  REQUIRE(plain.verify());
  for (int g = 0; g < X.group()->order(); ++g)
    REQUIRE(plain.eval(g) == correlation(X, f0, f1, f2, g));
}

TEST_CASE("weighted characteristic-factor identity") {
  FiniteMPS X = product_translation_system(FiniteGroup::cyclic(2), FiniteGroup::cyclic(3));
  Rng rng(411);
  Observable f0 = random_unit_observable(X, rng);
  Observable f1 = random_unit_observable(X, rng);
  Observable f2 = random_unit_observable(X, rng);
  Weight chi = weighted_lower_bound_check(X, f1, rat_of(1, 10)).weight;
  CharFactorReport rep = char_factor_check(X, chi, f0, f1, f2);
  REQUIRE(rep.equal);
  REQUIRE(equal_ae(X, rep.weighted_average, rep.projected_average));

  FiniteMPS lr = left_right_translation_system(FiniteGroup::quaternion());
  Weight flat{lr.group(), std::vector<Rat>(lr.group()->order(), Rat(1))};
  Observable g0(lr.points(), rat_of(1, 2));
  REQUIRE_THROWS_AS(char_factor_check(lr, flat, g0, g0, g0), PreconditionError);
}
