#include <catch2/catch_amalgamated.hpp>

#include "recurlab/group.hpp"
#include "recurlab/measure.hpp"
#include "recurlab/random_systems.hpp"
#include "recurlab/reiter.hpp"

using namespace recurlab;

TEST_CASE("cyclic group arithmetic") {
  auto G = FiniteGroup::cyclic(6);
  REQUIRE(G->order() == 6);
  REQUIRE(G->id() == 0);
  REQUIRE(G->mul(2, 5) == 1);
  REQUIRE(G->inv(4) == 2);
  REQUIRE(G->is_abelian());
  REQUIRE(G->cyclic_factors() == std::vector<int>{6});
  for (int g = 0; g < 6; ++g) {
    REQUIRE(G->mul(g, G->inv(g)) == G->id());
    REQUIRE(G->mul(G->id(), g) == g);
  }
}

TEST_CASE("dihedral group is nonabelian with involutive reflections") {
  auto D = FiniteGroup::dihedral(3);
  REQUIRE(D->order() == 6);
  REQUIRE_FALSE(D->is_abelian());
  // rotations sit at 0..2, reflections at 3..5
  for (int r = 3; r < 6; ++r) REQUIRE(D->mul(r, r) == D->id());
  int ord = 1, g = 1;
  while (g != D->id()) {
    g = D->mul(g, 1);
    ++ord;
  }
  REQUIRE(ord == 3);
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) REQUIRE(D->mul(a, D->mul(b, D->inv(b))) == a);
}

TEST_CASE("quaternion group multiplication") {
  auto Q = FiniteGroup::quaternion();
  REQUIRE(Q->order() == 8);
  REQUIRE_FALSE(Q->is_abelian());
  // encoding: 0..3 = 1,i,j,k and 4..7 their negatives
  REQUIRE(Q->mul(1, 2) == 3);   // i j = k
  REQUIRE(Q->mul(2, 1) == 7);   // j i = -k
  REQUIRE(Q->mul(1, 1) == 4);   // i^2 = -1
  REQUIRE(Q->mul(4, 4) == 0);   // (-1)^2 = 1
  REQUIRE(Q->inv(1) == 5);      // i^{-1} = -i
  int order2 = 0;
  for (int x = 1; x < 8; ++x)
    if (Q->mul(x, x) == 0) ++order2;
  REQUIRE(order2 == 1);  // only -1
}

TEST_CASE("product group and table round trip") {
  auto P = FiniteGroup::product(FiniteGroup::cyclic(2), FiniteGroup::cyclic(3));
  REQUIRE(P->order() == 6);
  REQUIRE(P->is_abelian());
  REQUIRE(P->cyclic_factors() == std::vector<int>{2, 3});

  std::vector<std::vector<int>> t(3, std::vector<int>(3));
  auto Z3 = FiniteGroup::cyclic(3);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) t[a][b] = Z3->mul(a, b);
  auto copy = FiniteGroup::from_table(t, "copy");
  REQUIRE(copy->same_table(*Z3));
}

TEST_CASE("invalid multiplication tables are rejected") {
  REQUIRE_THROWS_AS(FiniteGroup({{0, 1}, {1, 1}}), DomainError);  // row not a bijection
  // associativity failure: rows are permutations and an identity exists
  REQUIRE_THROWS_AS(FiniteGroup({{0, 1, 2}, {1, 2, 0}, {2, 1, 0}}), DomainError);
  REQUIRE_THROWS_AS(FiniteGroup({}), DomainError);
  REQUIRE_THROWS_AS(FiniteGroup::cyclic(0), DomainError);
}

TEST_CASE("group measures validate and convolve exactly") {
  auto G = FiniteGroup::cyclic(4);
  REQUIRE_THROWS_AS(GroupMeasure(G, {Rat(1), Rat(1), Rat(0), Rat(0)}), DomainError);
  REQUIRE_THROWS_AS(GroupMeasure(G, {Rat(2), Rat(-1), Rat(0), Rat(0)}), DomainError);

  GroupMeasure a(G, {rat_of(1, 2), rat_of(1, 2), Rat(0), Rat(0)});
  GroupMeasure b(G, {Rat(0), rat_of(1, 2), rat_of(1, 2), Rat(0)});
  GroupMeasure ab = convolve(a, b);
  REQUIRE(ab[0] == 0);
  REQUIRE(ab[1] == rat_of(1, 4));
  REQUIRE(ab[2] == rat_of(1, 2));
  REQUIRE(ab[3] == rat_of(1, 4));

  // dirac convolution follows the group law; involution inverts the point
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y) {
      GroupMeasure d = convolve(GroupMeasure::dirac(G, x), GroupMeasure::dirac(G, y));
      REQUIRE(d == GroupMeasure::dirac(G, G->mul(x, y)));
    }
  REQUIRE(involute(GroupMeasure::dirac(G, 1)) == GroupMeasure::dirac(G, 3));

  // uniform measure absorbs anything
  GroupMeasure u = GroupMeasure::uniform(G);
  REQUIRE(convolve(u, b) == u);
  REQUIRE(convolve(b, u) == u);

  REQUIRE(tv_norm_diff(a, b) == 1);  // full l1 sum, no half-normalization
  REQUIRE(tv_norm_diff(a, a) == 0);
}

TEST_CASE("convolution is associative and identity-normalized") {
  Rng rng(11);
  auto D = FiniteGroup::dihedral(3);
  for (int t = 0; t < 12; ++t) {
    GroupMeasure a = random_group_measure(D, rng);
    GroupMeasure b = random_group_measure(D, rng);
    GroupMeasure c = random_group_measure(D, rng);
    REQUIRE(convolve(convolve(a, b), c) == convolve(a, convolve(b, c)));
    REQUIRE(convolve(GroupMeasure::dirac(D, D->id()), a) == a);
    REQUIRE(convolve(a, GroupMeasure::dirac(D, D->id())) == a);
    REQUIRE(involute(involute(a)) == a);
  }
}

TEST_CASE("built-in averaging schemes validate") {
  auto G = FiniteGroup::cyclic(6);
  for (auto F : {ReiterSequence::uniform(G), ReiterSequence::perturbed_uniform(G)}) {
    DefectReport rep = reiter_defect_report(F);
    REQUIRE(rep.nonincreasing);
    REQUIRE(rep.final_max <= reiter_defect_threshold());
    REQUIRE_NOTHROW(require_reiter(F));
  }
  // uniform scheme has defect exactly zero at every term
  DefectReport u = reiter_defect_report(ReiterSequence::uniform(G));
  for (const auto& row : u.rows)
    for (const auto& d : row.defect) REQUIRE(d == 0);

  auto P = FiniteGroup::product(FiniteGroup::cyclic(3), FiniteGroup::cyclic(4));
  ReiterSequence box = ReiterSequence::box(P);
  DefectReport rep = reiter_defect_report(box);
  REQUIRE(rep.nonincreasing);
  REQUIRE(rep.final_max <= reiter_defect_threshold());
}

TEST_CASE("degenerate schemes are rejected") {
  auto G = FiniteGroup::cyclic(6);
  ReiterSequence bad{G, "single dirac", {GroupMeasure::dirac(G, 2)}};
  REQUIRE_THROWS_AS(require_reiter(bad), ConvergenceError);
  ReiterSequence empty{G, "empty", {}};
  REQUIRE_THROWS_AS(require_reiter(empty), ConvergenceError);
}

TEST_CASE("Cesaro limit is the exact uniform average, scheme independent") {
  auto G = FiniteGroup::cyclic(5);
  Rng rng(7);
  std::vector<std::vector<Rat>> u(5);
  for (auto& row : u) row = {rng.unit_rat(), rng.unit_rat() - rat_of(1, 2)};
  auto a = cesaro_limit(u, ReiterSequence::uniform(G));
  auto b = cesaro_limit(u, ReiterSequence::perturbed_uniform(G));
  REQUIRE(a == b);
  Rat manual0(0);
  for (const auto& row : u) manual0 += row[0];
  REQUIRE(a[0] == manual0 / 5);
  // the final uniform term of the canonical scheme reproduces the limit
  auto F = ReiterSequence::uniform(G);
  REQUIRE(scheme_term_average(u, F.terms.back()) == a);
}
