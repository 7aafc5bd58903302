#include <catch2/catch_amalgamated.hpp>

#include "recurlab/density.hpp"
#include "recurlab/random_systems.hpp"
#include "recurlab/roth.hpp"
#include "test_support.hpp"

using namespace recurlab;

TEST_CASE("covering witnesses on hand-checked sets") {
  auto Z6 = FiniteGroup::cyclic(6);
  // R = G: a single element covers
  SyndeticityWitness all = syndeticity_witness(*Z6, {0, 1, 2, 3, 4, 5});
  REQUIRE(all.left_cover.size() == 1);
  REQUIRE(all.right_cover.size() == 1);
  REQUIRE(all.left_exact);
  REQUIRE(all.verified);

  // R = {0, 3}: each translate hits two elements, so three are needed
  SyndeticityWitness half = syndeticity_witness(*Z6, {0, 3});
  REQUIRE(half.left_cover.size() == 3);
  REQUIRE(half.right_cover.size() == 3);
  REQUIRE(half.left_exact);
  REQUIRE(half.right_exact);
  REQUIRE(half.verified);
  REQUIRE(verify_cover(*Z6, {0, 3}, {0, 1, 2}, true));
  REQUIRE_FALSE(verify_cover(*Z6, {0, 3}, {0, 1}, true));

  // rotations inside the dihedral group: identity plus one reflection cover
  auto D3 = FiniteGroup::dihedral(3);
  SyndeticityWitness rot = syndeticity_witness(*D3, {0, 1, 2});
  REQUIRE(rot.left_cover.size() == 2);
  REQUIRE(rot.right_cover.size() == 2);
  REQUIRE(rot.verified);

  REQUIRE_THROWS_AS(syndeticity_witness(*Z6, {}), DomainError);
}

TEST_CASE("recurrence analysis of the two-point swap") {
  FiniteMPS X = ts::two_point_swap();
  std::vector<char> A = {1, 0};
  CorrelationReport rep = roth_verify(X, A, rat_of(1, 100));
  REQUIRE(rep.mu_A == rat_of(1, 2));
  REQUIRE(rep.threshold == rat_of(21, 400));
  REQUIRE(rep.c == std::vector<Rat>{rat_of(1, 2), Rat(0)});
  REQUIRE(rep.in_R == std::vector<char>{1, 0});
  REQUIRE(rep.id_in_R);
  REQUIRE(rep.c_id_matches);
  REQUIRE(rep.bounds_ok);
  REQUIRE(rep.identity_ok);
  REQUIRE(rep.r_nonempty);
  // R = {id} only covers via the full group
  REQUIRE(rep.syndetic.left_cover.size() == 2);
  REQUIRE(rep.syndetic.verified);
}

TEST_CASE("recurrence analysis of full and empty sets") {
  FiniteMPS X = product_translation_system(FiniteGroup::cyclic(2), FiniteGroup::cyclic(3));
  std::vector<char> full(X.points(), 1);
  CorrelationReport frep = roth_verify(X, full, rat_of(1, 10));
  REQUIRE(frep.mu_A == 1);
  for (const Rat& v : frep.c) REQUIRE(v == 1);
  for (char b : frep.in_R) REQUIRE(b == 1);
  REQUIRE(frep.syndetic.left_cover.size() == 1);

  // empty set: the threshold is negative, so every element is captured
  std::vector<char> empty(X.points(), 0);
  CorrelationReport erep = roth_verify(X, empty, rat_of(1, 10));
  REQUIRE(erep.mu_A == 0);
  for (const Rat& v : erep.c) REQUIRE(v == 0);
  for (char b : erep.in_R) REQUIRE(b == 1);
  REQUIRE(erep.id_in_R);
  REQUIRE(erep.identity_ok);
}

TEST_CASE("recurrence analysis on randomized ergodic systems") {
  Rng rng(505);
  for (int t = 0; t < 20; ++t) {
    FiniteMPS X = rng.flip() ? product_translation_system(FiniteGroup::cyclic(2 + rng.below(3)),
                                                          FiniteGroup::cyclic(2 + rng.below(3)))
                             : left_right_translation_system(
                                   rng.flip() ? FiniteGroup::dihedral(3)
                                              : GroupPtr(FiniteGroup::quaternion()));
    std::vector<char> A = random_set(X, rng);
    CorrelationReport small = roth_verify(X, A, rat_of(1, 100));
    CorrelationReport large = roth_verify(X, A, rat_of(1, 10));
    REQUIRE(small.id_in_R);
    REQUIRE(small.c_id_matches);
    REQUIRE(small.bounds_ok);
    REQUIRE(small.identity_ok);
    REQUIRE(small.r_nonempty);
    REQUIRE(small.syndetic.verified);
    // growing epsilon only grows the captured set
    for (int g = 0; g < X.group()->order(); ++g)
      if (small.in_R[g]) REQUIRE(large.in_R[g]);
  }
}

TEST_CASE("recurrence analysis rejections") {
  FiniteMPS X = ts::two_point_swap();
  std::vector<char> A = {1, 0};
  REQUIRE_THROWS_AS(roth_verify(X, A, Rat(0)), PreconditionError);
  REQUIRE_THROWS_AS(roth_verify(X, {1, 0, 0}, rat_of(1, 10)), DomainError);
  REQUIRE_THROWS_AS(roth_verify(ts::double_swap_pairs(), {1, 0, 0, 0}, rat_of(1, 10)),
                    PreconditionError);  // not ergodic

  // a single action is not enough
  auto Z2 = FiniteGroup::cyclic(2);
  FiniteMPS single(Z2, {"a", "b"}, {rat_of(1, 2), rat_of(1, 2)}, {Action{{0, 1}, {1, 0}}});
  REQUIRE_THROWS_AS(roth_verify(single, {1, 0}, rat_of(1, 10)), PreconditionError);
}

TEST_CASE("translate preimages select the right points") {
  FiniteMPS X = ts::two_point_swap();
  std::vector<char> A = {1, 0};
  REQUIRE(translate_preimage(X, {0}, 1, A) == std::vector<int>{1});
  REQUIRE(translate_preimage(X, {0}, 0, A) == std::vector<int>{0});
  REQUIRE(translate_preimage(X, {0, 1}, 1, A) == std::vector<int>{1});  // T2 is trivial
  REQUIRE(translate_preimage(X, {1}, 1, A) == std::vector<int>{0});
}

TEST_CASE("exact density of subsets") {
  auto Z6 = FiniteGroup::cyclic(6);
  REQUIRE(upper_density(Z6, {1, 0, 1, 0, 1, 0}) == rat_of(1, 2));
  REQUIRE(upper_density(Z6, {0, 0, 0, 0, 0, 0}) == 0);
  REQUIRE_THROWS_AS(upper_density(Z6, {1, 0}), DomainError);
}

TEST_CASE("window density of periodic sets") {
  // even integers: a window of length 2N+1 holds at most N+1 of them
  WindowDensityReport ev = window_upper_density(
      1, [](const std::vector<long>& p) { return p[0] % 2 == 0; }, 3, 2);
  REQUIRE(ev.by_radius == std::vector<Rat>{rat_of(2, 3), rat_of(3, 5), rat_of(4, 7)});
  REQUIRE(ev.value == rat_of(4, 7));

  // checkerboard in the plane: five of nine cells in the best 3 x 3 window
  WindowDensityReport cb = window_upper_density(
      2, [](const std::vector<long>& p) { return (p[0] + p[1]) % 2 == 0; }, 1, 1);
  REQUIRE(cb.value == rat_of(5, 9));

  REQUIRE_THROWS_AS(window_upper_density(0, [](const std::vector<long>&) { return true; }, 1, 1),
                    DomainError);
  REQUIRE_THROWS_AS(window_upper_density(4, [](const std::vector<long>&) { return true; }, 1, 1),
                    DomainError);
  REQUIRE_THROWS_AS(window_upper_density(1, [](const std::vector<long>&) { return true; }, 0, 1),
                    DomainError);
  REQUIRE_THROWS_AS(window_upper_density(1, [](const std::vector<long>&) { return true; }, 1, -1),
                    DomainError);
  REQUIRE_THROWS_AS(window_upper_density(3, [](const std::vector<long>&) { return true; }, 80, 0),
                    DomainError);
}

TEST_CASE("corners translation system structure") {
  FiniteMPS X = corners_translation_system(FiniteGroup::cyclic(2));
  REQUIRE(X.k() == 2);
  REQUIRE(X.points() == 4);
  for (const Rat& m : X.mass()) REQUIRE(m == rat_of(1, 4));
  // T_1^1 translates the first coordinate: (x, y) -> (x + 1, y)
  REQUIRE(X.perm(0, 1) == std::vector<int>{2, 3, 0, 1});
  REQUIRE(X.perm(1, 1) == std::vector<int>{1, 0, 3, 2});
  REQUIRE(is_ergodic(X).ergodic);
}

TEST_CASE("corners on the two-element diagonal, by hand") {
  auto Z2 = FiniteGroup::cyclic(2);
  std::vector<char> E = {1, 0, 0, 1};  // {(0,0), (1,1)}
  CornersReport rep = corners_check(Z2, E, rat_of(1, 100));
  REQUIRE(rep.density == rat_of(1, 2));
  REQUIRE(rep.threshold == rat_of(21, 400));
  REQUIRE(rep.corner_density == std::vector<Rat>{rat_of(1, 2), Rat(0)});
  REQUIRE(rep.good == std::vector<char>{1, 0});
  REQUIRE(rep.strictly_good == std::vector<char>{1, 0});
  REQUIRE(rep.id_good);
  REQUIRE(rep.syndetic.left_cover.size() == 2);
  REQUIRE(rep.syndetic.verified);
  REQUIRE(rep.cross_validated);
  REQUIRE(rep.translation_report.c[0] == rat_of(1, 2));
}

TEST_CASE("corners on full and empty subsets") {
  auto Z3 = FiniteGroup::cyclic(3);
  std::vector<char> full(9, 1);
  CornersReport frep = corners_check(Z3, full, rat_of(1, 10));
  REQUIRE(frep.density == 1);
  for (const Rat& d : frep.corner_density) REQUIRE(d == 1);
  for (char b : frep.good) REQUIRE(b == 1);
  REQUIRE(frep.cross_validated);
  REQUIRE(frep.syndetic.left_cover.size() == 1);

  std::vector<char> empty(9, 0);
  CornersReport erep = corners_check(Z3, empty, rat_of(1, 10));
  REQUIRE(erep.density == 0);
  for (char b : erep.good) REQUIRE(b == 1);  // negative threshold
  REQUIRE(erep.id_good);
  REQUIRE(erep.cross_validated);
}

TEST_CASE("corners agree with the induced translation system") {
  Rng rng(506);
  for (int t = 0; t < 25; ++t) {
    int n = 2 + rng.below(5);
    GroupPtr G = FiniteGroup::cyclic(n);
    std::vector<char> E(static_cast<size_t>(n) * n);
    for (char& c : E) c = rng.flip() ? 1 : 0;
    CornersReport rep = corners_check(G, E, rat_of(1, 50));
    REQUIRE(rep.id_good);
    REQUIRE(rep.cross_validated);
    REQUIRE(rep.syndetic.verified);
    for (int g = 0; g < n; ++g)
      REQUIRE(rep.corner_density[g] == rep.translation_report.c[G->inv(g)]);
  }
}

TEST_CASE("corners rejections") {
  auto Z2 = FiniteGroup::cyclic(2);
  REQUIRE_THROWS_AS(corners_check(Z2, {1, 0}, rat_of(1, 10)), DomainError);
  REQUIRE_THROWS_AS(corners_check(Z2, {1, 0, 0, 1}, Rat(0)), PreconditionError);
}
