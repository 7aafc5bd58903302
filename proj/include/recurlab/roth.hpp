#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "recurlab/mps.hpp"
#include "recurlab/weights.hpp"

namespace recurlab {

namespace detail {

/// Smallest subset of candidate indices whose coverage masks union to the
/// full universe.  Exact branch and bound for universes up to 24 elements
/// (masks fit in a word); above that a greedy cover is returned with
/// exact=false.  Coverage masks must jointly cover the universe.
struct CoverResult {
  std::vector<int> chosen;
  bool exact = false;
};

inline CoverResult min_cover(int universe, const std::vector<std::uint64_t>& coverage) {
  const std::uint64_t full =
      universe == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << universe) - 1);
  auto greedy = [&]() {
    std::vector<int> pick;
    std::uint64_t covered = 0;
    while (covered != full) {
      int best = -1;
      int gain = -1;
      for (int i = 0; i < static_cast<int>(coverage.size()); ++i) {
        int fresh = std::popcount(coverage[i] & ~covered);
        if (fresh > gain) {
          gain = fresh;
          best = i;
        }
      }
      if (gain <= 0) throw DomainError("cover search: candidates do not cover the set");
      covered |= coverage[best];
      pick.push_back(best);
    }
    return pick;
  };

  CoverResult res;
  res.chosen = greedy();
  if (universe > 24) return res;

  // branch and bound: branch on the lowest uncovered element, try every
  // candidate covering it, prune at the incumbent size
  std::vector<int> best = res.chosen;
  std::vector<int> cur;
  auto rec = [&](auto&& self, std::uint64_t covered) -> void {
    if (covered == full) {
      if (cur.size() < best.size()) best = cur;
      return;
    }
    if (cur.size() + 1 >= best.size()) return;
    int e = std::countr_one(covered);  // lowest zero bit = lowest uncovered
    for (int i = 0; i < static_cast<int>(coverage.size()); ++i) {
      if (!(coverage[i] >> e & 1)) continue;
      cur.push_back(i);
      self(self, covered | coverage[i]);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  res.chosen = best;
  res.exact = true;
  return res;
}

}  // namespace detail

/// Left syndeticity: K with K R = G; right syndeticity: K with R K = G.
struct SyndeticityWitness {
  std::vector<int> left_cover, right_cover;
  bool left_exact = false, right_exact = false;
  bool verified = false;
};

inline bool verify_cover(const FiniteGroup& G, const std::vector<int>& R,
                         const std::vector<int>& K, bool left) {
  std::vector<char> hit(G.order(), 0);
  for (int k : K)
    for (int r : R) hit[left ? G.mul(k, r) : G.mul(r, k)] = 1;
  return std::all_of(hit.begin(), hit.end(), [](char c) { return c != 0; });
}

/**
 * Covering witnesses for a subset R of the group.  To cover an element t
 * from the left one may pick any k in t R^{-1}; the right cover uses
 * k in R^{-1} t.  Both covers are re-verified by direct multiplication.
 */
inline SyndeticityWitness syndeticity_witness(const FiniteGroup& G, const std::vector<int>& R) {
  if (R.empty()) throw DomainError("syndeticity: empty set cannot cover the group");
  if (G.order() > 64)
    throw DomainError("syndeticity: cover search supports groups of order at most 64");
  SyndeticityWitness w;
  auto build = [&](bool left) {
    std::vector<std::uint64_t> coverage(G.order(), 0);
    for (int k = 0; k < G.order(); ++k)
      for (int r : R) coverage[k] |= std::uint64_t{1} << (left ? G.mul(k, r) : G.mul(r, k));
    return detail::min_cover(G.order(), coverage);
  };
  auto l = build(true);
  auto r = build(false);
  w.left_cover = l.chosen;
  w.right_cover = r.chosen;
  w.left_exact = l.exact;
  w.right_exact = r.exact;
  w.verified = verify_cover(G, R, w.left_cover, true) && verify_cover(G, R, w.right_cover, false);
  return w;
}

struct CorrelationReport {
  Rat mu_A;
  Rat epsilon;
  Rat threshold;  // mu_A^4 - epsilon
  std::vector<Rat> c;
  std::vector<char> in_R;
  bool id_in_R = false;
  bool c_id_matches = false;  // c(id) == mu(A)
  bool bounds_ok = false;     // 0 <= c(g) <= mu(A)
  bool identity_ok = false;   // inverse set realized by translate intersections
  SyndeticityWitness syndetic;
  bool r_nonempty = false;
};

/// {x : T_S^g x in A} for the composite transformation of the selected actions.
inline std::vector<int> translate_preimage(const FiniteMPS& X, const std::vector<int>& selection,
                                           int g, const std::vector<char>& A) {
  std::vector<int> perm = X.composite_perm(selection, g);
  std::vector<int> out;
  for (int x = 0; x < X.points(); ++x)
    if (A[perm[x]]) out.push_back(x);
  return out;
}

/**
 * Full recurrence analysis of a set A in a system with two commuting
 * actions: the triple-correlation profile c(g), the set R of group elements
 * where c exceeds mu(A)^4 - eps, bound sanity, the realization of R^{-1} by
 * translate intersections mu(T_12^g A n T_2^g A n A), and covering
 * witnesses quantifying the syndeticity of R.
 */
inline CorrelationReport roth_verify(const FiniteMPS& X, const std::vector<char>& A,
                                     const Rat& epsilon) {
  if (X.k() < 2) throw PreconditionError("recurrence analysis needs two commuting actions");
  if (static_cast<int>(A.size()) != X.points())
    throw DomainError("set indicator has wrong length");
  if (epsilon <= 0) throw PreconditionError("epsilon must be positive");
  auto erg = is_ergodic(X);
  if (!erg.ergodic)
    throw PreconditionError("recurrence analysis needs an ergodic system (joint orbit partition has " +
                            std::to_string(erg.meet_partition.block_count()) + " blocks)");
  const FiniteGroup& G = *X.group();
  Observable f = std::vector<Rat>(X.points(), Rat(0));
  for (int x = 0; x < X.points(); ++x)
    if (A[x]) f[x] = 1;

  CorrelationReport rep;
  rep.mu_A = integral(X, f);
  rep.epsilon = epsilon;
  rep.threshold = rep.mu_A * rep.mu_A * rep.mu_A * rep.mu_A - epsilon;
  rep.bounds_ok = true;
  std::vector<int> R;
  for (int g = 0; g < G.order(); ++g) {
    Rat cg = correlation(X, f, f, f, g);
    if (cg < 0 || cg > rep.mu_A) rep.bounds_ok = false;
    rep.c.push_back(cg);
    bool in = cg > rep.threshold;
    rep.in_R.push_back(in ? 1 : 0);
    if (in) R.push_back(g);
  }
  rep.c_id_matches = rep.c[G.id()] == rep.mu_A;
  rep.id_in_R = rep.in_R[G.id()] != 0;
  rep.r_nonempty = !R.empty();

  // R^{-1} = {g : mu(T_12^g A n T_2^g A n A) > threshold}: membership of
  // g^{-1} in R must match the translate-intersection mass at g
  rep.identity_ok = true;
  for (int g = 0; g < G.order(); ++g) {
    std::vector<int> p12 = X.composite_perm({0, 1}, g);
    const std::vector<int>& p2 = X.perm(1, g);
    Rat mass(0);
    for (int x = 0; x < X.points(); ++x)
      if (A[x] && A[p2[x]] && A[p12[x]]) mass += X.mass()[x];
    bool in = mass > rep.threshold;
    if (in != (rep.in_R[G.inv(g)] != 0)) rep.identity_ok = false;
    if (mass != rep.c[G.inv(g)]) rep.identity_ok = false;
  }

  if (rep.r_nonempty) rep.syndetic = syndeticity_witness(G, R);
  return rep;
}

}  // namespace recurlab
