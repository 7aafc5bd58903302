#pragma once

#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "recurlab/cube.hpp"
#include "recurlab/mps.hpp"

namespace recurlab {

/// A nonnegative weight on the group with exact mean 1.
struct Weight {
  GroupPtr group;
  std::vector<Rat> chi;

  Rat mean() const {
    Rat s(0);
    for (const Rat& v : chi) s += v;
    return s / static_cast<int>(chi.size());
  }
};

namespace detail {

inline void require_unit_range(const Observable& f) {
  for (const Rat& v : f)
    if (v < 0 || v > 1) throw PreconditionError("observable must take values in [0,1]");
}

inline Observable projected_middle(const FiniteMPS& X, const Observable& f) {
  Partition J = join(invariant_partition(X, {0}), invariant_partition(X, {1}));
  return cond_exp(X, f, J);
}

/// kappa(g) = integral f * (E(f|I1 v I2) o T1^g) * (f o T12^g), without
/// precondition enforcement; the outer conditional expectations onto the
/// joins with the compact factor collapse to f itself on a finite carrier.
inline std::vector<Rat> kappa_values(const FiniteMPS& X, const Observable& f) {
  require_unit_range(f);
  Observable mid = projected_middle(X, f);
  std::vector<Rat> k(X.group()->order());
  for (int g = 0; g < X.group()->order(); ++g) k[g] = correlation(X, f, mid, f, g);
  return k;
}

}  // namespace detail

struct KappaReport {
  std::vector<Rat> kappa;
  Rat B;  // (integral f)^4
  bool kappa_id_ge_B = false;
};

/**
 * The correlation profile kappa used to build the almost periodic weight.
 * Requires an ergodic magic system and f with values in [0,1]; the lower
 * bound kappa(id) >= (integral f)^4 is evaluated and reported, not assumed.
 */
inline KappaReport kappa(const FiniteMPS& X, const Observable& f) {
  auto erg = is_ergodic(X);
  if (!erg.ergodic)
    throw PreconditionError("kappa: system is not ergodic (joint orbit partition has " +
                            std::to_string(erg.meet_partition.block_count()) + " blocks)");
  MagicReport mg = magic_check(X);
  if (!mg.magic) throw PreconditionError("kappa: system is not magic; " + mg.detail);
  KappaReport rep;
  rep.kappa = detail::kappa_values(X, f);
  Rat m = integral(X, f);
  rep.B = m * m * m * m;
  rep.kappa_id_ge_B = rep.kappa[X.group()->id()] >= rep.B;
  return rep;
}

struct WeightReport {
  Rat B;
  Rat epsilon;
  std::vector<Rat> phi;  // plateau profile values phi(kappa(g))
  Weight weight;         // phi normalized to exact mean 1
};

/**
 * Piecewise-linear plateau profile: 0 at or below B - eps, 1 at or above B,
 * linear in between; composed with the given correlation profile and
 * normalized to exact mean 1.  Requires kappa(id) >= B, which forces the
 * profile mean to be at least 1/|G| so the normalization is defined.
 */
inline WeightReport build_weight(const GroupPtr& group, const std::vector<Rat>& kappa_values,
                                 const Rat& B, const Rat& epsilon) {
  if (epsilon <= 0) throw PreconditionError("weight: epsilon must be positive");
  if (static_cast<int>(kappa_values.size()) != group->order())
    throw DomainError("weight: profile length does not match the group order");
  if (kappa_values[group->id()] < B)
    throw PreconditionError("weight: profile at the identity is below B");
  WeightReport rep;
  rep.B = B;
  rep.epsilon = epsilon;
  const Rat lo = B - epsilon;
  for (const Rat& k : kappa_values) {
    Rat p;
    if (k <= lo)
      p = 0;
    else if (k >= B)
      p = 1;
    else
      p = (k - lo) / epsilon;
    rep.phi.push_back(p);
  }
  Rat mean(0);
  for (const Rat& p : rep.phi) mean += p;
  mean /= group->order();
  if (mean == 0) throw ConvergenceError("weight: plateau profile vanishes identically");
  rep.weight.group = group;
  for (const Rat& p : rep.phi) rep.weight.chi.push_back(p / mean);
  return rep;
}

struct LowerBoundReport {
  Rat B;
  Rat epsilon;
  Rat bound;           // B - epsilon
  Rat weighted_value;  // avg_g chi(g) c_g with c the triple correlation of f
  Rat weighted_kappa;  // avg_g chi(g) kappa(g), >= bound by construction
  bool holds = false;
  bool kappa_bound_holds = false;
  bool advisory = false;  // set when the system is not magic
  Weight weight;
};

/**
 * The weighted recurrence bound: with chi the normalized plateau weight,
 * the uniform average of chi(g) * integral f * T_1^g f * T_12^g f is at
 * least (integral f)^4 - eps.  On magic systems this is exact and enforced;
 * otherwise the report is advisory.
 */
inline LowerBoundReport weighted_lower_bound_check(const FiniteMPS& X, const Observable& f,
                                                   const Rat& epsilon) {
  auto erg = is_ergodic(X);
  if (!erg.ergodic)
    throw PreconditionError(
        "weighted bound: system is not ergodic (joint orbit partition has " +
        std::to_string(erg.meet_partition.block_count()) + " blocks)");
  detail::require_unit_range(f);
  if (epsilon <= 0) throw PreconditionError("weighted bound: epsilon must be positive");
  MagicReport mg = magic_check(X);

  LowerBoundReport rep;
  rep.epsilon = epsilon;
  rep.advisory = !mg.magic;

  // weight construction, bypassing the magic precondition in advisory mode;
  // kappa(id) >= B holds for any system by the power-mean chain, so
  // build_weight's own precondition is satisfied
  std::vector<Rat> kv = detail::kappa_values(X, f);
  Rat m = integral(X, f);
  rep.B = m * m * m * m;
  rep.bound = rep.B - epsilon;
  rep.weight = build_weight(X.group(), kv, rep.B, epsilon).weight;

  const FiniteGroup& G = *X.group();
  rep.weighted_value = 0;
  rep.weighted_kappa = 0;
  for (int g = 0; g < G.order(); ++g) {
    rep.weighted_value += rep.weight.chi[g] * correlation(X, f, f, f, g);
    rep.weighted_kappa += rep.weight.chi[g] * kv[g];
  }
  rep.weighted_value /= G.order();
  rep.weighted_kappa /= G.order();
  rep.holds = rep.weighted_value >= rep.bound;
  rep.kappa_bound_holds = rep.weighted_kappa >= rep.bound;
  return rep;
}

/**
 * The correlation profile realized as a matrix coefficient of a unitary
 * anti-representation.  The representation permutes pairs (x, y) by
 * (T_1^g x, T_12^g y); it is unitary for the product-weighted inner product
 * <u, v> = sum mu(x) mu(y) u(x,y) v(x,y), and
 *
 *   kappa(g) = <w, pi(g) v>   with   v = f1 (x) f2,
 *   w the diagonal kernel  w(x,y) = [x = y] f0(x) / mu(x)  on positive mass.
 *
 * Permutation matrices are stored as index maps; entries are exact.
 */
class MatrixCoefficient {
 public:
  MatrixCoefficient(const FiniteMPS& X, Observable f0, Observable f1, Observable f2)
      : X_(X), f0_(std::move(f0)), f1_(std::move(f1)), f2_(std::move(f2)) {
    int n = X_.points();
    d_ = n * n;
    omega_.resize(d_);
    v_.resize(d_);
    w_.assign(d_, Rat(0));
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) {
        int p = x * n + y;
        omega_[p] = X_.mass()[x] * X_.mass()[y];
        v_[p] = f1_[x] * f2_[y];
      }
    for (int x = 0; x < n; ++x)
      if (X_.mass()[x] != 0) w_[x * n + x] = f0_[x] / X_.mass()[x];
  }

  int dim() const { return d_; }

  /// Index map of the permutation matrix of g: entry (p, pi_g(p)) is 1.
  std::vector<int> perm_matrix(int g) const {
    int n = X_.points();
    const auto& p1 = X_.perm(0, g);
    std::vector<int> p12 = X_.composite_perm({0, 1}, g);
    std::vector<int> pi(d_);
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) pi[x * n + y] = p1[x] * n + p12[y];
    return pi;
  }

  Rat eval(int g) const {
    std::vector<int> pi = perm_matrix(g);
    Rat s(0);
    for (int p = 0; p < d_; ++p)
      if (w_[p] != 0) s += omega_[p] * w_[p] * v_[pi[p]];
    return s;
  }

  /// Anti-homomorphism law pi(g) pi(h) = pi(hg) and exact unitarity of
  /// every pi(g) for the weighted inner product, checked exhaustively.
  bool verify() const {
    const FiniteGroup& G = *X_.group();
    std::vector<std::vector<int>> mats(G.order());
    for (int g = 0; g < G.order(); ++g) mats[g] = perm_matrix(g);
    for (int g = 0; g < G.order(); ++g) {
      for (int p = 0; p < d_; ++p)
        if (omega_[mats[g][p]] != omega_[p]) return false;  // unitarity
      for (int h = 0; h < G.order(); ++h) {
        const auto& mg = mats[g];
        const auto& mh = mats[h];
        const auto& mhg = mats[G.mul(h, g)];
        // operator composition pi(g) pi(h) sends the basis index p to mh[mg[p]]
        for (int p = 0; p < d_; ++p)
          if (mh[mg[p]] != mhg[p]) return false;
      }
    }
    return true;
  }

 private:
  FiniteMPS X_;
  Observable f0_, f1_, f2_;
  int d_;
  std::vector<Rat> omega_, v_, w_;
};

struct CharFactorReport {
  Observable weighted_average;   // avg_g chi(g) f0 (f1 o T1^g) (f2 o T12^g)
  Observable projected_average;  // same with the conditional-expectation replacements
  bool equal = false;
};

/**
 * Weighted characteristic-factor identity: for a magic system the weighted
 * average of f0 * T_1^g f1 * T_12^g f2 is unchanged when f1 is replaced by
 * E(f1 | I_1 v I_2) and f0, f2 by their conditional expectations onto the
 * joins with the (degenerate) compact factor.  Exact equality is required.
 */
inline CharFactorReport char_factor_check(const FiniteMPS& X, const Weight& chi,
                                          const Observable& f0, const Observable& f1,
                                          const Observable& f2) {
  require_same_group(X.group(), chi.group);
  MagicReport mg = magic_check(X);
  if (!mg.magic)
    throw PreconditionError("characteristic-factor identity needs a magic system; " + mg.detail);
  const FiniteGroup& G = *X.group();
  Partition K12 = kronecker_factor(X, {0, 1});
  Observable p0 = cond_exp(X, f0, join(invariant_partition(X, {0}), K12));
  Observable p1 = detail::projected_middle(X, f1);
  Observable p2 = cond_exp(X, f2, join(invariant_partition(X, {1}), K12));

  auto sweep = [&](const Observable& a0, const Observable& a1, const Observable& a2) {
    Observable acc(X.points(), Rat(0));
    for (int g = 0; g < G.order(); ++g) {
      Observable t1 = pullback(a1, X.perm(0, g));
      Observable t12 = pullback(a2, X.composite_perm({0, 1}, g));
      Observable term = pointwise_mul(a0, pointwise_mul(t1, t12));
      for (int x = 0; x < X.points(); ++x) acc[x] += chi.chi[g] * term[x];
    }
    for (Rat& v : acc) v /= G.order();
    return acc;
  };
  CharFactorReport rep;
  rep.weighted_average = sweep(f0, f1, f2);
  rep.projected_average = sweep(p0, p1, p2);
  rep.equal = equal_ae(X, rep.weighted_average, rep.projected_average);
  return rep;
}

}  // namespace recurlab
