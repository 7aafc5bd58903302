#pragma once

#include <array>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "recurlab/mps.hpp"
#include "recurlab/reiter.hpp"

namespace recurlab {

using CubePoint = std::array<int, 4>;  // coordinates indexed by subset: {}, {1}, {2}, {1,2}

/**
 * The cube measure of a system with two commuting actions: the pushforward
 * of mu under x |-> (x, T_1^{g1} x, T_2^{g2} x, T_1^{g1} T_2^{g2} x),
 * averaged over (g1, g2).  Carries the two side transformations, which act
 * on the coordinates whose subset contains the given direction.
 */
class CubeSystem {
 public:
  explicit CubeSystem(FiniteMPS base) : base_(std::move(base)) {
    if (base_.k() < 2) throw PreconditionError("cube measure needs two commuting actions");
    const FiniteGroup& G = *base_.group();
    Rat unit = rat_of(1, static_cast<long>(G.order()) * G.order());
    for (int g1 = 0; g1 < G.order(); ++g1) {
      const auto& p1 = base_.perm(0, g1);
      for (int g2 = 0; g2 < G.order(); ++g2) {
        const auto& p2 = base_.perm(1, g2);
        for (int x = 0; x < base_.points(); ++x) {
          if (base_.mass()[x] == 0) continue;
          CubePoint t{x, p1[x], p2[x], p1[p2[x]]};
          measure_[t] += base_.mass()[x] * unit;
        }
      }
    }
  }

  const FiniteMPS& base() const { return base_; }
  const std::map<CubePoint, Rat>& measure() const { return measure_; }

  Rat mass(const CubePoint& t) const {
    auto it = measure_.find(t);
    return it == measure_.end() ? Rat(0) : it->second;
  }

  /// Side transformation along direction i (1 or 2) by group element g.
  CubePoint side(int i, int g, const CubePoint& t) const {
    const auto& p = base_.perm(i - 1, g);
    CubePoint s = t;
    if (i == 1) {
      s[1] = p[t[1]];
      s[3] = p[t[3]];
    } else if (i == 2) {
      s[2] = p[t[2]];
      s[3] = p[t[3]];
    } else {
      throw DomainError("side direction must be 1 or 2");
    }
    return s;
  }

  /// integral of the tensor product f0 x f1 x f2 x f12 against the stored measure.
  Rat integral(const Observable& f0, const Observable& f1, const Observable& f2,
               const Observable& f12) const {
    Rat s(0);
    for (const auto& [t, m] : measure_) s += m * f0[t[0]] * f1[t[1]] * f2[t[2]] * f12[t[3]];
    return s;
  }

  /// Same value evaluated without the stored measure, as the double group
  /// average of the base integrals.
  Rat direct_double_average(const Observable& f0, const Observable& f1, const Observable& f2,
                            const Observable& f12) const {
    const FiniteGroup& G = *base_.group();
    Rat s(0);
    for (int g1 = 0; g1 < G.order(); ++g1) {
      Observable a = pullback(f1, base_.perm(0, g1));
      Observable c12 = pullback(f12, base_.perm(0, g1));
      for (int g2 = 0; g2 < G.order(); ++g2) {
        Observable b = pullback(f2, base_.perm(1, g2));
        Observable c = pullback(c12, base_.perm(1, g2));
        s += recurlab::integral(base_, pointwise_mul(pointwise_mul(f0, a), pointwise_mul(b, c)));
      }
    }
    return s / (static_cast<long>(G.order()) * G.order());
  }

  /// Pointwise double average as an observable on the base, computed by the
  /// direct double sweep.
  Observable cubic_average(const Observable& f0, const Observable& f1, const Observable& f2,
                           const Observable& f12) const {
    const FiniteGroup& G = *base_.group();
    Observable acc(base_.points(), Rat(0));
    for (int g1 = 0; g1 < G.order(); ++g1) {
      Observable a = pullback(f1, base_.perm(0, g1));
      Observable c12 = pullback(f12, base_.perm(0, g1));
      for (int g2 = 0; g2 < G.order(); ++g2) {
        Observable b = pullback(f2, base_.perm(1, g2));
        Observable c = pullback(c12, base_.perm(1, g2));
        Observable term = pointwise_mul(pointwise_mul(f0, a), pointwise_mul(b, c));
        for (int x = 0; x < base_.points(); ++x) acc[x] += term[x];
      }
    }
    Rat inv = rat_of(1, static_cast<long>(G.order()) * G.order());
    for (Rat& v : acc) v *= inv;
    return acc;
  }

  /// The same pointwise average collapsed through the mean ergodic theorem:
  /// the inner sweep is a conditional expectation onto the second invariant
  /// factor.  Exact alternative route used for cross-checks.
  Observable cubic_average_factored(const Observable& f0, const Observable& f1,
                                    const Observable& f2, const Observable& f12) const {
    const FiniteGroup& G = *base_.group();
    Partition I2 = invariant_partition(base_, {1});
    Observable acc(base_.points(), Rat(0));
    for (int g1 = 0; g1 < G.order(); ++g1) {
      Observable a = pullback(f1, base_.perm(0, g1));
      Observable inner = cond_exp(base_, pointwise_mul(f2, pullback(f12, base_.perm(0, g1))), I2);
      Observable term = pointwise_mul(pointwise_mul(f0, a), inner);
      for (int x = 0; x < base_.points(); ++x) acc[x] += term[x];
    }
    for (Rat& v : acc) v /= G.order();
    return acc;
  }

  /// Materializes the support as a finite system with the two side actions;
  /// proj maps each new point to its {1,2}-coordinate in the base.
  FiniteMPS as_mps(std::vector<int>* proj = nullptr) const {
    std::vector<CubePoint> pts;
    std::vector<Rat> mass;
    std::map<CubePoint, int> index;
    for (const auto& [t, m] : measure_) {
      index[t] = static_cast<int>(pts.size());
      pts.push_back(t);
      mass.push_back(m);
    }
    const FiniteGroup& G = *base_.group();
    std::vector<Action> actions(2);
    for (int i = 1; i <= 2; ++i) {
      Action act(G.order(), std::vector<int>(pts.size()));
      for (int g = 0; g < G.order(); ++g)
        for (size_t p = 0; p < pts.size(); ++p) {
          auto it = index.find(side(i, g, pts[p]));
          if (it == index.end())
            throw DomainError("cube support is not closed under the side transformations");
          act[g][p] = it->second;
        }
      actions[i - 1] = std::move(act);
    }
    std::vector<std::string> labels(pts.size());
    for (size_t p = 0; p < pts.size(); ++p) {
      std::ostringstream os;
      os << "(" << base_.labels()[pts[p][0]] << "," << base_.labels()[pts[p][1]] << ","
         << base_.labels()[pts[p][2]] << "," << base_.labels()[pts[p][3]] << ")";
      labels[p] = os.str();
    }
    if (proj) {
      proj->resize(pts.size());
      for (size_t p = 0; p < pts.size(); ++p) (*proj)[p] = pts[p][3];
    }
    return FiniteMPS(base_.group(), std::move(labels), std::move(mass), std::move(actions));
  }

 private:
  FiniteMPS base_;
  std::map<CubePoint, Rat> measure_;
};

inline CubeSystem cube_measure(const FiniteMPS& X) { return CubeSystem(X); }

struct CubeVerification {
  bool total_mass_one = false;
  bool marginals_match = false;
  bool invariant = false;
  bool sides_commute = false;
  std::string detail;
  bool ok() const { return total_mass_one && marginals_match && invariant && sides_commute; }
};

inline CubeVerification verify_cube(const CubeSystem& C) {
  CubeVerification rep;
  const FiniteMPS& X = C.base();
  const FiniteGroup& G = *X.group();

  Rat total(0);
  for (const auto& [t, m] : C.measure()) total += m;
  rep.total_mass_one = total == 1;
  if (!rep.total_mass_one) rep.detail = "total mass " + rat_str(total);

  rep.marginals_match = true;
  for (int coord = 0; coord < 4 && rep.marginals_match; ++coord) {
    std::vector<Rat> marg(X.points(), Rat(0));
    for (const auto& [t, m] : C.measure()) marg[t[coord]] += m;
    for (int x = 0; x < X.points(); ++x)
      if (marg[x] != X.mass()[x]) {
        rep.marginals_match = false;
        rep.detail = "marginal " + std::to_string(coord) + " differs at point " + X.labels()[x];
        break;
      }
  }

  rep.invariant = true;
  for (int i = 1; i <= 2 && rep.invariant; ++i)
    for (int g = 0; g < G.order() && rep.invariant; ++g)
      for (const auto& [t, m] : C.measure())
        if (C.mass(C.side(i, g, t)) != m) {
          rep.invariant = false;
          rep.detail = "side " + std::to_string(i) + " at g=" + std::to_string(g) +
                       " does not preserve the cube measure";
          break;
        }

  rep.sides_commute = true;
  for (int g = 0; g < G.order() && rep.sides_commute; ++g)
    for (int h = 0; h < G.order() && rep.sides_commute; ++h)
      for (const auto& [t, m] : C.measure())
        if (C.side(1, g, C.side(2, h, t)) != C.side(2, h, C.side(1, g, t))) {
          rep.sides_commute = false;
          rep.detail = "side transformations do not commute at (g,h)=(" + std::to_string(g) +
                       "," + std::to_string(h) + ")";
          break;
        }
  return rep;
}

/// Evaluates the cube integral along the terms of two averaging schemes and
/// returns the per-term values together with the limit; the deviation of
/// each partial value from the limit is bounded by the schemes' distance
/// from uniform, which is how descriptor independence becomes testable.
struct CubeAlongReport {
  std::vector<Rat> partial;  // value at (Phi_n, Psi_n)
  Rat limit;
};

inline CubeAlongReport cube_integral_along(const FiniteMPS& X, const Observable& f0,
                                           const Observable& f1, const Observable& f2,
                                           const Observable& f12, const ReiterSequence& Phi,
                                           const ReiterSequence& Psi) {
  require_same_group(X.group(), Phi.group);
  require_same_group(X.group(), Psi.group);
  require_reiter(Phi);
  require_reiter(Psi);
  const FiniteGroup& G = *X.group();
  // base integrals per (g1, g2)
  std::vector<std::vector<Rat>> val(G.order(), std::vector<Rat>(G.order()));
  for (int g1 = 0; g1 < G.order(); ++g1) {
    Observable a = pullback(f1, X.perm(0, g1));
    Observable c12 = pullback(f12, X.perm(0, g1));
    for (int g2 = 0; g2 < G.order(); ++g2) {
      Observable b = pullback(f2, X.perm(1, g2));
      Observable c = pullback(c12, X.perm(1, g2));
      val[g1][g2] = integral(X, pointwise_mul(pointwise_mul(f0, a), pointwise_mul(b, c)));
    }
  }
  CubeAlongReport rep;
  size_t terms = std::min(Phi.terms.size(), Psi.terms.size());
  for (size_t n = 0; n < terms; ++n) {
    Rat s(0);
    for (int g1 = 0; g1 < G.order(); ++g1) {
      if (Phi.terms[n][g1] == 0) continue;
      for (int g2 = 0; g2 < G.order(); ++g2)
        s += Phi.terms[n][g1] * Psi.terms[n][g2] * val[g1][g2];
    }
    rep.partial.push_back(s);
  }
  rep.limit = 0;
  for (int g1 = 0; g1 < G.order(); ++g1)
    for (int g2 = 0; g2 < G.order(); ++g2) rep.limit += val[g1][g2];
  rep.limit /= static_cast<long>(G.order()) * G.order();
  return rep;
}

struct MagicReport {
  bool magic = false;
  Partition join_partition;
  // witness when not magic: a point whose orthogonal part is nonzero, a
  // test indicator, and the positive seminorm value
  int witness_point = -1;
  int witness_h = -1;
  Rat witness_seminorm{0};
  std::string detail;
};

/**
 * A system with two commuting actions is magic when every observable
 * orthogonal to the join I_1 v I_2 already vanishes, equivalently when the
 * join is the full partition modulo null sets.  The check computes, for a
 * spanning family of orthogonal parts f and indicator test functions h, the
 * uniform average over g of || E(h * (f o T_1^g) | I_2) ||^2 and reports a
 * strictly positive value as the witness of failure; linearity in h makes
 * the indicator family sufficient.
 */
inline MagicReport magic_check(const FiniteMPS& X) {
  if (X.k() < 2) throw PreconditionError("magic check needs two commuting actions");
  const FiniteGroup& G = *X.group();
  MagicReport rep;
  Partition I2 = invariant_partition(X, {1});
  rep.join_partition = join(invariant_partition(X, {0}), invariant_partition(X, {1}));

  auto seminorm = [&](const Observable& f, const Observable& h) {
    Rat s(0);
    for (int g = 0; g < G.order(); ++g) {
      Observable e = cond_exp(X, pointwise_mul(h, pullback(f, X.perm(0, g))), I2);
      s += norm2_sq(X, e);
    }
    return Rat(s / G.order());
  };

  rep.magic = true;
  for (int x = 0; x < X.points() && rep.magic; ++x) {
    if (X.mass()[x] == 0) continue;
    Observable fx = indicator(X, {x});
    Observable f = fx;
    Observable e = cond_exp(X, fx, rep.join_partition);
    for (int y = 0; y < X.points(); ++y) f[y] -= e[y];
    if (zero_ae(X, f)) continue;
    rep.magic = false;
    rep.witness_point = x;
    for (int y = 0; y < X.points(); ++y) {
      if (X.mass()[y] == 0) continue;
      Rat s = seminorm(f, indicator(X, {y}));
      if (s > 0) {
        rep.witness_h = y;
        rep.witness_seminorm = s;
        break;
      }
    }
    std::ostringstream os;
    os << "orthogonal part of point " << X.labels()[x] << " is nonzero";
    if (rep.witness_h >= 0)
      os << "; seminorm against indicator of " << X.labels()[rep.witness_h] << " is "
         << rat_str(rep.witness_seminorm);
    rep.detail = os.str();
  }
  return rep;
}

struct SatednessReport {
  bool structural_ok = false;
  bool sated = false;
  std::string detail;
};

/**
 * Relative-independence check behind satedness: given an extension with a
 * point projection onto X, every lifted observable orthogonal to the lifted
 * join of invariant factors of X must stay orthogonal to the join of
 * invariant factors of the extension.  Verified exactly on the spanning
 * family of lifted fiber indicators.
 */
inline SatednessReport satedness_check(const FiniteMPS& X, const FiniteMPS& ext,
                                       const std::vector<int>& proj,
                                       std::vector<int> selection = {}) {
  SatednessReport rep;
  require_same_group(X.group(), ext.group());
  if (static_cast<int>(proj.size()) != ext.points())
    throw DomainError("satedness: projection length != extension point count");
  for (int e = 0; e < ext.points(); ++e)
    if (proj[e] < 0 || proj[e] >= X.points())
      throw DomainError("satedness: projection image out of range");
  if (ext.k() < X.k())
    throw PreconditionError("satedness: extension has fewer actions than the base");
  if (selection.empty()) {
    selection.resize(X.k());
    std::iota(selection.begin(), selection.end(), 0);
  }

  // structural: measure pushforward and intertwining
  std::vector<Rat> push(X.points(), Rat(0));
  for (int e = 0; e < ext.points(); ++e) push[proj[e]] += ext.mass()[e];
  for (int x = 0; x < X.points(); ++x)
    if (push[x] != X.mass()[x]) {
      rep.detail = "projection does not push the measure onto the base measure";
      return rep;
    }
  for (int i : selection)
    for (int g = 0; g < X.group()->order(); ++g)
      for (int e = 0; e < ext.points(); ++e)
        if (ext.mass()[e] != 0 && proj[ext.perm(i, g)[e]] != X.perm(i, g)[proj[e]]) {
          rep.detail = "projection does not intertwine action " + std::to_string(i);
          return rep;
        }
  rep.structural_ok = true;

  auto join_of = [&](const FiniteMPS& S) {
    Partition J = invariant_partition(S, {selection[0]});
    for (size_t i = 1; i < selection.size(); ++i)
      J = join(J, invariant_partition(S, {selection[i]}));
    return J;
  };
  Partition inv_base = join_of(X);
  Partition inv_ext = join_of(ext);
  // lift of Inv(X) through the projection
  std::vector<int> lifted(ext.points());
  for (int e = 0; e < ext.points(); ++e) lifted[e] = inv_base.block_of(proj[e]);
  Partition lift_inv(std::move(lifted));

  rep.sated = true;
  for (int x = 0; x < X.points() && rep.sated; ++x) {
    Observable fiber(ext.points(), Rat(0));
    for (int e = 0; e < ext.points(); ++e)
      if (proj[e] == x) fiber[e] = 1;
    Observable part = fiber;
    Observable eb = cond_exp(ext, fiber, lift_inv);
    for (int e = 0; e < ext.points(); ++e) part[e] -= eb[e];
    if (!zero_ae(ext, cond_exp(ext, part, inv_ext))) {
      rep.sated = false;
      rep.detail = "lifted fiber of " + X.labels()[x] +
                   " has orthogonal part correlated with the extension invariants";
    }
  }
  return rep;
}

}  // namespace recurlab
