#pragma once

#include <array>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "recurlab/mps.hpp"

namespace recurlab {

using TriplePoint = std::array<int, 3>;

/**
 * The coupling of three copies of a system with three commuting actions:
 * the pushforward of mu under x |-> (x, T_2^g x, T_2^g T_3^g x) averaged
 * over g.  It carries three commuting actions
 *
 *   S_1 = T_1 x T_1 x T_1,   S_2 = Id x T_2 x T_23,   S_3 = T_23 x T_3 x Id,
 *
 * and the projection onto the second coordinate intertwines (S_1,S_2,S_3)
 * with (T_1,T_2,T_3).
 */
class CoupledSystem {
 public:
  explicit CoupledSystem(FiniteMPS base) : base_(std::move(base)) {
    if (base_.k() < 3) throw PreconditionError("coupling needs three commuting actions");
    const FiniteGroup& G = *base_.group();
    Rat unit = rat_of(1, G.order());
    for (int g = 0; g < G.order(); ++g) {
      const auto& p2 = base_.perm(1, g);
      std::vector<int> p23 = base_.composite_perm({1, 2}, g);
      for (int x = 0; x < base_.points(); ++x) {
        if (base_.mass()[x] == 0) continue;
        measure_[TriplePoint{x, p2[x], p23[x]}] += base_.mass()[x] * unit;
      }
    }
  }

  const FiniteMPS& base() const { return base_; }
  const std::map<TriplePoint, Rat>& measure() const { return measure_; }

  Rat mass(const TriplePoint& t) const {
    auto it = measure_.find(t);
    return it == measure_.end() ? Rat(0) : it->second;
  }

  /// Point map of the i-th coupled action (i in {1,2,3}) at element g.
  TriplePoint coupled(int i, int g, const TriplePoint& t) const {
    const auto& p1 = base_.perm(0, g);
    const auto& p2 = base_.perm(1, g);
    const auto& p3 = base_.perm(2, g);
    switch (i) {
      case 1:
        return {p1[t[0]], p1[t[1]], p1[t[2]]};
      case 2:
        return {t[0], p2[t[1]], p2[p3[t[2]]]};
      case 3:
        return {p2[p3[t[0]]], p3[t[1]], t[2]};
      default:
        throw DomainError("coupled action index must be 1, 2 or 3");
    }
  }

  Rat integral(const Observable& f0, const Observable& f1, const Observable& f2) const {
    Rat s(0);
    for (const auto& [t, m] : measure_) s += m * f0[t[0]] * f1[t[1]] * f2[t[2]];
    return s;
  }

  /// Direct evaluation of the defining average, bypassing the stored map.
  Rat direct_average(const Observable& f0, const Observable& f1, const Observable& f2) const {
    const FiniteGroup& G = *base_.group();
    Rat s(0);
    for (int g = 0; g < G.order(); ++g) {
      Observable a = pullback(f1, base_.perm(1, g));
      Observable b = pullback(f2, base_.composite_perm({1, 2}, g));
      s += recurlab::integral(base_, pointwise_mul(f0, pointwise_mul(a, b)));
    }
    return s / G.order();
  }

  /// Materializes the support with the three coupled actions; proj maps
  /// each new point to its second coordinate.
  FiniteMPS as_mps(std::vector<int>* proj = nullptr) const {
    std::vector<TriplePoint> pts;
    std::vector<Rat> mass;
    std::map<TriplePoint, int> index;
    for (const auto& [t, m] : measure_) {
      index[t] = static_cast<int>(pts.size());
      pts.push_back(t);
      mass.push_back(m);
    }
    const FiniteGroup& G = *base_.group();
    std::vector<Action> actions(3);
    for (int i = 1; i <= 3; ++i) {
      Action act(G.order(), std::vector<int>(pts.size()));
      for (int g = 0; g < G.order(); ++g)
        for (size_t p = 0; p < pts.size(); ++p) {
          auto it = index.find(coupled(i, g, pts[p]));
          if (it == index.end())
            throw DomainError("coupling support is not closed under the coupled actions");
          act[g][p] = it->second;
        }
      actions[i - 1] = std::move(act);
    }
    std::vector<std::string> labels(pts.size());
    for (size_t p = 0; p < pts.size(); ++p) {
      std::ostringstream os;
      os << "(" << base_.labels()[pts[p][0]] << "," << base_.labels()[pts[p][1]] << ","
         << base_.labels()[pts[p][2]] << ")";
      labels[p] = os.str();
    }
    if (proj) {
      proj->resize(pts.size());
      for (size_t p = 0; p < pts.size(); ++p) (*proj)[p] = pts[p][1];
    }
    return FiniteMPS(base_.group(), std::move(labels), std::move(mass), std::move(actions));
  }

 private:
  FiniteMPS base_;
  std::map<TriplePoint, Rat> measure_;
};

inline CoupledSystem furstenberg_coupling(const FiniteMPS& X) { return CoupledSystem(X); }

struct CouplingVerification {
  bool total_mass_one = false;
  bool marginals_match = false;
  bool invariant = false;
  bool actions_commute = false;
  bool projection_intertwines = false;
  std::string detail;
  bool ok() const {
    return total_mass_one && marginals_match && invariant && actions_commute &&
           projection_intertwines;
  }
};

inline CouplingVerification verify_coupling(const CoupledSystem& C) {
  CouplingVerification rep;
  const FiniteMPS& X = C.base();
  const FiniteGroup& G = *X.group();

  Rat total(0);
  for (const auto& [t, m] : C.measure()) total += m;
  rep.total_mass_one = total == 1;

  rep.marginals_match = true;
  for (int coord = 0; coord < 3 && rep.marginals_match; ++coord) {
    std::vector<Rat> marg(X.points(), Rat(0));
    for (const auto& [t, m] : C.measure()) marg[t[coord]] += m;
    for (int x = 0; x < X.points(); ++x)
      if (marg[x] != X.mass()[x]) {
        rep.marginals_match = false;
        rep.detail = "marginal " + std::to_string(coord) + " differs at " + X.labels()[x];
      }
  }

  rep.invariant = true;
  for (int i = 1; i <= 3 && rep.invariant; ++i)
    for (int g = 0; g < G.order() && rep.invariant; ++g)
      for (const auto& [t, m] : C.measure())
        if (C.mass(C.coupled(i, g, t)) != m) {
          rep.invariant = false;
          rep.detail = "coupled action " + std::to_string(i) + " at g=" + std::to_string(g) +
                       " does not preserve the coupling";
          break;
        }

  rep.actions_commute = true;
  for (int i = 1; i <= 3 && rep.actions_commute; ++i)
    for (int j = i + 1; j <= 3 && rep.actions_commute; ++j)
      for (int g = 0; g < G.order() && rep.actions_commute; ++g)
        for (int h = 0; h < G.order() && rep.actions_commute; ++h)
          for (const auto& [t, m] : C.measure())
            if (C.coupled(i, g, C.coupled(j, h, t)) != C.coupled(j, h, C.coupled(i, g, t))) {
              rep.actions_commute = false;
              rep.detail = "coupled actions " + std::to_string(i) + "," + std::to_string(j) +
                           " do not commute";
              break;
            }

  rep.projection_intertwines = true;
  for (int i = 1; i <= 3 && rep.projection_intertwines; ++i)
    for (int g = 0; g < G.order() && rep.projection_intertwines; ++g)
      for (const auto& [t, m] : C.measure())
        if (C.coupled(i, g, t)[1] != X.perm(i - 1, g)[t[1]]) {
          rep.projection_intertwines = false;
          rep.detail = "second-coordinate projection fails for action " + std::to_string(i);
          break;
        }
  return rep;
}

struct K3Report {
  Observable average;        // avg_g (f1 o T1^g)(f2 o T12^g)(f3 o T123^g)
  Rat norm_sq_direct;        // squared L2(mu)-norm of the average
  Rat norm_sq_coupling;      // squared norm of E(f1 x f2 x f3 | joint factor) in the coupling
  bool routes_agree = false;
  bool hypothesis_zero = false;  // the coupled conditional expectation vanishes
  bool conclusion_zero = false;  // the average vanishes
  bool lift_implication_ok = false;
};

/**
 * The three-term average along (T_1, T_12, T_123) together with its
 * coupling-route evaluation: the squared norm of the average equals the
 * squared norm of E(f1 x f2 x f3 | I) in the coupling, where I is the
 * invariant factor of the combined action g |-> S_1^g S_2^g.  When that
 * conditional expectation vanishes the average must vanish; both sides of
 * the implication are computed, never assumed.
 */
inline K3Report k3_average(const FiniteMPS& X, const Observable& f1, const Observable& f2,
                           const Observable& f3) {
  if (X.k() < 3) throw PreconditionError("k3 average needs three commuting actions");
  const FiniteGroup& G = *X.group();
  K3Report rep;

  rep.average.assign(X.points(), Rat(0));
  for (int g = 0; g < G.order(); ++g) {
    Observable a = pullback(f1, X.perm(0, g));
    Observable b = pullback(f2, X.composite_perm({0, 1}, g));
    Observable c = pullback(f3, X.composite_perm({0, 1, 2}, g));
    Observable term = pointwise_mul(a, pointwise_mul(b, c));
    for (int x = 0; x < X.points(); ++x) rep.average[x] += term[x];
  }
  for (Rat& v : rep.average) v /= G.order();
  rep.norm_sq_direct = norm2_sq(X, rep.average);

  CoupledSystem C(X);
  std::vector<int> proj;
  FiniteMPS cm = C.as_mps(&proj);
  // invariant factor of the combined action g |-> S_1^g S_2^g on the coupling
  std::vector<int> parent(cm.points());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int g = 0; g < G.order(); ++g)
    for (int p = 0; p < cm.points(); ++p) {
      int q = cm.perm(0, g)[cm.perm(1, g)[p]];
      int a = find(p), b = find(q);
      if (a != b) parent[a] = b;
    }
  std::vector<int> blocks(cm.points());
  for (int p = 0; p < cm.points(); ++p) blocks[p] = find(p);
  Partition I12(std::move(blocks));

  // tensor observable on the materialized support
  Observable tensor(cm.points());
  {
    int p = 0;
    for (const auto& [t, m] : C.measure()) tensor[p++] = f1[t[0]] * f2[t[1]] * f3[t[2]];
  }
  Observable cexp = cond_exp(cm, tensor, I12);
  rep.norm_sq_coupling = norm2_sq(cm, cexp);
  rep.routes_agree = rep.norm_sq_direct == rep.norm_sq_coupling;
  rep.hypothesis_zero = zero_ae(cm, cexp);
  rep.conclusion_zero = zero_ae(X, rep.average);
  rep.lift_implication_ok = !rep.hypothesis_zero || rep.conclusion_zero;
  return rep;
}

}  // namespace recurlab
