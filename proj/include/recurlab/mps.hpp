#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "recurlab/group.hpp"
#include "recurlab/partition.hpp"
#include "recurlab/rational.hpp"

namespace recurlab {

/// A function on the points of a system, exact rational values.
using Observable = std::vector<Rat>;

/// One group action: perms[g][x] is the image of point x under the point
/// map of g.  Point maps compose as a left action, perms[g*h] = perms[g]
/// after perms[h]; the induced operator f |-> f(perms[g][.]) on observables
/// is then an anti-action.
using Action = std::vector<std::vector<int>>;

/**
 * A finite measure-preserving system: rational point masses summing to 1
 * and k commuting actions of one finite group.  All structural axioms
 * (homomorphism property, mass preservation, pairwise commutation) are
 * verified exhaustively on construction.
 */
class FiniteMPS {
 public:
  FiniteMPS(GroupPtr group, std::vector<std::string> labels, std::vector<Rat> mass,
            std::vector<Action> actions)
      : group_(std::move(group)),
        labels_(std::move(labels)),
        mass_(std::move(mass)),
        actions_(std::move(actions)) {
    if (!group_) throw DomainError("system: null group");
    n_ = static_cast<int>(mass_.size());
    if (n_ == 0) throw DomainError("system: no points");
    if (labels_.empty()) {
      labels_.resize(n_);
      for (int x = 0; x < n_; ++x) labels_[x] = "p" + std::to_string(x);
    }
    if (static_cast<int>(labels_.size()) != n_)
      throw DomainError("system: label/mass length mismatch");
    Rat total(0);
    for (const Rat& m : mass_) {
      if (m < 0) throw DomainError("system: negative mass");
      total += m;
    }
    if (total != 1) throw DomainError("system: total mass is " + rat_str(total) + ", not 1");
    if (actions_.empty()) throw DomainError("system: needs at least one action");
    validate_actions();
  }

  const GroupPtr& group() const { return group_; }
  int points() const { return n_; }
  int k() const { return static_cast<int>(actions_.size()); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<Rat>& mass() const { return mass_; }
  const Action& action(int i) const { return actions_.at(i); }

  /// Point map of T_i^g.
  const std::vector<int>& perm(int i, int g) const { return actions_.at(i).at(g); }

  /// Point map of the composite over a selection of actions, all at the
  /// same element g (the selection may be empty: identity).
  std::vector<int> composite_perm(const std::vector<int>& selection, int g) const {
    std::vector<int> p(n_);
    std::iota(p.begin(), p.end(), 0);
    for (int i : selection) {
      const auto& q = perm(i, g);
      for (int x = 0; x < n_; ++x) p[x] = q[p[x]];
    }
    return p;
  }

  /// Index of the labeled point, -1 when absent.
  int label_index(const std::string& label) const {
    for (int x = 0; x < n_; ++x)
      if (labels_[x] == label) return x;
    return -1;
  }

 private:
  void validate_actions() {
    const FiniteGroup& G = *group_;
    for (const Action& act : actions_) {
      if (static_cast<int>(act.size()) != G.order())
        throw DomainError("system: action not defined on every group element");
      for (const auto& p : act) {
        if (static_cast<int>(p.size()) != n_)
          throw DomainError("system: permutation length != point count");
        std::vector<char> hit(n_, 0);
        for (int x : p) {
          if (x < 0 || x >= n_ || hit[x]) throw DomainError("system: map is not a permutation");
          hit[x] = 1;
        }
      }
      for (int x = 0; x < n_; ++x)
        if (act[G.id()][x] != x) throw DomainError("system: identity element must act trivially");
      for (int g = 0; g < G.order(); ++g)
        for (int h = 0; h < G.order(); ++h) {
          const auto& pg = act[g];
          const auto& ph = act[h];
          const auto& pgh = act[G.mul(g, h)];
          for (int x = 0; x < n_; ++x)
            if (pgh[x] != pg[ph[x]])
              throw DomainError("system: action is not a homomorphism into permutations");
        }
      for (int g = 0; g < G.order(); ++g)
        for (int x = 0; x < n_; ++x)
          if (mass_[act[g][x]] != mass_[x])
            throw DomainError("system: action does not preserve the point masses");
    }
    for (size_t i = 0; i < actions_.size(); ++i)
      for (size_t j = i + 1; j < actions_.size(); ++j)
        for (int g = 0; g < G.order(); ++g)
          for (int h = 0; h < G.order(); ++h)
            for (int x = 0; x < n_; ++x)
              if (actions_[i][g][actions_[j][h][x]] != actions_[j][h][actions_[i][g][x]])
                throw DomainError("system: actions " + std::to_string(i) + " and " +
                                  std::to_string(j) + " do not commute");
  }

  GroupPtr group_;
  std::vector<std::string> labels_;
  std::vector<Rat> mass_;
  std::vector<Action> actions_;
  int n_ = 0;
};

inline Observable constant_observable(const FiniteMPS& X, const Rat& c) {
  return Observable(X.points(), c);
}

inline Observable indicator(const FiniteMPS& X, const std::vector<int>& pts) {
  Observable f(X.points(), Rat(0));
  for (int x : pts) {
    if (x < 0 || x >= X.points()) throw DomainError("indicator: point out of range");
    f[x] = 1;
  }
  return f;
}

/// Indicator from a membership mask indexed by point.
inline Observable indicator_mask(const FiniteMPS& X, const std::vector<char>& mask) {
  if (static_cast<int>(mask.size()) != X.points())
    throw DomainError("indicator: mask is not indexed by the points");
  Observable f(X.points(), Rat(0));
  for (int x = 0; x < X.points(); ++x)
    if (mask[x]) f[x] = 1;
  return f;
}

/// f composed with the point map: (pullback f)(x) = f(p[x]).
inline Observable pullback(const Observable& f, const std::vector<int>& p) {
  Observable g(f.size());
  for (size_t x = 0; x < f.size(); ++x) g[x] = f[p[x]];
  return g;
}

inline Observable pointwise_mul(const Observable& a, const Observable& b) {
  if (a.size() != b.size()) throw DomainError("observable size mismatch");
  Observable c(a.size());
  for (size_t x = 0; x < a.size(); ++x) c[x] = a[x] * b[x];
  return c;
}

inline Rat integral(const FiniteMPS& X, const Observable& f) {
  if (static_cast<int>(f.size()) != X.points()) throw DomainError("observable size mismatch");
  Rat s(0);
  for (int x = 0; x < X.points(); ++x) s += X.mass()[x] * f[x];
  return s;
}

inline Rat inner(const FiniteMPS& X, const Observable& f, const Observable& g) {
  return integral(X, pointwise_mul(f, g));
}

inline Rat norm2_sq(const FiniteMPS& X, const Observable& f) { return inner(X, f, f); }

/// Equality up to mu-null sets.
inline bool equal_ae(const FiniteMPS& X, const Observable& f, const Observable& g) {
  for (int x = 0; x < X.points(); ++x)
    if (X.mass()[x] != 0 && f[x] != g[x]) return false;
  return true;
}

inline bool zero_ae(const FiniteMPS& X, const Observable& f) {
  return equal_ae(X, f, constant_observable(X, Rat(0)));
}

/**
 * Orbit partition of the subgroup of permutations spanned by the selected
 * actions.  Its blocks generate exactly the sigma-algebra of sets invariant
 * under every selected action; for a single action i this is the invariant
 * factor of T_i, for several it realizes the intersection (meet) of their
 * invariant factors.  An empty selection yields the singleton partition
 * with a warning provenance.
 */
inline Partition invariant_partition(const FiniteMPS& X, const std::vector<int>& selection) {
  if (selection.empty()) return Partition::singletons(X.points(), "warning: empty selection");
  std::vector<int> parent(X.points());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int i : selection) {
    if (i < 0 || i >= X.k()) throw DomainError("invariant_partition: action index out of range");
    for (int g = 0; g < X.group()->order(); ++g)
      for (int x = 0; x < X.points(); ++x) {
        int a = find(x), b = find(X.perm(i, g)[x]);
        if (a != b) parent[a] = b;
      }
  }
  std::vector<int> b(X.points());
  for (int x = 0; x < X.points(); ++x) b[x] = find(x);
  return Partition(std::move(b));
}

/// On a finite carrier every eigenfunction lives in a finite-dimensional
/// invariant subspace, so the compact (Kronecker-type) factor of any
/// selection of actions degenerates to the full sigma-algebra; the
/// provenance records the degeneration.
inline Partition kronecker_factor(const FiniteMPS& X, const std::vector<int>& selection) {
  std::string tag = "kronecker-degenerate(";
  for (size_t i = 0; i < selection.size(); ++i)
    tag += (i ? "," : "") + std::to_string(selection[i]);
  tag += "): finite carrier";
  return Partition::singletons(X.points(), tag);
}

/// Block average with the null convention: blocks of mass zero get 0.
inline Observable cond_exp(const FiniteMPS& X, const Observable& f, const Partition& P) {
  if (P.size() != X.points()) throw DomainError("cond_exp: partition/system size mismatch");
  if (static_cast<int>(f.size()) != X.points()) throw DomainError("cond_exp: observable size");
  Observable out(X.points(), Rat(0));
  for (const auto& blk : P.blocks()) {
    Rat m(0), s(0);
    for (int x : blk) {
      m += X.mass()[x];
      s += X.mass()[x] * f[x];
    }
    Rat v = (m == 0) ? Rat(0) : Rat(s / m);
    for (int x : blk) out[x] = v;
  }
  return out;
}

inline bool measurable(const Observable& f, const Partition& P) {
  for (const auto& blk : P.blocks())
    for (size_t i = 1; i < blk.size(); ++i)
      if (f[blk[i]] != f[blk[0]]) return false;
  return true;
}

/// (1/|G|) sum over g of f composed with the selected composite action.
inline Observable group_average(const FiniteMPS& X, const Observable& f,
                                const std::vector<int>& selection) {
  Observable s(X.points(), Rat(0));
  for (int g = 0; g < X.group()->order(); ++g) {
    Observable fg = pullback(f, X.composite_perm(selection, g));
    for (int x = 0; x < X.points(); ++x) s[x] += fg[x];
  }
  for (Rat& v : s) v /= X.group()->order();
  return s;
}

/// Average over independent sweeps of each selected action (the full
/// product-group average); equals cond_exp onto the joint invariant factor.
inline Observable joint_group_average(const FiniteMPS& X, const Observable& f,
                                      const std::vector<int>& selection) {
  Observable cur = f;
  for (int i : selection) cur = group_average(X, cur, {i});
  return cur;
}

struct ErgodicityReport {
  bool ergodic = false;
  Partition meet_partition;  // joint orbit partition of all actions
};

inline ErgodicityReport is_ergodic(const FiniteMPS& X) {
  std::vector<int> all(X.k());
  std::iota(all.begin(), all.end(), 0);
  ErgodicityReport rep;
  rep.meet_partition = invariant_partition(X, all);
  int heavy = 0;
  for (const auto& blk : rep.meet_partition.blocks()) {
    Rat m(0);
    for (int x : blk) m += X.mass()[x];
    if (m > 0) ++heavy;
  }
  rep.ergodic = heavy <= 1;
  return rep;
}

/// c_g = integral of f0 * (f1 o T1^g) * (f2 o T1^g T2^g).
inline Rat correlation(const FiniteMPS& X, const Observable& f0, const Observable& f1,
                       const Observable& f2, int g) {
  if (X.k() < 2) throw PreconditionError("correlation needs two commuting actions");
  Observable t1 = pullback(f1, X.perm(0, g));
  Observable t12 = pullback(f2, X.composite_perm({0, 1}, g));
  return integral(X, pointwise_mul(f0, pointwise_mul(t1, t12)));
}

struct IdentityCheck {
  bool ok = true;
  std::string detail;
};

/**
 * Exact verification that the invariant factors of two commuting actions
 * are relatively independent over their meet: for block indicators f1 of
 * I_1, f2 of I_2 and f12 of the diagonal factor I_{1,2},
 *
 *   E(f1 f2  | I_1 meet I_2) = E(f1|I_2) E(f2|I_1)
 *   E(f1 f12 | I_1 meet I_2) = E(f1|I_2) E(f12|I_1)
 *   E(f2 f12 | I_1 meet I_2) = E(f2|I_1) E(f12|I_2)
 *
 * hold pointwise almost everywhere.  Linearity extends the check from the
 * indicator bases to all measurable observables.
 */
inline IdentityCheck relative_independence_check(const FiniteMPS& X) {
  if (X.k() < 2) throw PreconditionError("relative independence needs two commuting actions");
  Partition I1 = invariant_partition(X, {0});
  Partition I2 = invariant_partition(X, {1});
  Partition M = invariant_partition(X, {0, 1});
  // diagonal action g |-> T_1^g T_2^g
  std::vector<int> parent(X.points());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int g = 0; g < X.group()->order(); ++g) {
    auto p = X.composite_perm({0, 1}, g);
    for (int x = 0; x < X.points(); ++x) {
      int a = find(x), b = find(p[x]);
      if (a != b) parent[a] = b;
    }
  }
  std::vector<int> diag(X.points());
  for (int x = 0; x < X.points(); ++x) diag[x] = find(x);
  Partition I12(std::move(diag));

  IdentityCheck out;
  auto run = [&](const Partition& A, const Partition& B, const Partition& condA,
                 const Partition& condB, const char* name) {
    for (int a = 0; a < A.block_count() && out.ok; ++a)
      for (int b = 0; b < B.block_count() && out.ok; ++b) {
        Observable fa = indicator(X, A.block(a));
        Observable fb = indicator(X, B.block(b));
        Observable lhs = cond_exp(X, pointwise_mul(fa, fb), M);
        Observable rhs = pointwise_mul(cond_exp(X, fa, condA), cond_exp(X, fb, condB));
        if (!equal_ae(X, lhs, rhs)) {
          out.ok = false;
          std::ostringstream os;
          os << "pair " << name << ", blocks (" << a << "," << b << ")";
          out.detail = os.str();
        }
      }
  };
  run(I1, I2, I2, I1, "I1,I2");
  if (out.ok) run(I1, I12, I2, I1, "I1,I12");
  if (out.ok) run(I2, I12, I1, I2, "I2,I12");
  return out;
}

/**
 * For ergodic X, f1 invariant under the first action and f2 under the
 * second, checks the exact identity
 *
 *   integral f0 f1 f2 = integral f0 E(f1 | I_1 meet K) E(f2 | I_2 meet K)
 *
 * where K is the (degenerate) compact factor.  On a finite carrier the
 * meets collapse to I_1, I_2 themselves, so the identity doubles as a
 * consistency check of the conditional-expectation algebra.
 */
struct TrilinearReport {
  Rat lhs, rhs;
  bool ok = false;
};

inline TrilinearReport trilinear_form_check(const FiniteMPS& X, const Observable& f0,
                                            const Observable& f1, const Observable& f2) {
  if (X.k() < 2) throw PreconditionError("trilinear check needs two commuting actions");
  auto erg = is_ergodic(X);
  if (!erg.ergodic)
    throw PreconditionError("trilinear check: system is not ergodic (joint orbit partition has " +
                            std::to_string(erg.meet_partition.block_count()) + " blocks)");
  Partition I1 = invariant_partition(X, {0});
  Partition I2 = invariant_partition(X, {1});
  if (!measurable(f1, I1))
    throw PreconditionError("trilinear check: f1 is not invariant under the first action");
  if (!measurable(f2, I2))
    throw PreconditionError("trilinear check: f2 is not invariant under the second action");
  Partition K2 = kronecker_factor(X, {1});
  Partition K1 = kronecker_factor(X, {0});
  TrilinearReport rep;
  rep.lhs = integral(X, pointwise_mul(f0, pointwise_mul(f1, f2)));
  Observable e1 = cond_exp(X, f1, meet(I1, K2));
  Observable e2 = cond_exp(X, f2, meet(I2, K1));
  rep.rhs = integral(X, pointwise_mul(f0, pointwise_mul(e1, e2)));
  rep.ok = rep.lhs == rep.rhs;
  return rep;
}

}  // namespace recurlab
