#pragma once

#include <vector>

#include "recurlab/group.hpp"
#include "recurlab/rational.hpp"

namespace recurlab {

/**
 * A probability measure on a finite group, stored as exact rational weights.
 * Nonnegativity and total mass 1 are enforced on construction.
 */
class GroupMeasure {
 public:
  GroupMeasure(GroupPtr group, std::vector<Rat> weights)
      : group_(std::move(group)), w_(std::move(weights)) {
    if (!group_) throw DomainError("measure: null group");
    if (static_cast<int>(w_.size()) != group_->order())
      throw DomainError("measure: weight vector length != group order");
    Rat total(0);
    for (const Rat& x : w_) {
      if (x < 0) throw DomainError("measure: negative weight");
      total += x;
    }
    if (total != 1) throw DomainError("measure: total mass is " + rat_str(total) + ", not 1");
  }

  static GroupMeasure uniform(const GroupPtr& g) {
    return GroupMeasure(g, std::vector<Rat>(g->order(), rat_of(1, g->order())));
  }

  static GroupMeasure dirac(const GroupPtr& g, int at) {
    if (at < 0 || at >= g->order()) throw DomainError("dirac: element out of range");
    std::vector<Rat> w(g->order(), Rat(0));
    w[at] = 1;
    return GroupMeasure(g, std::move(w));
  }

  const GroupPtr& group() const { return group_; }
  const Rat& operator[](int g) const { return w_[g]; }
  const std::vector<Rat>& weights() const { return w_; }

  bool operator==(const GroupMeasure& o) const {
    return group_->same_table(*o.group_) && w_ == o.w_;
  }

 private:
  GroupPtr group_;
  std::vector<Rat> w_;
};

/// (a*b)(g) = sum over xy = g of a(x) b(y).
inline GroupMeasure convolve(const GroupMeasure& a, const GroupMeasure& b) {
  require_same_group(a.group(), b.group());
  const FiniteGroup& G = *a.group();
  std::vector<Rat> w(G.order(), Rat(0));
  for (int x = 0; x < G.order(); ++x) {
    if (a[x] == 0) continue;
    for (int y = 0; y < G.order(); ++y) w[G.mul(x, y)] += a[x] * b[y];
  }
  return GroupMeasure(a.group(), std::move(w));
}

/// Involution a*(g) = a(g^{-1}) (weights are real, so no conjugation).
inline GroupMeasure involute(const GroupMeasure& a) {
  const FiniteGroup& G = *a.group();
  std::vector<Rat> w(G.order());
  for (int g = 0; g < G.order(); ++g) w[g] = a[G.inv(g)];
  return GroupMeasure(a.group(), std::move(w));
}

/// Total-variation distance in the l1 norm of the measure algebra.
inline Rat tv_norm_diff(const GroupMeasure& a, const GroupMeasure& b) {
  require_same_group(a.group(), b.group());
  Rat s(0);
  for (int g = 0; g < a.group()->order(); ++g) s += rat_abs(a[g] - b[g]);
  return s;
}

}  // namespace recurlab
