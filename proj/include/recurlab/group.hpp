#pragma once

#include <cstdlib>
#include <memory>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "recurlab/rational.hpp"

namespace recurlab {

/// Upper bound on the carrier size for exhaustive checks (associativity,
/// commutation sweeps).  Overridable through the RECURLAB_MAX_CARD
/// environment variable; beyond the bound validation falls back to a
/// seeded sample.
inline int max_exhaustive_card() {
  if (const char* env = std::getenv("RECURLAB_MAX_CARD")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 64;
}

/**
 * A finite group given by its multiplication table.
 *
 * Elements are indices 0..order()-1.  The table is validated on
 * construction: identity and inverses always exhaustively, associativity
 * exhaustively up to max_exhaustive_card() and on a seeded sample of
 * triples beyond that.  Instances are immutable.
 */
class FiniteGroup {
 public:
  explicit FiniteGroup(std::vector<std::vector<int>> mul, std::string name = "table")
      : name_(std::move(name)) {
    n_ = static_cast<int>(mul.size());
    if (n_ == 0) throw DomainError("group: empty multiplication table");
    mul_.resize(static_cast<size_t>(n_) * n_);
    for (int a = 0; a < n_; ++a) {
      if (static_cast<int>(mul[a].size()) != n_)
        throw DomainError("group: multiplication table is not square");
      for (int b = 0; b < n_; ++b) {
        int c = mul[a][b];
        if (c < 0 || c >= n_) throw DomainError("group: table entry out of range");
        mul_[static_cast<size_t>(a) * n_ + b] = c;
      }
    }
    validate();
  }

  int order() const { return n_; }
  int id() const { return id_; }
  int mul(int a, int b) const { return mul_[static_cast<size_t>(a) * n_ + b]; }
  int inv(int a) const { return inv_[a]; }
  const std::string& name() const { return name_; }

  /// Coordinate structure when the group is (a product of) cyclic groups;
  /// empty otherwise.  Element index is the mixed-radix encoding of the
  /// coordinate vector, most significant factor first.
  const std::vector<int>& cyclic_factors() const { return cyclic_factors_; }

  bool is_abelian() const {
    for (int a = 0; a < n_; ++a)
      for (int b = a + 1; b < n_; ++b)
        if (mul(a, b) != mul(b, a)) return false;
    return true;
  }

  bool same_table(const FiniteGroup& other) const {
    return n_ == other.n_ && mul_ == other.mul_;
  }

  std::vector<int> coords(int g) const {
    if (cyclic_factors_.empty()) throw DomainError("group has no coordinate structure");
    std::vector<int> c(cyclic_factors_.size());
    for (int i = static_cast<int>(cyclic_factors_.size()) - 1; i >= 0; --i) {
      c[i] = g % cyclic_factors_[i];
      g /= cyclic_factors_[i];
    }
    return c;
  }

  int from_coords(const std::vector<int>& c) const {
    if (c.size() != cyclic_factors_.size())
      throw DomainError("coordinate vector has wrong length");
    int g = 0;
    for (size_t i = 0; i < c.size(); ++i) {
      int m = cyclic_factors_[i];
      int v = ((c[i] % m) + m) % m;
      g = g * m + v;
    }
    return g;
  }

  static std::shared_ptr<const FiniteGroup> from_table(std::vector<std::vector<int>> mul,
                                                       std::string name = "table") {
    return std::make_shared<FiniteGroup>(std::move(mul), std::move(name));
  }

  static std::shared_ptr<const FiniteGroup> cyclic(int n) {
    if (n <= 0) throw DomainError("cyclic group order must be positive");
    std::vector<std::vector<int>> t(n, std::vector<int>(n));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) t[a][b] = (a + b) % n;
    auto g = std::make_shared<FiniteGroup>(std::move(t), "Z/" + std::to_string(n));
    g->cyclic_factors_ = {n};
    return g;
  }

  static std::shared_ptr<const FiniteGroup> product(
      const std::shared_ptr<const FiniteGroup>& a,
      const std::shared_ptr<const FiniteGroup>& b) {
    int n = a->order() * b->order();
    std::vector<std::vector<int>> t(n, std::vector<int>(n));
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) {
        int x1 = x / b->order(), x2 = x % b->order();
        int y1 = y / b->order(), y2 = y % b->order();
        t[x][y] = a->mul(x1, y1) * b->order() + b->mul(x2, y2);
      }
    auto g = std::make_shared<FiniteGroup>(std::move(t), a->name() + "x" + b->name());
    if (!a->cyclic_factors_.empty() && !b->cyclic_factors_.empty()) {
      auto f = a->cyclic_factors_;
      f.insert(f.end(), b->cyclic_factors_.begin(), b->cyclic_factors_.end());
      g->cyclic_factors_ = std::move(f);
    }
    return g;
  }

  /// Symmetries of the regular m-gon: x |-> s*x + r on Z/m, s in {+1,-1}.
  /// Element index f*m + r with s = (-1)^f.  Nonabelian for m >= 3.
  static std::shared_ptr<const FiniteGroup> dihedral(int m) {
    if (m < 1) throw DomainError("dihedral parameter must be positive");
    int n = 2 * m;
    auto enc = [m](int s, int r) { return (s < 0 ? m : 0) + ((r % m + m) % m); };
    std::vector<std::vector<int>> t(n, std::vector<int>(n));
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) {
        int s1 = x < m ? 1 : -1, r1 = x % m;
        int s2 = y < m ? 1 : -1, r2 = y % m;
        // composition: apply y first, then x
        t[x][y] = enc(s1 * s2, s1 * r2 + r1);
      }
    return std::make_shared<FiniteGroup>(std::move(t), "D" + std::to_string(m));
  }

  /// Quaternion group {+-1, +-i, +-j, +-k}; indices pair up as q and q+4 = -q.
  static std::shared_ptr<const FiniteGroup> quaternion() {
    // base table on {1,i,j,k} with sign tracking
    const int bt[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
    const int sg[4][4] = {{+1, +1, +1, +1}, {+1, -1, +1, -1}, {+1, -1, -1, +1}, {+1, +1, -1, -1}};
    std::vector<std::vector<int>> t(8, std::vector<int>(8));
    for (int x = 0; x < 8; ++x)
      for (int y = 0; y < 8; ++y) {
        int bx = x % 4, sx = x < 4 ? 1 : -1;
        int by = y % 4, sy = y < 4 ? 1 : -1;
        int b = bt[bx][by];
        int s = sx * sy * sg[bx][by];
        t[x][y] = b + (s < 0 ? 4 : 0);
      }
    return std::make_shared<FiniteGroup>(std::move(t), "Q8");
  }

 private:
  void validate() {
    // identity
    id_ = -1;
    for (int e = 0; e < n_; ++e) {
      bool ok = true;
      for (int a = 0; a < n_ && ok; ++a) ok = mul(e, a) == a && mul(a, e) == a;
      if (ok) {
        id_ = e;
        break;
      }
    }
    if (id_ < 0) throw DomainError("group: no identity element");
    inv_.assign(n_, -1);
    for (int a = 0; a < n_; ++a) {
      for (int b = 0; b < n_; ++b)
        if (mul(a, b) == id_ && mul(b, a) == id_) {
          inv_[a] = b;
          break;
        }
      if (inv_[a] < 0) throw DomainError("group: element without inverse");
    }
    int cap = max_exhaustive_card();
    if (n_ <= cap) {
      for (int a = 0; a < n_; ++a)
        for (int b = 0; b < n_; ++b)
          for (int c = 0; c < n_; ++c)
            if (mul(mul(a, b), c) != mul(a, mul(b, c)))
              throw DomainError("group: multiplication is not associative");
    } else {
      std::mt19937_64 rng(0x5eedu);
      std::uniform_int_distribution<int> d(0, n_ - 1);
      for (int k = 0; k < 200000; ++k) {
        int a = d(rng), b = d(rng), c = d(rng);
        if (mul(mul(a, b), c) != mul(a, mul(b, c)))
          throw DomainError("group: multiplication is not associative (sampled)");
      }
    }
  }

  int n_ = 0;
  int id_ = 0;
  std::vector<int> mul_;
  std::vector<int> inv_;
  std::vector<int> cyclic_factors_;
  std::string name_;
};

using GroupPtr = std::shared_ptr<const FiniteGroup>;

inline void require_same_group(const GroupPtr& a, const GroupPtr& b) {
  if (a.get() == b.get()) return;
  if (!a || !b || !a->same_table(*b)) throw DomainError("mismatched groups");
}

}  // namespace recurlab
