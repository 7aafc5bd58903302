#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "recurlab/measure.hpp"
#include "recurlab/mps.hpp"

namespace recurlab {

/// Deterministic random source: a fixed engine with modulo draws, so that
/// seeded suites reproduce bit-identically everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  int below(int n) {
    if (n <= 0) throw DomainError("Rng::below needs a positive bound");
    return static_cast<int>(eng_() % static_cast<std::uint64_t>(n));
  }
  bool flip() { return (eng_() & 1) != 0; }
  /// Rational in [0, 1] with denominator at most den_cap.
  Rat unit_rat(int den_cap = 12) {
    int den = 1 + below(den_cap);
    int num = below(den + 1);
    return rat_of(num, den);
  }

 private:
  std::mt19937_64 eng_;
};

/// X = G1 x G2 acted on by G = G1 x G2: the (a,b)-translation moves the
/// first coordinate by a under T1 and the second by b under T2.  Ergodic,
/// and the invariant factors join to the full partition.
inline FiniteMPS product_translation_system(const GroupPtr& g1, const GroupPtr& g2) {
  GroupPtr G = FiniteGroup::product(g1, g2);
  const int n1 = g1->order(), n2 = g2->order(), n = n1 * n2;
  std::vector<Rat> mass(n, rat_of(1, n));
  std::vector<std::string> labels(n);
  for (int u = 0; u < n1; ++u)
    for (int v = 0; v < n2; ++v)
      labels[static_cast<size_t>(u) * n2 + v] =
          "(" + std::to_string(u) + "," + std::to_string(v) + ")";
  Action t1(G->order(), std::vector<int>(n)), t2(G->order(), std::vector<int>(n));
  for (int g = 0; g < G->order(); ++g) {
    int a = g / n2, b = g % n2;
    for (int u = 0; u < n1; ++u)
      for (int v = 0; v < n2; ++v) {
        t1[g][static_cast<size_t>(u) * n2 + v] = g1->mul(a, u) * n2 + v;
        t2[g][static_cast<size_t>(u) * n2 + v] = u * n2 + g2->mul(b, v);
      }
  }
  return FiniteMPS(G, std::move(labels), std::move(mass), {std::move(t1), std::move(t2)});
}

/// X = G with T1^g x = g x and T2^g x = x g^{-1}.  Both are left actions
/// and they commute; each alone is transitive, so their invariant factors
/// are trivial and the join is trivial — ergodic but not magic for |G| > 1.
inline FiniteMPS left_right_translation_system(const GroupPtr& G) {
  const int n = G->order();
  std::vector<Rat> mass(n, rat_of(1, n));
  std::vector<std::string> labels(n);
  for (int x = 0; x < n; ++x) labels[x] = "g" + std::to_string(x);
  Action t1(n, std::vector<int>(n)), t2(n, std::vector<int>(n));
  for (int g = 0; g < n; ++g)
    for (int x = 0; x < n; ++x) {
      t1[g][x] = G->mul(g, x);
      t2[g][x] = G->mul(x, G->inv(g));
    }
  return FiniteMPS(G, std::move(labels), std::move(mass), {std::move(t1), std::move(t2)});
}

/// All subgroups of a small group, each as a sorted element list.
inline std::vector<std::vector<int>> subgroups(const FiniteGroup& G) {
  if (G.order() > 16) throw DomainError("subgroup enumeration supports order at most 16");
  const int n = G.order();
  std::vector<std::vector<int>> out;
  for (std::uint32_t m = 0; m < (1u << n); ++m) {
    if (!(m >> G.id() & 1)) continue;
    std::vector<int> elems;
    for (int i = 0; i < n; ++i)
      if (m >> i & 1) elems.push_back(i);
    bool closed = true;
    for (int a : elems) {
      if (!(m >> G.inv(a) & 1)) closed = false;
      for (int b : elems)
        if (!(m >> G.mul(a, b) & 1)) closed = false;
      if (!closed) break;
    }
    if (closed) out.push_back(std::move(elems));
  }
  return out;
}

/// X = G/H1 x G/H2 with T1 translating the first left-coset coordinate and
/// T2 the second.  Ergodic and magic; point masses uniform.
inline FiniteMPS coset_space_system(const GroupPtr& G, const std::vector<int>& H1,
                                    const std::vector<int>& H2) {
  const int n = G->order();
  auto cosets_of = [&](const std::vector<int>& H) {
    std::vector<int> coset_id(n, -1);
    int count = 0;
    for (int g = 0; g < n; ++g) {
      if (coset_id[g] >= 0) continue;
      for (int h : H) coset_id[G->mul(g, h)] = count;
      ++count;
    }
    return std::pair{coset_id, count};
  };
  auto [c1, m1] = cosets_of(H1);
  auto [c2, m2] = cosets_of(H2);
  // representative-based action: g * (coset of x) = coset of g*x
  std::vector<int> rep1(m1, -1), rep2(m2, -1);
  for (int g = n - 1; g >= 0; --g) {
    rep1[c1[g]] = g;
    rep2[c2[g]] = g;
  }
  const int np = m1 * m2;
  std::vector<Rat> mass(np, rat_of(1, np));
  std::vector<std::string> labels(np);
  for (int a = 0; a < m1; ++a)
    for (int b = 0; b < m2; ++b)
      labels[static_cast<size_t>(a) * m2 + b] =
          std::to_string(a) + "H1x" + std::to_string(b) + "H2";
  Action t1(n, std::vector<int>(np)), t2(n, std::vector<int>(np));
  for (int g = 0; g < n; ++g)
    for (int a = 0; a < m1; ++a)
      for (int b = 0; b < m2; ++b) {
        t1[g][static_cast<size_t>(a) * m2 + b] = c1[G->mul(g, rep1[a])] * m2 + b;
        t2[g][static_cast<size_t>(a) * m2 + b] = a * m2 + c2[G->mul(g, rep2[b])];
      }
  return FiniteMPS(G, std::move(labels), std::move(mass), {std::move(t1), std::move(t2)});
}

/// X = G1 x G2 x G3 with three coordinate translations; k = 3, ergodic.
inline FiniteMPS triple_product_translation_system(const GroupPtr& g1, const GroupPtr& g2,
                                                   const GroupPtr& g3) {
  GroupPtr G = FiniteGroup::product(FiniteGroup::product(g1, g2), g3);
  const int n1 = g1->order(), n2 = g2->order(), n3 = g3->order(), n = n1 * n2 * n3;
  std::vector<Rat> mass(n, rat_of(1, n));
  std::vector<std::string> labels(n);
  auto idx = [&](int u, int v, int w) { return (static_cast<size_t>(u) * n2 + v) * n3 + w; };
  for (int u = 0; u < n1; ++u)
    for (int v = 0; v < n2; ++v)
      for (int w = 0; w < n3; ++w)
        labels[idx(u, v, w)] = "(" + std::to_string(u) + "," + std::to_string(v) + "," +
                               std::to_string(w) + ")";
  std::vector<Action> acts(3, Action(G->order(), std::vector<int>(n)));
  for (int g = 0; g < G->order(); ++g) {
    int a = g / (n2 * n3), b = g / n3 % n2, c = g % n3;
    for (int u = 0; u < n1; ++u)
      for (int v = 0; v < n2; ++v)
        for (int w = 0; w < n3; ++w) {
          acts[0][g][idx(u, v, w)] = static_cast<int>(idx(g1->mul(a, u), v, w));
          acts[1][g][idx(u, v, w)] = static_cast<int>(idx(u, g2->mul(b, v), w));
          acts[2][g][idx(u, v, w)] = static_cast<int>(idx(u, v, g3->mul(c, w)));
        }
  }
  return FiniteMPS(G, std::move(labels), std::move(mass), std::move(acts));
}

/// Appends fixed points with the given total extra mass: all actions fix
/// the new points, so the result is never ergodic.  Base masses rescale by
/// 1 - extra_total.
inline FiniteMPS with_fixed_tail(const FiniteMPS& X, int extra_points, const Rat& extra_total,
                                 Rng& rng) {
  if (extra_points < 1) throw DomainError("fixed tail needs at least one point");
  if (extra_total <= 0 || extra_total >= 1)
    throw DomainError("extra mass must lie strictly between 0 and 1");
  std::vector<Rat> parts(extra_points);
  Rat sum(0);
  for (Rat& p : parts) {
    p = Rat(1 + rng.below(6));
    sum += p;
  }
  std::vector<Rat> mass;
  std::vector<std::string> labels = X.labels();
  for (int x = 0; x < X.points(); ++x) mass.push_back(X.mass()[x] * (1 - extra_total));
  for (int e = 0; e < extra_points; ++e) {
    mass.push_back(parts[e] / sum * extra_total);
    labels.push_back("tail" + std::to_string(e));
  }
  const int np = X.points() + extra_points;
  std::vector<Action> acts(X.k(), Action(X.group()->order(), std::vector<int>(np)));
  for (int i = 0; i < X.k(); ++i)
    for (int g = 0; g < X.group()->order(); ++g) {
      for (int x = 0; x < X.points(); ++x) acts[i][g][x] = X.perm(i, g)[x];
      for (int e = 0; e < extra_points; ++e) acts[i][g][X.points() + e] = X.points() + e;
    }
  return FiniteMPS(X.group(), std::move(labels), std::move(mass), std::move(acts));
}

/// A small group of order at most max_order, drawn across the built-in kinds.
inline GroupPtr random_small_group(Rng& rng, int max_order) {
  for (;;) {
    switch (rng.below(5)) {
      case 0: {
        int n = 2 + rng.below(5);
        if (n <= max_order) return FiniteGroup::cyclic(n);
        break;
      }
      case 1:
        if (6 <= max_order) return FiniteGroup::dihedral(3);
        break;
      case 2:
        if (8 <= max_order) return FiniteGroup::quaternion();
        break;
      case 3:
        if (4 <= max_order)
          return FiniteGroup::product(FiniteGroup::cyclic(2), FiniteGroup::cyclic(2));
        break;
      default:
        if (8 <= max_order) return FiniteGroup::dihedral(4);
        break;
    }
  }
}

/// A pair system with |G| <= 8 and |X| <= 16 drawn from the generator
/// catalog: coordinate translations, coset translations, left/right
/// translations, and a fixed-tail variant that is never ergodic.
inline FiniteMPS random_pair_catalog(Rng& rng) {
  switch (rng.below(4)) {
    case 0: {
      int a = 2 + rng.below(3), b = 2 + rng.below(2);
      while (a * b > 8) a = 2 + rng.below(3);
      return product_translation_system(FiniteGroup::cyclic(a), FiniteGroup::cyclic(b));
    }
    case 1: {
      GroupPtr G = rng.flip() ? FiniteGroup::dihedral(3) : FiniteGroup::quaternion();
      auto subs = subgroups(*G);
      std::vector<std::vector<int>> big;
      for (auto& H : subs)
        if (static_cast<int>(H.size()) * 4 >= G->order()) big.push_back(H);
      const auto& H1 = big[static_cast<size_t>(rng.below(static_cast<int>(big.size())))];
      const auto& H2 = big[static_cast<size_t>(rng.below(static_cast<int>(big.size())))];
      return coset_space_system(G, H1, H2);
    }
    case 2:
      return left_right_translation_system(random_small_group(rng, 8));
    default: {
      FiniteMPS base =
          product_translation_system(FiniteGroup::cyclic(2), FiniteGroup::cyclic(2));
      return with_fixed_tail(base, 1 + rng.below(2), rat_of(1, 3), rng);
    }
  }
}

inline Observable random_unit_observable(const FiniteMPS& X, Rng& rng) {
  Observable f(X.points());
  for (Rat& v : f) v = rng.unit_rat();
  return f;
}

inline std::vector<char> random_set(const FiniteMPS& X, Rng& rng) {
  std::vector<char> s(X.points());
  for (char& c : s) c = rng.flip() ? 1 : 0;
  return s;
}

inline GroupMeasure random_group_measure(const GroupPtr& G, Rng& rng) {
  std::vector<Rat> w(G->order());
  Rat sum(0);
  for (Rat& v : w) {
    v = Rat(rng.below(5));
    sum += v;
  }
  if (sum == 0) {
    w[G->id()] = 1;
    sum = 1;
  }
  for (Rat& v : w) v /= sum;
  return GroupMeasure(G, std::move(w));
}

}  // namespace recurlab
