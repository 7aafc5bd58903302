#pragma once

#include <algorithm>
#include <compare>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "recurlab/certified.hpp"
#include "recurlab/group.hpp"
#include "recurlab/rational.hpp"

namespace recurlab {

/**
 * A countable group with decidable multiplication used to index Bernoulli
 * coordinates: either Z^d (elements are integer vectors) or a wrapped
 * finite group (elements are single indices).
 */
class ShiftGroup {
 public:
  using Elem = std::vector<long>;

  static ShiftGroup zd(int d) {
    if (d <= 0) throw DomainError("coordinate group dimension must be positive");
    ShiftGroup g;
    g.dim_ = d;
    return g;
  }
  static ShiftGroup finite(GroupPtr g) {
    ShiftGroup s;
    s.finite_ = std::move(g);
    s.dim_ = 1;
    return s;
  }

  bool is_zd() const { return finite_ == nullptr; }
  int dim() const { return dim_; }
  const GroupPtr& finite_group() const { return finite_; }

  Elem id() const {
    if (finite_) return {finite_->id()};
    return Elem(dim_, 0);
  }
  Elem mul(const Elem& a, const Elem& b) const {
    check(a);
    check(b);
    if (finite_) return {static_cast<long>(finite_->mul(static_cast<int>(a[0]), static_cast<int>(b[0])))};
    Elem c(dim_);
    for (int i = 0; i < dim_; ++i) c[i] = a[i] + b[i];
    return c;
  }
  Elem inv(const Elem& a) const {
    check(a);
    if (finite_) return {static_cast<long>(finite_->inv(static_cast<int>(a[0])))};
    Elem c(dim_);
    for (int i = 0; i < dim_; ++i) c[i] = -a[i];
    return c;
  }

  /// Deterministic enumeration: all elements for a finite group; for Z^d the
  /// lattice points of the box [-radius, radius]^d in lexicographic order.
  std::vector<Elem> elements_upto(int radius) const {
    std::vector<Elem> out;
    if (finite_) {
      for (int i = 0; i < finite_->order(); ++i) out.push_back({static_cast<long>(i)});
      return out;
    }
    Elem cur(dim_, -radius);
    while (true) {
      out.push_back(cur);
      int i = dim_ - 1;
      while (i >= 0 && cur[i] == radius) cur[i--] = -radius;
      if (i < 0) break;
      ++cur[i];
    }
    return out;
  }

  std::string str(const Elem& a) const {
    check(a);
    std::ostringstream os;
    if (finite_) {
      os << a[0];
      return os.str();
    }
    os << "(";
    for (int i = 0; i < dim_; ++i) os << (i ? "," : "") << a[i];
    os << ")";
    return os.str();
  }

 private:
  void check(const Elem& a) const {
    if (static_cast<int>(a.size()) != dim_)
      throw DomainError("group element has wrong coordinate count");
    if (finite_ && (a[0] < 0 || a[0] >= finite_->order()))
      throw DomainError("group element index out of range");
  }

  GroupPtr finite_;
  int dim_ = 0;
};

/// One Bernoulli coordinate: which product factor, and at which group element.
struct Coord {
  int factor = 0;
  ShiftGroup::Elem at;
  friend auto operator<=>(const Coord&, const Coord&) = default;
};

/**
 * A function depending on finitely many coordinates: rational values
 * indexed by the letters found at the support coordinates.  The table is
 * mixed-radix over the support order, first coordinate most significant,
 * and must be totally defined (size = alphabet^|support|).
 */
class CylinderFunction {
 public:
  CylinderFunction(int alphabet, std::vector<Coord> support, std::vector<Rat> table)
      : alphabet_(alphabet), support_(std::move(support)), table_(std::move(table)) {
    if (alphabet_ < 1) throw DomainError("cylinder alphabet must be nonempty");
    for (size_t i = 0; i + 1 < support_.size(); ++i)
      for (size_t j = i + 1; j < support_.size(); ++j)
        if (support_[i] == support_[j]) throw DomainError("cylinder support has repeats");
    size_t expect = 1;
    for (size_t i = 0; i < support_.size(); ++i) {
      if (expect > (size_t{1} << 24) / alphabet_) throw DomainError("cylinder table too large");
      expect *= alphabet_;
    }
    if (table_.size() != expect)
      throw DomainError("cylinder table must be totally defined on alphabet^support");
  }

  static CylinderFunction constant(int alphabet, const Rat& c) {
    return CylinderFunction(alphabet, {}, {c});
  }
  /// Indicator of a single letter at a single coordinate.
  static CylinderFunction letter_at(int alphabet, const Coord& where, int letter) {
    if (letter < 0 || letter >= alphabet) throw DomainError("letter out of range");
    std::vector<Rat> table(alphabet, Rat(0));
    table[letter] = 1;
    return CylinderFunction(alphabet, {where}, std::move(table));
  }

  int alphabet() const { return alphabet_; }
  const std::vector<Coord>& support() const { return support_; }
  const std::vector<Rat>& table() const { return table_; }

  /// Value at the letters read off in support order.
  const Rat& value(const std::vector<int>& letters) const {
    if (letters.size() != support_.size()) throw DomainError("cylinder evaluation arity mismatch");
    size_t idx = 0;
    for (size_t i = 0; i < letters.size(); ++i) {
      if (letters[i] < 0 || letters[i] >= alphabet_) throw DomainError("letter out of range");
      idx = idx * alphabet_ + letters[i];
    }
    return table_[idx];
  }

 private:
  int alphabet_;
  std::vector<Coord> support_;
  std::vector<Rat> table_;
};

/// Coordinate displacement h -> l * h * r on one factor; composites of the
/// left shift (l = g^{-1}) and the right shift (r = g) take this form.
struct FactorShift {
  ShiftGroup::Elem l, r;
};

/// A cylinder function precomposed with a product transformation described
/// by one displacement pair per factor.
struct ShiftedCylinder {
  std::vector<FactorShift> shift;
  CylinderFunction f;
};

/**
 * A product of full shifts: `factors` independent copies of alphabet^G with
 * i.i.d. letter weights, carrying left/right shift actions per factor.
 */
class BernoulliSystem {
 public:
  BernoulliSystem(ShiftGroup group, std::vector<Rat> letter_weights, int factors)
      : group_(std::move(group)), weights_(std::move(letter_weights)), factors_(factors) {
    if (factors_ < 1) throw DomainError("Bernoulli system needs at least one factor");
    if (weights_.empty()) throw DomainError("alphabet must be nonempty");
    Rat total(0);
    for (const Rat& w : weights_) {
      if (w < 0) throw DomainError("letter weights must be nonnegative");
      total += w;
    }
    if (total != 1) throw DomainError("letter weights must sum to 1");
  }

  static BernoulliSystem uniform(ShiftGroup group, int alphabet, int factors) {
    return BernoulliSystem(std::move(group), std::vector<Rat>(alphabet, rat_of(1, alphabet)),
                           factors);
  }

  const ShiftGroup& shift_group() const { return group_; }
  const std::vector<Rat>& weights() const { return weights_; }
  int alphabet() const { return static_cast<int>(weights_.size()); }
  int factors() const { return factors_; }

  std::vector<FactorShift> identity_shift() const {
    return std::vector<FactorShift>(factors_, FactorShift{group_.id(), group_.id()});
  }

 private:
  ShiftGroup group_;
  std::vector<Rat> weights_;
  int factors_;
};

namespace detail {

struct ProductInstance {
  std::vector<std::vector<int>> term_vars;  // per term, variable id per support entry
  std::vector<const CylinderFunction*> fs;
  int nvars = 0;
};

inline ProductInstance resolve_coordinates(const BernoulliSystem& sys,
                                           const std::vector<ShiftedCylinder>& terms) {
  ProductInstance inst;
  std::map<Coord, int> vars;
  for (const auto& t : terms) {
    if (t.f.alphabet() != sys.alphabet())
      throw DomainError("cylinder alphabet does not match the system");
    if (static_cast<int>(t.shift.size()) != sys.factors())
      throw DomainError("shift must provide one displacement pair per factor");
    std::vector<int> ids;
    for (const Coord& c : t.f.support()) {
      if (c.factor < 0 || c.factor >= sys.factors())
        throw DomainError("cylinder coordinate factor out of range");
      const FactorShift& s = t.shift[c.factor];
      Coord actual{c.factor, sys.shift_group().mul(s.l, sys.shift_group().mul(c.at, s.r))};
      auto [it, fresh] = vars.emplace(actual, inst.nvars);
      if (fresh) ++inst.nvars;
      ids.push_back(it->second);
    }
    inst.term_vars.push_back(std::move(ids));
    inst.fs.push_back(&t.f);
  }
  return inst;
}

/// Sum over letter assignments of a set of variables of the product of the
/// given terms and the letter weights; terms reference variables by id.
inline Rat enumerate_assignments(const BernoulliSystem& sys, const ProductInstance& inst,
                                 const std::vector<int>& vars,
                                 const std::vector<int>& term_ids) {
  const int s = sys.alphabet();
  double work = 1;
  for (size_t i = 0; i < vars.size(); ++i) {
    work *= s;
    if (work > double{1 << 22})
      throw DomainError("coordinate component too large for exact enumeration");
  }
  std::vector<int> pos(inst.nvars, -1);
  for (size_t i = 0; i < vars.size(); ++i) pos[vars[i]] = static_cast<int>(i);

  std::vector<int> letters(vars.size(), 0);
  std::vector<int> buf;
  Rat total(0);
  while (true) {
    Rat prod(1);
    for (size_t i = 0; i < letters.size() && prod != 0; ++i) prod *= sys.weights()[letters[i]];
    for (size_t ti = 0; ti < term_ids.size() && prod != 0; ++ti) {
      const auto& ids = inst.term_vars[term_ids[ti]];
      buf.clear();
      for (int v : ids) buf.push_back(letters[pos[v]]);
      prod *= inst.fs[term_ids[ti]]->value(buf);
    }
    total += prod;
    size_t i = letters.size();
    while (i > 0 && letters[i - 1] == s - 1) letters[--i] = 0;
    if (i == 0) break;
    ++letters[i - 1];
  }
  return total;
}

}  // namespace detail

/**
 * Exact integral of a product of shifted cylinder functions against the
 * i.i.d. product measure.  Coordinates that coincide after applying the
 * displacements are merged; the integral factorizes over the connected
 * components of the term/coordinate incidence graph, and each component is
 * summed by direct enumeration.
 */
inline Rat integrate_product(const BernoulliSystem& sys,
                             const std::vector<ShiftedCylinder>& terms) {
  detail::ProductInstance inst = detail::resolve_coordinates(sys, terms);

  // union-find over variables; terms glue their variables together
  std::vector<int> parent(inst.nvars);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& ids : inst.term_vars)
    for (size_t i = 1; i < ids.size(); ++i) {
      int a = find(ids[0]), b = find(ids[i]);
      if (a != b) parent[a] = b;
    }

  std::map<int, std::vector<int>> comp_vars;
  for (int v = 0; v < inst.nvars; ++v) comp_vars[find(v)].push_back(v);
  std::map<int, std::vector<int>> comp_terms;
  Rat constant(1);
  for (size_t t = 0; t < inst.term_vars.size(); ++t) {
    if (inst.term_vars[t].empty())
      constant *= inst.fs[t]->value({});
    else
      comp_terms[find(inst.term_vars[t][0])].push_back(static_cast<int>(t));
  }

  Rat total = constant;
  for (const auto& [root, vars] : comp_vars) {
    auto it = comp_terms.find(root);
    static const std::vector<int> none;
    total *= detail::enumerate_assignments(sys, inst, vars, it == comp_terms.end() ? none : it->second);
  }
  return total;
}

/// Same value by enumerating all touched coordinates jointly, without the
/// component factorization; exponential, intended as a cross-check.
inline Rat integrate_product_unfactored(const BernoulliSystem& sys,
                                        const std::vector<ShiftedCylinder>& terms) {
  detail::ProductInstance inst = detail::resolve_coordinates(sys, terms);
  std::vector<int> vars(inst.nvars);
  std::iota(vars.begin(), vars.end(), 0);
  std::vector<int> all_terms(inst.term_vars.size());
  std::iota(all_terms.begin(), all_terms.end(), 0);
  return detail::enumerate_assignments(sys, inst, vars, all_terms);
}

/// Right-translates every displacement of every term: r -> r * t.  The
/// product measure is invariant under this, which tests exercise.
inline std::vector<ShiftedCylinder> right_translated(const ShiftGroup& G,
                                                     const std::vector<ShiftedCylinder>& terms,
                                                     const ShiftGroup::Elem& t) {
  std::vector<ShiftedCylinder> out = terms;
  for (auto& term : out)
    for (auto& s : term.shift) s.r = G.mul(s.r, t);
  return out;
}

// ---------------------------------------------------------------------------
// The three-factor small-correlation construction: X = (alphabet^G)^3 with
// T1 = R x Id x R and T2 = L x R x Id over the uniform ternary alphabet, and
// A the set where the three distinguished letters are pairwise distinct.
// ---------------------------------------------------------------------------

/// Per-factor displacements of the composite point map T1^a T2^b.
inline std::vector<FactorShift> composite_shift(const ShiftGroup& G, const ShiftGroup::Elem& a,
                                                const ShiftGroup::Elem& b) {
  // factor 0: R^a and L^b, coordinate h -> b^{-1} h a
  // factor 1: R^b only,    coordinate h -> h b
  // factor 2: R^a only,    coordinate h -> h a
  return {FactorShift{G.inv(b), a}, FactorShift{G.id(), b}, FactorShift{G.id(), a}};
}

/// Indicator of pairwise-distinct letters at the identity coordinate of
/// each of the three factors.
inline CylinderFunction pairwise_distinct_indicator(const ShiftGroup& G) {
  std::vector<Coord> support{{0, G.id()}, {1, G.id()}, {2, G.id()}};
  std::vector<Rat> table(27, Rat(0));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        if (i != j && j != k && i != k) table[(i * 3 + j) * 3 + k] = 1;
  return CylinderFunction(3, std::move(support), std::move(table));
}

inline BernoulliSystem small_correlation_system(const ShiftGroup& G) {
  return BernoulliSystem::uniform(G, 3, 3);
}

/// mu(A cap (T1^g)^{-1} A cap (T12^g)^{-1} A) for the construction above,
/// evaluated by exact cylinder integration.
inline Rat triple_correlation(const ShiftGroup& G, const ShiftGroup::Elem& g) {
  BernoulliSystem sys = small_correlation_system(G);
  CylinderFunction F = pairwise_distinct_indicator(G);
  std::vector<ShiftedCylinder> terms;
  terms.push_back({composite_shift(G, G.id(), G.id()), F});  // F itself
  terms.push_back({composite_shift(G, g, G.id()), F});       // F o T1^g
  terms.push_back({composite_shift(G, g, g), F});            // F o T12^g
  return integrate_product(sys, terms);
}

inline Rat small_correlation_set_measure(const ShiftGroup& G) {
  BernoulliSystem sys = small_correlation_system(G);
  CylinderFunction F = pairwise_distinct_indicator(G);
  return integrate_product(sys, {{composite_shift(G, G.id(), G.id()), F}});
}

struct ExponentGapReport {
  Rat mu_A;
  Rat c_off_identity;
  Rat exponent;
  PowerCompareReport comparison;  // c < mu_A^exponent
  Interval critical_exponent;     // enclosure of log(c)/log(mu_A)
  bool holds = false;
};

/**
 * Verifies that the construction's off-identity triple correlation
 * undercuts mu(A)^exponent, with the comparison certified by directed
 * interval logarithms, and encloses the critical exponent
 * log(c)/log(mu(A)) to the requested width.
 */
inline ExponentGapReport exponent_gap_check(const ShiftGroup& G, const ShiftGroup::Elem& g,
                                            const Rat& exponent,
                                            const Rat& tol = rat_of(1, 1000000)) {
  if (exponent <= 0) throw PreconditionError("exponent must be positive");
  if (g == G.id()) throw PreconditionError("exponent gap needs a nonidentity element");
  ExponentGapReport rep;
  rep.exponent = exponent;
  rep.mu_A = small_correlation_set_measure(G);
  rep.c_off_identity = triple_correlation(G, g);
  rep.comparison = certified_power_compare(rep.c_off_identity, rep.mu_A, exponent);
  rep.critical_exponent = log_ratio_enclosure(rep.c_off_identity, rep.mu_A, tol);
  rep.holds = rep.comparison.holds;
  return rep;
}

// ---------------------------------------------------------------------------
// Weak-mixing seminorm on a Bernoulli system
// ---------------------------------------------------------------------------

/// integral of h * (f o S^g) where S^g right-shifts every factor by g.
inline Rat shifted_pair_integral(const BernoulliSystem& sys, const CylinderFunction& f,
                                 const CylinderFunction& h, const ShiftGroup::Elem& g) {
  const ShiftGroup& G = sys.shift_group();
  std::vector<FactorShift> idshift = sys.identity_shift();
  std::vector<FactorShift> gshift(sys.factors(), FactorShift{G.id(), g});
  return integrate_product(sys, {{idshift, h}, {gshift, f}});
}

/**
 * The Cesaro limit over g of |integral h * (S^g f)|^2 with the trivial
 * conditioning factor.  For Z^d the integrand is constant equal to
 * (integral h)(integral f) off the finite collision set of the two
 * supports, so box averaging converges to that constant's square; for a
 * finite group the average is computed exactly over all elements.
 */
inline Rat weak_mixing_seminorm(const BernoulliSystem& sys, const CylinderFunction& f,
                                const CylinderFunction& h) {
  const ShiftGroup& G = sys.shift_group();
  if (G.is_zd()) {
    Rat mf = integrate_product(sys, {{sys.identity_shift(), f}});
    Rat mh = integrate_product(sys, {{sys.identity_shift(), h}});
    Rat v = mf * mh;
    return v * v;
  }
  const int n = G.finite_group()->order();
  Rat acc(0);
  for (int i = 0; i < n; ++i) {
    Rat v = shifted_pair_integral(sys, f, h, {static_cast<long>(i)});
    acc += v * v;
  }
  return acc / n;
}

}  // namespace recurlab
