#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "recurlab/rational.hpp"

namespace recurlab {

/// x mod 1 in [0, 1).
inline Rat frac(const Rat& x) {
  mpz_class fl;
  mpz_fdiv_q(fl.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
  return x - Rat(fl);
}

/// Half-open arc [lo, hi) with 0 <= lo < hi <= 1.
struct Arc {
  Rat lo, hi;
};

/**
 * A finite union of arcs on the circle R mod 1 with rational endpoints,
 * kept sorted, disjoint and non-touching.
 */
class IntervalUnion {
 public:
  IntervalUnion() = default;

  /// Builds from raw (lo, hi) pairs interpreted mod 1; hi - lo is the
  /// length, must be in [0, 1].
  static IntervalUnion of(const std::vector<std::pair<Rat, Rat>>& raw) {
    std::vector<Arc> arcs;
    for (const auto& [lo, hi] : raw) {
      Rat len = hi - lo;
      if (len < 0 || len > 1) throw DomainError("arc length must lie in [0, 1]");
      if (len == 0) continue;
      Rat a = frac(lo);
      if (a + len <= 1) {
        arcs.push_back({a, a + len});
      } else {
        arcs.push_back({a, Rat(1)});
        arcs.push_back({Rat(0), a + len - 1});
      }
    }
    IntervalUnion u;
    u.assign(std::move(arcs));
    return u;
  }

  static IntervalUnion arc(const Rat& lo, const Rat& len) { return of({{lo, lo + len}}); }
  static IntervalUnion full() { return of({{Rat(0), Rat(1)}}); }

  const std::vector<Arc>& arcs() const { return arcs_; }
  bool empty() const { return arcs_.empty(); }

  Rat measure() const {
    Rat s(0);
    for (const Arc& a : arcs_) s += a.hi - a.lo;
    return s;
  }

  bool contains(const Rat& x) const {
    Rat y = frac(x);
    for (const Arc& a : arcs_)
      if (a.lo <= y && y < a.hi) return true;
    return false;
  }

  IntervalUnion translated(const Rat& x) const {
    std::vector<std::pair<Rat, Rat>> raw;
    for (const Arc& a : arcs_) raw.emplace_back(a.lo + x, a.hi + x);
    return of(raw);
  }

  IntervalUnion united(const IntervalUnion& o) const {
    std::vector<Arc> all = arcs_;
    all.insert(all.end(), o.arcs_.begin(), o.arcs_.end());
    IntervalUnion u;
    u.assign(std::move(all));
    return u;
  }

  IntervalUnion intersected(const IntervalUnion& o) const {
    std::vector<Arc> out;
    size_t i = 0, j = 0;
    while (i < arcs_.size() && j < o.arcs_.size()) {
      const Arc& a = arcs_[i];
      const Arc& b = o.arcs_[j];
      Rat lo = std::max(a.lo, b.lo);
      Rat hi = std::min(a.hi, b.hi);
      if (lo < hi) out.push_back({lo, hi});
      if (a.hi <= b.hi)
        ++i;
      else
        ++j;
    }
    IntervalUnion u;
    u.arcs_ = std::move(out);  // disjoint sorted already
    return u;
  }

  IntervalUnion complemented() const {
    std::vector<Arc> out;
    Rat prev(0);
    for (const Arc& a : arcs_) {
      if (a.lo > prev) out.push_back({prev, a.lo});
      prev = a.hi;
    }
    if (prev < 1) out.push_back({prev, Rat(1)});
    IntervalUnion u;
    u.arcs_ = std::move(out);
    return u;
  }

 private:
  void assign(std::vector<Arc> raw) {
    for (const Arc& a : raw)
      if (a.lo < 0 || a.hi > 1 || a.lo >= a.hi) throw DomainError("arc endpoints out of order");
    std::sort(raw.begin(), raw.end(), [](const Arc& a, const Arc& b) { return a.lo < b.lo; });
    for (const Arc& a : raw) {
      if (!arcs_.empty() && a.lo <= arcs_.back().hi)
        arcs_.back().hi = std::max(arcs_.back().hi, a.hi);
      else
        arcs_.push_back(a);
    }
  }

  std::vector<Arc> arcs_;
};

/**
 * Continuous piecewise-linear function on [0, 1]: strictly increasing
 * breakpoints from 0 to 1 with rational values, linear between.
 */
class PiecewiseLinear {
 public:
  PiecewiseLinear() = default;
  PiecewiseLinear(std::vector<Rat> xs, std::vector<Rat> ys)
      : xs_(std::move(xs)), ys_(std::move(ys)) {
    if (xs_.size() != ys_.size() || xs_.size() < 2)
      throw DomainError("piecewise-linear data needs matching breakpoints and values");
    if (xs_.front() != 0 || xs_.back() != 1)
      throw DomainError("piecewise-linear domain must be [0, 1]");
    for (size_t i = 0; i + 1 < xs_.size(); ++i)
      if (xs_[i] >= xs_[i + 1]) throw DomainError("breakpoints must be strictly increasing");
  }

  const std::vector<Rat>& breakpoints() const { return xs_; }
  const std::vector<Rat>& values() const { return ys_; }

  Rat eval(const Rat& x) const {
    if (x < 0 || x > 1) throw DomainError("evaluation point outside [0, 1]");
    size_t hi = std::upper_bound(xs_.begin(), xs_.end(), x) - xs_.begin();
    if (hi == xs_.size()) return ys_.back();
    if (hi == 0) return ys_.front();
    const Rat& x0 = xs_[hi - 1];
    const Rat& x1 = xs_[hi];
    return ys_[hi - 1] + (ys_[hi] - ys_[hi - 1]) * (x - x0) / (x1 - x0);
  }

  /// Exact integral over [0, 1] (sum of trapezoids).
  Rat integral() const {
    Rat s(0);
    for (size_t i = 0; i + 1 < xs_.size(); ++i)
      s += (ys_[i] + ys_[i + 1]) * (xs_[i + 1] - xs_[i]) / 2;
    return s;
  }

 private:
  std::vector<Rat> xs_, ys_;
};

/// mu(B - x  u  B  u  B + x) as a set function of x.
inline Rat three_translate_union_measure(const IntervalUnion& B, const Rat& x) {
  return B.united(B.translated(x)).united(B.translated(-x)).measure();
}

/**
 * Exact piecewise-linear form of m(x) = mu(B-x u B u B+x) on [0, 1].  The
 * slope can change only where an endpoint of one translate meets an
 * endpoint of another, i.e. at x with x = e_j - e_i or 2x = e_j - e_i
 * mod 1; m is evaluated exactly at every candidate, collinear interior
 * candidates are pruned, and linearity between the surviving breakpoints
 * is verified at midpoints.
 */
inline PiecewiseLinear m_function(const IntervalUnion& B) {
  if (B.empty()) throw DomainError("m function of the empty set is identically zero");
  std::set<Rat> cand{Rat(0), Rat(1)};
  std::vector<Rat> ends;
  for (const Arc& a : B.arcs()) {
    ends.push_back(a.lo);
    ends.push_back(a.hi);
  }
  for (const Rat& e : ends)
    for (const Rat& f : ends) {
      Rat d = frac(f - e);
      cand.insert(d);
      if (d != 0) cand.insert(Rat(1) - d);  // x and 1-x play symmetric roles
      Rat h = d / 2;
      cand.insert(h);
      cand.insert(frac(h + rat_of(1, 2)));
    }
  std::vector<Rat> xs(cand.begin(), cand.end());
  std::vector<Rat> ys;
  ys.reserve(xs.size());
  for (const Rat& x : xs) ys.push_back(three_translate_union_measure(B, x));

  // prune interior points lying exactly on the segment of their neighbours
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 1; i + 1 < xs.size(); ++i) {
      const Rat& x0 = xs[i - 1];
      const Rat& x1 = xs[i + 1];
      Rat expect = ys[i - 1] + (ys[i + 1] - ys[i - 1]) * (xs[i] - x0) / (x1 - x0);
      if (expect == ys[i]) {
        xs.erase(xs.begin() + static_cast<long>(i));
        ys.erase(ys.begin() + static_cast<long>(i));
        changed = true;
        break;
      }
    }
  }

  // certify linearity between surviving breakpoints
  for (size_t i = 0; i + 1 < xs.size(); ++i) {
    Rat mid = (xs[i] + xs[i + 1]) / 2;
    Rat expect = (ys[i] + ys[i + 1]) / 2;
    if (three_translate_union_measure(B, mid) != expect)
      throw DomainError("translate-union measure is not linear between breakpoints");
  }
  return PiecewiseLinear(std::move(xs), std::move(ys));
}

/// Limit of (1/N) sum_n mu(A n T^n A n T^{2n} A) for the rotation by any
/// irrational and A the complement of B, by unique ergodicity: 1 - int m.
inline Rat rotation_cesaro_limit(const IntervalUnion& B) {
  return Rat(1) - m_function(B).integral();
}

struct RotationReport {
  Rat delta;             // measure of B
  PiecewiseLinear m;
  Rat integral_m;
  Rat limit;             // 1 - integral
  Rat cube_bound;        // (1 - delta)^3 = mu(A)^3
  bool strictly_less = false;
  bool closed_form_matches = false;  // limit == 1 - 3 delta + (5/2) delta^2
  bool beyond_formula_region = false;  // delta > 1/3
};

/// Full analysis for a single arc of length delta starting at 0.
inline RotationReport rotation_counterexample(const Rat& delta) {
  if (delta <= 0 || delta >= 1)
    throw PreconditionError("arc length must lie strictly between 0 and 1");
  RotationReport rep;
  rep.delta = delta;
  rep.beyond_formula_region = delta > rat_of(1, 3);
  IntervalUnion B = IntervalUnion::arc(Rat(0), delta);
  rep.m = m_function(B);
  rep.integral_m = rep.m.integral();
  rep.limit = Rat(1) - rep.integral_m;
  Rat a = Rat(1) - delta;
  rep.cube_bound = a * a * a;
  rep.strictly_less = rep.limit < rep.cube_bound;
  rep.closed_form_matches = rep.limit == Rat(1) - 3 * delta + rat_of(5, 2) * delta * delta;
  return rep;
}

/**
 * Demonstration mode: the empirical average (1/N) sum_{n=1..N} of the
 * exactly computed mass mu(A n (A + n a) n (A + 2 n a)) along a rational
 * approximant a of an irrational rotation number.  Converges to the
 * Cesaro limit only as the approximant improves; exposed for illustration,
 * the exact limit comes from rotation_cesaro_limit.
 */
inline Rat rotation_empirical_average(const IntervalUnion& B, const Rat& alpha, int N) {
  if (N < 1) throw DomainError("empirical average needs at least one term");
  IntervalUnion A = B.complemented();
  Rat acc(0);
  Rat x(0);
  for (int n = 1; n <= N; ++n) {
    x = frac(x + alpha);  // n * alpha mod 1
    acc += A.intersected(A.translated(x)).intersected(A.translated(2 * x)).measure();
  }
  return acc / N;
}

}  // namespace recurlab
