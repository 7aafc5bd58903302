#pragma once

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "recurlab/measure.hpp"

namespace recurlab {

/**
 * A finite list of probability measures F_1, F_2, ... on a finite group,
 * standing in for an averaging scheme.  Validity means the left-translation
 * defect ||h*F_N - F_N||_1 is nonincreasing in N for every h and ends below
 * a documented threshold; construction recipes below guarantee this.
 *
 * On a finite group every valid scheme averages to the uniform measure, so
 * limits are computed as uniform averages; the stored terms exist to make
 * descriptor-independence and convergence-rate statements testable.
 */
struct ReiterSequence {
  GroupPtr group;
  std::string descriptor;
  std::vector<GroupMeasure> terms;

  static ReiterSequence uniform(const GroupPtr& g, int nterms = 4) {
    ReiterSequence F{g, "uniform", {}};
    for (int i = 0; i < nterms; ++i) F.terms.push_back(GroupMeasure::uniform(g));
    return F;
  }

  /// (1 - 1/(N+1)) * uniform + 1/(N+1) * dirac(id): defect <= 2/(N+1).
  static ReiterSequence perturbed_uniform(const GroupPtr& g, int nterms = 8) {
    ReiterSequence F{g, "perturbed-uniform", {}};
    for (int n = 1; n <= nterms; ++n) {
      Rat t = rat_of(1, n + 1);
      std::vector<Rat> w(g->order(), (1 - t) / g->order());
      w[g->id()] += t;
      F.terms.emplace_back(g, std::move(w));
    }
    return F;
  }

  /// Uniform measures on growing boxes [-N, N]^d reduced into the group;
  /// requires a product-of-cyclic-groups carrier.  A factor whose box spans
  /// it is replaced by the full factor, so the final term is exactly the
  /// uniform measure and the final defect is 0.
  static ReiterSequence box(const GroupPtr& g) {
    if (g->cyclic_factors().empty())
      throw DomainError("box scheme needs a product-of-cyclic-groups carrier");
    ReiterSequence F{g, "box", {}};
    int maxdim = *std::max_element(g->cyclic_factors().begin(), g->cyclic_factors().end());
    int nmax = std::max(1, (maxdim + 1) / 2);
    for (int N = 1; N <= nmax; ++N) {
      std::vector<std::vector<int>> windows;
      long total = 1;
      for (int m : g->cyclic_factors()) {
        std::vector<int> win;
        if (2 * N + 1 >= m)
          for (int r = 0; r < m; ++r) win.push_back(r);
        else
          for (int r = -N; r <= N; ++r) win.push_back(((r % m) + m) % m);
        total *= static_cast<long>(win.size());
        windows.push_back(std::move(win));
      }
      std::vector<Rat> w(g->order(), Rat(0));
      Rat unit = rat_of(1, total);
      std::vector<size_t> idx(windows.size(), 0);
      while (true) {
        std::vector<int> c(windows.size());
        for (size_t i = 0; i < windows.size(); ++i) c[i] = windows[i][idx[i]];
        w[g->from_coords(c)] += unit;
        int k = static_cast<int>(idx.size()) - 1;
        while (k >= 0 && idx[k] + 1 == windows[k].size()) idx[k--] = 0;
        if (k < 0) break;
        ++idx[k];
      }
      F.terms.emplace_back(g, std::move(w));
    }
    return F;
  }
};

struct DefectRow {
  int h;                    // translating element
  std::vector<Rat> defect;  // ||delta_h * F_N - F_N||_1 per term
};

struct DefectReport {
  std::vector<DefectRow> rows;
  bool nonincreasing = true;
  Rat final_max{0};

  std::string to_string() const {
    std::ostringstream os;
    os << "defect report (nonincreasing=" << (nonincreasing ? "yes" : "no")
       << ", final max=" << rat_str(final_max) << ")";
    for (const auto& r : rows) {
      os << "\n  h=" << r.h << ":";
      for (const auto& d : r.defect) os << " " << rat_str(d);
    }
    return os.str();
  }
};

inline DefectReport reiter_defect_report(const ReiterSequence& F) {
  DefectReport rep;
  const FiniteGroup& G = *F.group;
  for (int h = 0; h < G.order(); ++h) {
    DefectRow row;
    row.h = h;
    GroupMeasure dh = GroupMeasure::dirac(F.group, h);
    for (const auto& term : F.terms) row.defect.push_back(tv_norm_diff(convolve(dh, term), term));
    for (size_t i = 1; i < row.defect.size(); ++i)
      if (row.defect[i] > row.defect[i - 1]) rep.nonincreasing = false;
    if (!row.defect.empty() && row.defect.back() > rep.final_max)
      rep.final_max = row.defect.back();
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

/// Validation threshold for the terminal defect of a stored scheme.
inline Rat reiter_defect_threshold() { return rat_of(1, 4); }

inline void require_reiter(const ReiterSequence& F) {
  if (F.terms.empty()) throw ConvergenceError("averaging scheme has no terms");
  DefectReport rep = reiter_defect_report(F);
  if (!rep.nonincreasing || rep.final_max > reiter_defect_threshold())
    throw ConvergenceError("averaging scheme fails defect validation; " + rep.to_string());
}

/// Exact Cesaro limit of a vector-valued u over the group.  For a finite
/// group this is the uniform average, independent of the (validated)
/// scheme; u is indexed u[g][component].
inline std::vector<Rat> cesaro_limit(const std::vector<std::vector<Rat>>& u,
                                     const ReiterSequence& F) {
  require_reiter(F);
  const FiniteGroup& G = *F.group;
  if (static_cast<int>(u.size()) != G.order())
    throw DomainError("cesaro_limit: u is not indexed by the group");
  size_t dim = u.empty() ? 0 : u[0].size();
  std::vector<Rat> avg(dim, Rat(0));
  for (int g = 0; g < G.order(); ++g) {
    if (u[g].size() != dim) throw DomainError("cesaro_limit: ragged value vectors");
    for (size_t j = 0; j < dim; ++j) avg[j] += u[g][j];
  }
  for (Rat& x : avg) x /= G.order();
  return avg;
}

/// Value of the N-th partial average, integral of u against the term.
inline std::vector<Rat> scheme_term_average(const std::vector<std::vector<Rat>>& u,
                                            const GroupMeasure& F_N) {
  const FiniteGroup& G = *F_N.group();
  size_t dim = u.empty() ? 0 : u[0].size();
  std::vector<Rat> s(dim, Rat(0));
  for (int g = 0; g < G.order(); ++g)
    for (size_t j = 0; j < dim; ++j) s[j] += F_N[g] * u[g][j];
  return s;
}

}  // namespace recurlab
