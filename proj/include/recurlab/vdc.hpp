#pragma once

#include <vector>

#include "recurlab/reiter.hpp"

namespace recurlab {

struct VdcReport {
  Rat lhs;                        // || avg_g u_g ||^2
  Rat rhs;                        // double average against H x H
  std::vector<Rat> corollary_rhs; // one value per stored term, with F'_n = F_n * F_n^*
  bool holds = false;             // lhs <= rhs and lhs <= every corollary value
};

namespace detail {

inline Rat dot(const std::vector<Rat>& a, const std::vector<Rat>& b) {
  Rat s(0);
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace detail

/**
 * Exact finite-group instance of the van der Corput estimate: for
 * vector-valued u on the group, a validated averaging scheme F and any
 * auxiliary probability measure H,
 *
 *   || avg_g u_g ||^2  <=  avg_g sum_{h,l} H(h) H(l) <u_{hg}, u_{lg}>,
 *
 * and, in the convolved form, <= sum_k (F_n * F_n^*)(k) avg_g <u_g, u_{kg}>
 * for every stored term.  Both sides are computed exactly and the
 * inequalities are reported, not assumed.
 */
inline VdcReport vdc_verify(const std::vector<std::vector<Rat>>& u, const ReiterSequence& F,
                            const GroupMeasure& H) {
  require_same_group(F.group, H.group());
  require_reiter(F);
  const FiniteGroup& G = *H.group();
  if (static_cast<int>(u.size()) != G.order())
    throw DomainError("vdc_verify: u is not indexed by the group");
  size_t dim = u.empty() ? 0 : u[0].size();
  for (const auto& v : u)
    if (v.size() != dim) throw DomainError("vdc_verify: ragged value vectors");

  VdcReport rep;
  std::vector<Rat> mean(dim, Rat(0));
  for (int g = 0; g < G.order(); ++g)
    for (size_t j = 0; j < dim; ++j) mean[j] += u[g][j];
  for (Rat& x : mean) x /= G.order();
  rep.lhs = detail::dot(mean, mean);

  // avg_g || sum_h H(h) u_{hg} ||^2
  rep.rhs = 0;
  for (int g = 0; g < G.order(); ++g) {
    std::vector<Rat> s(dim, Rat(0));
    for (int h = 0; h < G.order(); ++h) {
      if (H[h] == 0) continue;
      const auto& v = u[G.mul(h, g)];
      for (size_t j = 0; j < dim; ++j) s[j] += H[h] * v[j];
    }
    rep.rhs += detail::dot(s, s);
  }
  rep.rhs /= G.order();

  // avg_g <u_g, u_{kg}> for each k, reused across terms
  std::vector<Rat> corr(G.order(), Rat(0));
  for (int k = 0; k < G.order(); ++k) {
    for (int g = 0; g < G.order(); ++g) corr[k] += detail::dot(u[g], u[G.mul(k, g)]);
    corr[k] /= G.order();
  }
  rep.holds = rep.lhs <= rep.rhs;
  for (const auto& term : F.terms) {
    GroupMeasure conv = convolve(term, involute(term));
    Rat v(0);
    for (int k = 0; k < G.order(); ++k) v += conv[k] * corr[k];
    rep.corollary_rhs.push_back(v);
    if (rep.lhs > v) rep.holds = false;
  }
  return rep;
}

}  // namespace recurlab
