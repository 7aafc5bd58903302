#pragma once

#include <functional>
#include <string>
#include <vector>

#include "recurlab/mps.hpp"
#include "recurlab/roth.hpp"

namespace recurlab {

/// Exact density |E| / |G| of a subset of a finite group.
inline Rat upper_density(const GroupPtr& G, const std::vector<char>& E) {
  if (static_cast<int>(E.size()) != G->order())
    throw DomainError("subset indicator has wrong length");
  long count = 0;
  for (char c : E)
    if (c) ++count;
  return rat_of(count, G->order());
}

struct WindowDensityReport {
  std::vector<Rat> by_radius;  // best window density at radius 1..max_radius
  Rat value;                   // at max_radius
};

/**
 * Window estimate of the upper density of a subset of Z^d given by a
 * membership predicate: for each box radius N up to max_radius, the maximum
 * over translates t (|t|_inf <= scan_radius) of |E n (t + [-N,N]^d)| /
 * (2N+1)^d.  The true upper Banach density is a sup over all windows; only
 * these finitely many are inspected.
 */
inline WindowDensityReport window_upper_density(
    int dim, const std::function<bool(const std::vector<long>&)>& member, int max_radius,
    int scan_radius) {
  if (dim < 1 || dim > 3) throw DomainError("window density supports dimensions 1..3");
  if (max_radius < 1) throw DomainError("window radius must be positive");
  if (scan_radius < 0) throw DomainError("scan radius must be nonnegative");
  const long R = max_radius + scan_radius;
  const long side = 2 * R + 1;
  double cells = 1;
  for (int i = 0; i < dim; ++i) cells *= static_cast<double>(side);
  if (cells > 4e6) throw DomainError("window scan region too large");

  // evaluate the predicate once over the full region, flat mixed-radix
  std::vector<char> val(static_cast<size_t>(cells), 0);
  std::vector<long> p(dim, -R);
  size_t idx = 0;
  while (true) {
    val[idx++] = member(p) ? 1 : 0;
    int i = dim - 1;
    while (i >= 0 && p[i] == R) p[i--] = -R;
    if (i < 0) break;
    ++p[i];
  }
  auto flat = [&](const std::vector<long>& q) {
    size_t f = 0;
    for (int i = 0; i < dim; ++i) f = f * side + static_cast<size_t>(q[i] + R);
    return f;
  };

  WindowDensityReport rep;
  for (int N = 1; N <= max_radius; ++N) {
    long best = -1;
    std::vector<long> t(dim, -scan_radius);
    while (true) {
      long count = 0;
      std::vector<long> u(dim, -N);
      while (true) {
        std::vector<long> q(dim);
        for (int i = 0; i < dim; ++i) q[i] = t[i] + u[i];
        if (val[flat(q)]) ++count;
        int i = dim - 1;
        while (i >= 0 && u[i] == N) u[i--] = -N;
        if (i < 0) break;
        ++u[i];
      }
      best = std::max(best, count);
      int i = dim - 1;
      while (i >= 0 && t[i] == scan_radius) t[i--] = -scan_radius;
      if (i < 0) break;
      ++t[i];
    }
    long box = 1;
    for (int i = 0; i < dim; ++i) box *= 2L * N + 1;
    rep.by_radius.push_back(rat_of(best, box));
  }
  rep.value = rep.by_radius.back();
  return rep;
}

/// The translation system on X = G x G with T_1^g(x,y) = (gx, y) and
/// T_2^g(x,y) = (x, gy), uniform mass; densities of subsets of G x G equal
/// measures of the corresponding point sets.
inline FiniteMPS corners_translation_system(const GroupPtr& G) {
  const int n = G->order();
  std::vector<Rat> mass(static_cast<size_t>(n) * n, rat_of(1, static_cast<long>(n) * n));
  std::vector<std::string> labels(static_cast<size_t>(n) * n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) labels[static_cast<size_t>(x) * n + y] =
        "(" + std::to_string(x) + "," + std::to_string(y) + ")";
  Action t1(n, std::vector<int>(static_cast<size_t>(n) * n));
  Action t2(n, std::vector<int>(static_cast<size_t>(n) * n));
  for (int g = 0; g < n; ++g)
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) {
        t1[g][static_cast<size_t>(x) * n + y] = G->mul(g, x) * n + y;
        t2[g][static_cast<size_t>(x) * n + y] = x * n + G->mul(g, y);
      }
  return FiniteMPS(G, std::move(labels), std::move(mass), {std::move(t1), std::move(t2)});
}

struct CornersReport {
  Rat density;    // d(E)
  Rat epsilon;
  Rat threshold;  // d(E)^4 - epsilon
  std::vector<Rat> corner_density;  // per g: d(E n (g,id)E n (g,g)E)
  std::vector<char> good;           // >= threshold, the theorem's set
  std::vector<char> strictly_good;  // > threshold
  bool id_good = false;
  SyndeticityWitness syndetic;      // covers for the good set
  bool cross_validated = false;     // strictly_good(g) == R_eps(g^{-1}) on the translation system
  CorrelationReport translation_report;
};

/**
 * The combinatorial corners statement on a finite group, exactly: for
 * E in G x G computes d(E n (g,id)E n (g,g)E) per g, the set where it
 * reaches d(E)^4 - eps, a covering witness, and cross-validates the strict
 * version against the recurrence analysis of the translation system, where
 * the preimage translate at g is the left translate by g^{-1}.
 */
inline CornersReport corners_check(const GroupPtr& G, const std::vector<char>& E,
                                   const Rat& epsilon) {
  const int n = G->order();
  if (static_cast<int>(E.size()) != n * n)
    throw DomainError("corner subset indicator must cover G x G");
  if (epsilon <= 0) throw PreconditionError("epsilon must be positive");

  CornersReport rep;
  rep.density = 0;
  for (char c : E)
    if (c) rep.density += 1;
  rep.density /= static_cast<long>(n) * n;
  rep.epsilon = epsilon;
  rep.threshold = rep.density * rep.density * rep.density * rep.density - epsilon;

  auto at = [&](int x, int y) { return E[static_cast<size_t>(x) * n + y] != 0; };
  std::vector<int> good_elems;
  for (int g = 0; g < n; ++g) {
    // (g,id)E contains (x,y) iff (g^{-1}x, y) in E; (g,g)E likewise
    const int gi = G->inv(g);
    long count = 0;
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        if (at(x, y) && at(G->mul(gi, x), y) && at(G->mul(gi, x), G->mul(gi, y))) ++count;
    Rat d = rat_of(count, static_cast<long>(n) * n);
    rep.corner_density.push_back(d);
    rep.good.push_back(d >= rep.threshold ? 1 : 0);
    rep.strictly_good.push_back(d > rep.threshold ? 1 : 0);
    if (rep.good.back()) good_elems.push_back(g);
  }
  rep.id_good = rep.good[G->id()] != 0;
  if (!good_elems.empty()) rep.syndetic = syndeticity_witness(*G, good_elems);

  rep.translation_report = roth_verify(corners_translation_system(G), E, epsilon);
  rep.cross_validated = true;
  for (int g = 0; g < n; ++g)
    if ((rep.strictly_good[g] != 0) != (rep.translation_report.in_R[G->inv(g)] != 0))
      rep.cross_validated = false;
  for (int g = 0; g < n; ++g)
    if (rep.corner_density[g] != rep.translation_report.c[G->inv(g)]) rep.cross_validated = false;
  return rep;
}

}  // namespace recurlab
