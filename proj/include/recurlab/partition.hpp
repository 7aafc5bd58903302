#pragma once

#include <numeric>
#include <string>
#include <vector>

#include "recurlab/rational.hpp"

namespace recurlab {

/**
 * A set partition of {0,...,n-1}, normalized so block ids appear in order
 * of each block's smallest point.  Stands for the sigma-algebra generated
 * by its blocks; a finer partition is a larger sigma-algebra.
 */
class Partition {
 public:
  Partition() = default;

  explicit Partition(std::vector<int> block_of, std::string provenance = "")
      : provenance_(std::move(provenance)) {
    normalize(std::move(block_of));
  }

  static Partition singletons(int n, std::string provenance = "") {
    std::vector<int> b(n);
    std::iota(b.begin(), b.end(), 0);
    return Partition(std::move(b), std::move(provenance));
  }

  static Partition one_block(int n) { return Partition(std::vector<int>(n, 0)); }

  int size() const { return static_cast<int>(block_of_.size()); }
  int block_count() const { return static_cast<int>(blocks_.size()); }
  int block_of(int x) const { return block_of_[x]; }
  const std::vector<std::vector<int>>& blocks() const { return blocks_; }
  const std::vector<int>& block(int b) const { return blocks_[b]; }
  const std::string& provenance() const { return provenance_; }
  void set_provenance(std::string p) { provenance_ = std::move(p); }

  bool operator==(const Partition& o) const { return block_of_ == o.block_of_; }

  /// True if every block of *this is contained in a block of coarser.
  bool refines(const Partition& coarser) const {
    if (size() != coarser.size()) throw DomainError("partition size mismatch");
    for (const auto& blk : blocks_) {
      int c = coarser.block_of(blk[0]);
      for (int x : blk)
        if (coarser.block_of(x) != c) return false;
    }
    return true;
  }

 private:
  void normalize(std::vector<int> raw) {
    std::vector<int> remap(raw.size(), -1);
    int next = 0;
    block_of_.resize(raw.size());
    for (size_t x = 0; x < raw.size(); ++x) {
      int r = raw[x];
      if (r < 0 || static_cast<size_t>(r) >= raw.size())
        throw DomainError("partition: block id out of range");
      if (remap[r] < 0) remap[r] = next++;
      block_of_[x] = remap[r];
    }
    blocks_.assign(next, {});
    for (size_t x = 0; x < raw.size(); ++x) blocks_[block_of_[x]].push_back(static_cast<int>(x));
  }

  std::vector<int> block_of_;
  std::vector<std::vector<int>> blocks_;
  std::string provenance_;
};

/// Coarsest partition refining both: blocks are nonempty pairwise
/// intersections.  Realizes the join of the generated sigma-algebras.
inline Partition join(const Partition& p, const Partition& q) {
  if (p.size() != q.size()) throw DomainError("join: partition size mismatch");
  std::vector<int> b(p.size());
  std::vector<std::vector<int>> seen(p.block_count(), std::vector<int>(q.block_count(), -1));
  int next = 0;
  for (int x = 0; x < p.size(); ++x) {
    int& id = seen[p.block_of(x)][q.block_of(x)];
    if (id < 0) id = next++;
    b[x] = id;
  }
  return Partition(std::move(b));
}

/// Finest common coarsening: connected components of the block-overlap
/// graph.  Realizes the meet (intersection) of the generated sigma-algebras.
inline Partition meet(const Partition& p, const Partition& q) {
  if (p.size() != q.size()) throw DomainError("meet: partition size mismatch");
  std::vector<int> parent(p.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto unite = [&](int a, int b) { parent[find(a)] = find(b); };
  for (const auto& blk : p.blocks())
    for (size_t i = 1; i < blk.size(); ++i) unite(blk[0], blk[i]);
  for (const auto& blk : q.blocks())
    for (size_t i = 1; i < blk.size(); ++i) unite(blk[0], blk[i]);
  std::vector<int> b(p.size());
  for (int x = 0; x < p.size(); ++x) b[x] = find(x);
  return Partition(std::move(b));
}

/// Equality of the generated sigma-algebras modulo the null sets of the
/// given mass vector: both partitions must induce the same blocks once
/// zero-mass points are discarded.
inline bool equal_mod_null(const Partition& p, const Partition& q, const std::vector<Rat>& mass) {
  if (p.size() != q.size() || static_cast<int>(mass.size()) != p.size())
    throw DomainError("equal_mod_null: size mismatch");
  std::vector<int> pb, qb;
  std::vector<int> pmap(p.block_count(), -1), qmap(q.block_count(), -1);
  int pn = 0, qn = 0;
  for (int x = 0; x < p.size(); ++x) {
    if (mass[x] == 0) continue;
    int a = p.block_of(x), b = q.block_of(x);
    if (pmap[a] < 0) pmap[a] = pn++;
    if (qmap[b] < 0) qmap[b] = qn++;
    pb.push_back(pmap[a]);
    qb.push_back(qmap[b]);
  }
  return pb == qb;
}

}  // namespace recurlab
