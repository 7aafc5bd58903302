#pragma once

#include <string>

#include "recurlab/mps.hpp"
#include "recurlab/random_systems.hpp"

namespace ts {

inline std::string data_path(const std::string& name) {
  return std::string(RECURLAB_TEST_DATA_DIR) + "/" + name;
}

/// Z/2 acting on {a,b} by swap (first action) and trivially (second).
inline recurlab::FiniteMPS two_point_swap() {
  auto G = recurlab::FiniteGroup::cyclic(2);
  return recurlab::FiniteMPS(G, {"a", "b"}, {recurlab::rat_of(1, 2), recurlab::rat_of(1, 2)},
                             {{{0, 1}, {1, 0}}, {{0, 1}, {0, 1}}});
}

/// Z/2 with both actions the double swap (a b)(c d): ergodic fails, and the
/// two invariant factors coincide without joining to the full partition.
inline recurlab::FiniteMPS double_swap_pairs() {
  auto G = recurlab::FiniteGroup::cyclic(2);
  recurlab::Action swap2 = {{0, 1, 2, 3}, {1, 0, 3, 2}};
  return recurlab::FiniteMPS(
      G, {"a", "b", "c", "d"},
      {recurlab::rat_of(1, 4), recurlab::rat_of(1, 4), recurlab::rat_of(1, 4),
       recurlab::rat_of(1, 4)},
      {swap2, swap2});
}

}  // namespace ts
