#pragma once

#include <optional>

#include "qdeg/rational.hpp"

namespace qdeg {

// Exact rational linear programming, big enough for the tiny systems that
// show up in fan compatibility checks and cone membership tests.
//
// Standard form: x >= 0, A x = b. Phase 1 decides feasibility; phase 2
// maximises c^T x (only over bounded problems here).

struct LinearProgram {
  // A is m x n, row-major.
  int m = 0, n = 0;
  std::vector<Rat> a;  // m * n
  std::vector<Rat> b;  // m

  Rat& at(int i, int j) { return a[size_t(i) * n + j]; }
  const Rat& at(int i, int j) const { return a[size_t(i) * n + j]; }
};

// Is {x >= 0 : A x = b} nonempty? Returns a feasible point if so.
std::optional<std::vector<Rat>> lp_feasible_point(const LinearProgram& lp);

// max c^T x over {x >= 0 : A x = b}. nullopt if infeasible; throws if
// unbounded (callers only use this on bounded polytopes).
std::optional<Rat> lp_maximize(const LinearProgram& lp, const std::vector<Rat>& c);

}  // namespace qdeg
