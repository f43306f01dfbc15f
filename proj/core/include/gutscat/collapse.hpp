#pragma once

#include <array>

#include "gutscat/cell_complex.hpp"

namespace gutscat {

struct CollapseResult {
  std::array<int, 4> remaining{0, 0, 0, 0};
  bool connected = false;

  bool to_point() const { return remaining == std::array<int, 4>{1, 0, 0, 0}; }
  /// A connected graph without leaves and with V == E is a circle.
  bool to_circle() const {
    return remaining[2] == 0 && remaining[3] == 0 && remaining[0] > 0 && remaining[0] == remaining[1] && connected;
  }
};

/// Greedy elementary collapses (free face with a single coface occurrence),
/// highest dimension first, in index order. May stop short of a minimal
/// spine; callers treat a stuck collapse as inconclusive.
CollapseResult greedy_collapse(const ChainComplex& cc);

}  // namespace gutscat
