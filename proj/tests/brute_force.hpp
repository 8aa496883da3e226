#pragma once

#include <algorithm>
#include <array>
#include <limits>
#include <vector>

namespace testsupport {

// Exhaustive reference for the arc alignment distance. Enumerates every
// order-preserving matching between phrases and the three arc positions.
// With three or more phrases all positions must be matched; with fewer,
// each unmatched position costs 1. Unmatched phrases are free.
inline double brute_force_alignment(const std::vector<std::array<double, 3>>& sim) {
  const int n = static_cast<int>(sim.size());
  const bool partial = n < 3;
  double best = std::numeric_limits<double>::infinity();
  // Each arc position gets a phrase index or -1.
  std::array<int, 3> pick{};
  for (pick[0] = -1; pick[0] < n; ++pick[0]) {
    for (pick[1] = -1; pick[1] < n; ++pick[1]) {
      for (pick[2] = -1; pick[2] < n; ++pick[2]) {
        int last = -1;
        bool ok = true;
        double cost = 0.0;
        for (int j = 0; j < 3 && ok; ++j) {
          if (pick[j] < 0) {
            if (!partial) ok = false;
            cost += 1.0;
          } else {
            if (pick[j] <= last) ok = false;
            last = pick[j];
            cost += 1.0 - sim[pick[j]][j];
          }
        }
        if (ok) best = std::min(best, cost);
      }
    }
  }
  return best;
}

}  // namespace testsupport
