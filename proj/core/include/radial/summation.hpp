#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

namespace radial {

/// Pairwise (tree) summation with a fixed shape determined only by the length.
inline double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

/// Order-independent sum: sorts a copy first, so any permutation of the same
/// multiset of terms gives the same bits.
inline double canonical_sum(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return pairwise_sum(v);
}

}  // namespace radial
