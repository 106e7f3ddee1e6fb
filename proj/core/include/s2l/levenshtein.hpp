#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <ranges>
#include <vector>

namespace s2l {

// Unit-cost edit distance (insert, delete, substitute) between two sequences.
// Two-row dynamic program, O(|a|·|b|) time, O(|b|) memory.
template <std::ranges::forward_range A, std::ranges::forward_range B>
std::size_t levenshtein(const A& a, const B& b) {
  const auto m = static_cast<std::size_t>(std::ranges::distance(b));
  std::vector<std::size_t> prev(m + 1), cur(m + 1);
  std::iota(prev.begin(), prev.end(), std::size_t{0});
  std::size_t i = 0;
  for (const auto& x : a) {
    ++i;
    cur[0] = i;
    std::size_t j = 0;
    for (const auto& y : b) {
      ++j;
      const std::size_t substitute = prev[j - 1] + (x == y ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, substitute});
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

}  // namespace s2l
