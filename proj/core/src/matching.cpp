#include "s2l/matching.hpp"

#include <cmath>
#include <limits>

#include "s2l/error.hpp"

namespace s2l {

// Shortest-augmenting-path Hungarian method with row/column potentials,
// minimizing the negated scores over a zero-padded square matrix. Columns are
// scanned in ascending order and only strictly better values replace the
// current minimum, so ties resolve to the lowest column index.
Assignment max_matching(const ScoreMatrix& scores) {
  const std::size_t rows = scores.rows(), cols = scores.cols();
  Assignment result;
  if (rows == 0 || cols == 0) return result;
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      if (!std::isfinite(scores(r, c))) throw ValidationError("score matrix has a non-finite entry");

  const std::size_t n = std::max(rows, cols);
  auto cost = [&](std::size_t i, std::size_t j) { return i < rows && j < cols ? -scores(i, j) : 0.0; };
  constexpr double kInf = std::numeric_limits<double>::infinity();

  // 1-based; index 0 is the virtual source.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> owner(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    owner[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = owner[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[owner[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (owner[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      owner[j0] = owner[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<std::size_t> col_of(rows, n);
  for (std::size_t j = 1; j <= n; ++j)
    if (owner[j] != 0 && owner[j] - 1 < rows && j - 1 < cols) col_of[owner[j] - 1] = j - 1;
  for (std::size_t r = 0; r < rows; ++r) {
    if (col_of[r] == n) continue;
    result.pairs.emplace_back(r, col_of[r]);
    result.total += scores(r, col_of[r]);
  }
  return result;
}

}  // namespace s2l
