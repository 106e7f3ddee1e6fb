#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace s2l {

// Dense row-major matrix of pairwise scores.
class ScoreMatrix {
 public:
  ScoreMatrix() = default;
  ScoreMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct Assignment {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (row, col), ascending row
  double total = 0.0;  // sum of matched scores, accumulated in row order
};

// Maximum-weight one-to-one assignment of size min(rows, cols), solved with
// the Hungarian method on the zero-padded square problem.
Assignment max_matching(const ScoreMatrix& scores);

}  // namespace s2l
