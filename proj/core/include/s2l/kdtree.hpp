#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace s2l {

inline constexpr std::size_t kMaxFeatureDim = 3;
using FeaturePoint = std::array<double, kMaxFeatureDim>;

struct Neighbor {
  std::size_t index;  // position in the point list given to the tree
  double distance2;

  // Distance first, then index. The tree and the linear scan both order by it.
  friend bool operator<(const Neighbor& a, const Neighbor& b) {
    if (a.distance2 != b.distance2) return a.distance2 < b.distance2;
    return a.index < b.index;
  }
};

inline double squared_distance(const FeaturePoint& a, const FeaturePoint& b, std::size_t dim) {
  double s = 0.0;
  for (std::size_t d = 0; d < dim; ++d) {
    const double diff = a[d] - b[d];
    s += diff * diff;
  }
  return s;
}

// Exact k-nearest-neighbor search over a static point set. Results are the k
// smallest (distance, index) pairs, so equal distances resolve to the lower
// point index.
class KdTree {
 public:
  KdTree() = default;
  KdTree(std::vector<FeaturePoint> points, std::size_t dim);

  std::size_t size() const { return points_.size(); }
  std::size_t dim() const { return dim_; }
  const FeaturePoint& point(std::size_t i) const { return points_[i]; }

  std::vector<Neighbor> nearest(const FeaturePoint& query, std::size_t k) const;

  // Reference implementation used to check the tree.
  std::vector<Neighbor> nearest_linear(const FeaturePoint& query, std::size_t k) const;

 private:
  struct Node {
    std::size_t point = 0;
    std::size_t axis = 0;
    int left = -1;
    int right = -1;
  };

  int build(std::span<std::size_t> order, std::size_t depth);
  void search(int node, const FeaturePoint& query, std::size_t k, std::vector<Neighbor>& heap) const;

  std::vector<FeaturePoint> points_;
  std::size_t dim_ = 0;
  std::vector<Node> nodes_;
  int root_ = -1;
};

}  // namespace s2l
