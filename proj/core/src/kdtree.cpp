#include "s2l/kdtree.hpp"

#include <algorithm>
#include <numeric>

#include "s2l/error.hpp"

namespace s2l {

KdTree::KdTree(std::vector<FeaturePoint> points, std::size_t dim) : points_(std::move(points)), dim_(dim) {
  if (dim_ == 0 || dim_ > kMaxFeatureDim) throw ValidationError("k-d tree dimension out of range");
  std::vector<std::size_t> order(points_.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  nodes_.reserve(points_.size());
  root_ = build(order, 0);
}

int KdTree::build(std::span<std::size_t> order, std::size_t depth) {
  if (order.empty()) return -1;
  const std::size_t axis = depth % dim_;
  const std::size_t mid = order.size() / 2;
  std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(mid), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     if (points_[a][axis] != points_[b][axis]) return points_[a][axis] < points_[b][axis];
                     return a < b;
                   });
  const int id = static_cast<int>(nodes_.size());
  nodes_.push_back({order[mid], axis, -1, -1});
  const int left = build(order.subspan(0, mid), depth + 1);
  const int right = build(order.subspan(mid + 1), depth + 1);
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

void KdTree::search(int node, const FeaturePoint& query, std::size_t k, std::vector<Neighbor>& heap) const {
  if (node < 0) return;
  const Node& n = nodes_[node];
  const Neighbor cand{n.point, squared_distance(query, points_[n.point], dim_)};
  if (heap.size() < k) {
    heap.push_back(cand);
    std::push_heap(heap.begin(), heap.end());
  } else if (cand < heap.front()) {
    std::pop_heap(heap.begin(), heap.end());
    heap.back() = cand;
    std::push_heap(heap.begin(), heap.end());
  }
  const double diff = query[n.axis] - points_[n.point][n.axis];
  const int near = diff < 0 ? n.left : n.right;
  const int far = diff < 0 ? n.right : n.left;
  search(near, query, k, heap);
  // Points beyond the splitting plane are at least diff^2 away. Equal distance
  // can still win on index, hence <=.
  if (heap.size() < k || diff * diff <= heap.front().distance2) search(far, query, k, heap);
}

std::vector<Neighbor> KdTree::nearest(const FeaturePoint& query, std::size_t k) const {
  std::vector<Neighbor> heap;
  k = std::min(k, points_.size());
  if (k == 0) return heap;
  heap.reserve(k);
  search(root_, query, k, heap);
  std::sort_heap(heap.begin(), heap.end());
  return heap;
}

std::vector<Neighbor> KdTree::nearest_linear(const FeaturePoint& query, std::size_t k) const {
  std::vector<Neighbor> all;
  all.reserve(points_.size());
  for (std::size_t i = 0; i < points_.size(); ++i) all.push_back({i, squared_distance(query, points_[i], dim_)});
  k = std::min(k, all.size());
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k), all.end());
  all.resize(k);
  return all;
}

}  // namespace s2l
