#include "roundabout/kdtree.hpp"

#include <algorithm>
#include <limits>

#include "roundabout/errors.hpp"

namespace roundabout {

KdTree2::KdTree2(std::span<const Vec2> points) : points_(points.begin(), points.end()) {
  if (points_.empty()) throw ValidationError("k-d tree built over an empty point set");
  std::vector<int> idx(points_.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
  nodes_.reserve(points_.size());
  root_ = build(idx, 0, static_cast<int>(idx.size()), 0);
}

int KdTree2::build(std::vector<int>& idx, int lo, int hi, int depth) {
  if (lo >= hi) return -1;
  const int axis = depth % 2;
  const int mid = lo + (hi - lo) / 2;
  std::nth_element(idx.begin() + lo, idx.begin() + mid, idx.begin() + hi, [&](int a, int b) {
    const double ca = points_[a][axis];
    const double cb = points_[b][axis];
    return ca < cb || (ca == cb && a < b);
  });
  const int node = static_cast<int>(nodes_.size());
  nodes_.push_back({idx[mid], -1, -1, axis});
  const int left = build(idx, lo, mid, depth + 1);
  const int right = build(idx, mid + 1, hi, depth + 1);
  nodes_[node].left = left;
  nodes_[node].right = right;
  return node;
}

void KdTree2::search(int node, const Vec2& q, double& best_d2, int& best) const {
  if (node < 0) return;
  const Node& n = nodes_[node];
  const Vec2& p = points_[n.point];
  const double d2 = squared_distance(p, q);
  if (d2 < best_d2 || (d2 == best_d2 && n.point < best)) {
    best_d2 = d2;
    best = n.point;
  }
  const double diff = q[n.axis] - p[n.axis];
  const int near = diff < 0.0 ? n.left : n.right;
  const int far = diff < 0.0 ? n.right : n.left;
  search(near, q, best_d2, best);
  // Prune only when strictly farther; equidistant points must stay reachable.
  if (diff * diff <= best_d2) search(far, q, best_d2, best);
}

std::size_t KdTree2::nearest(const Vec2& q) const {
  double best_d2 = std::numeric_limits<double>::infinity();
  int best = -1;
  search(root_, q, best_d2, best);
  return static_cast<std::size_t>(best);
}

std::size_t nearest_linear(std::span<const Vec2> points, const Vec2& q) {
  std::size_t best = 0;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double d2 = squared_distance(points[i], q);
    if (d2 < best_d2) {
      best_d2 = d2;
      best = i;
    }
  }
  return best;
}

}  // namespace roundabout
