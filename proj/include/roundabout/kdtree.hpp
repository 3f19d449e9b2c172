#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "roundabout/types.hpp"

namespace roundabout {

/// Static 2-d tree over a point set. Query returns the index of the
/// closest stored point; equal distances resolve to the lowest insertion
/// index, so results match an exhaustive scan exactly.
class KdTree2 {
 public:
  KdTree2() = default;
  /// Throws ValidationError on an empty set.
  explicit KdTree2(std::span<const Vec2> points);

  std::size_t nearest(const Vec2& q) const;
  const Vec2& point(std::size_t i) const { return points_[i]; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }

 private:
  struct Node {
    int point = -1;  // index into points_
    int left = -1;
    int right = -1;
    int axis = 0;
  };

  int build(std::vector<int>& idx, int lo, int hi, int depth);
  void search(int node, const Vec2& q, double& best_d2, int& best) const;

  std::vector<Vec2> points_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

/// Linear scan with the same tie rule; reference for tests.
std::size_t nearest_linear(std::span<const Vec2> points, const Vec2& q);

inline double squared_distance(const Vec2& a, const Vec2& b) {
  const double dx = a.x() - b.x();
  const double dy = a.y() - b.y();
  return dx * dx + dy * dy;
}

}  // namespace roundabout
