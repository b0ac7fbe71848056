#include "usot/trajectory.hpp"

#include <algorithm>

namespace usot {

long Trajectory::selected_count() const {
  return static_cast<long>(std::count(selected.begin(), selected.end(), true));
}

double path_reward(std::span<const std::optional<BoxD>> boxes, std::span<const long> path, double gamma) {
  double total = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i)
    total += reward_dp(*boxes[path[i - 1]], *boxes[path[i]], gamma);
  return total;
}

namespace {

struct Node {
  long frame;
  BoxD box;
};

std::vector<long> chain(const std::vector<long>& prev, const std::vector<Node>& nodes, long end) {
  std::vector<long> out;
  for (long i = end; i >= 0; i = prev[i]) out.push_back(nodes[i].frame);
  std::reverse(out.begin(), out.end());
  return out;
}

std::vector<long> select_nodes(const std::vector<Node>& nodes, double gamma, long max_gap) {
  if (!(gamma > 1.0)) throw std::invalid_argument("dp_select: gamma must exceed 1");
  if (max_gap < 1) throw std::invalid_argument("dp_select: max_gap must be at least 1");
  const long n = static_cast<long>(nodes.size());
  if (n == 0) return {};

  // best[i]: highest accumulated reward of a path ending at node i, summed
  // from its first link onward. Round-to-nearest addition is monotone, so
  // extending an optimal prefix stays optimal.
  std::vector<double> best(n, 0.0);
  std::vector<long> prev(n, -1);
  long lo = 0;
  for (long i = 0; i < n; ++i) {
    while (nodes[i].frame - nodes[lo].frame > max_gap) ++lo;
    for (long j = lo; j < i; ++j) {
      const double r = best[j] + reward_dp(nodes[j].box, nodes[i].box, gamma);
      if (r > best[i]) {
        best[i] = r;
        prev[i] = j;
      } else if (r == best[i]) {
        // Equal totals: keep the lexicographically earlier frame sequence.
        std::vector<long> with_j = chain(prev, nodes, j);
        with_j.push_back(nodes[i].frame);
        const std::vector<long> current = chain(prev, nodes, i);
        if (std::lexicographical_compare(with_j.begin(), with_j.end(), current.begin(), current.end()))
          prev[i] = j;
      }
    }
  }

  long end = 0;
  for (long i = 1; i < n; ++i) {
    if (best[i] > best[end]) {
      end = i;
    } else if (best[i] == best[end]) {
      const std::vector<long> path = chain(prev, nodes, i);
      const std::vector<long> incumbent = chain(prev, nodes, end);
      if (std::lexicographical_compare(path.begin(), path.end(), incumbent.begin(), incumbent.end())) end = i;
    }
  }
  std::vector<long> end_path = chain(prev, nodes, end);
  return end_path;
}

}  // namespace

std::vector<long> dp_select(std::span<const CandidateFrame> candidates, double gamma, long max_gap) {
  std::vector<Node> nodes;
  for (const CandidateFrame& c : candidates) {
    if (!c.candidate) continue;
    if (!nodes.empty() && c.frame_index <= nodes.back().frame)
      throw std::invalid_argument("dp_select: frame indices must be strictly increasing");
    nodes.push_back({c.frame_index, *c.candidate});
  }
  return select_nodes(nodes, gamma, max_gap);
}

std::vector<long> dp_select(std::span<const std::optional<BoxD>> boxes, double gamma, long max_gap) {
  std::vector<Node> nodes;
  for (std::size_t t = 0; t < boxes.size(); ++t)
    if (boxes[t]) nodes.push_back({static_cast<long>(t), *boxes[t]});
  return select_nodes(nodes, gamma, max_gap);
}

std::vector<BoxD> interpolate(std::span<const std::optional<BoxD>> boxes, const std::vector<bool>& selected) {
  const long n = static_cast<long>(boxes.size());
  if (static_cast<long>(selected.size()) != n)
    throw std::invalid_argument("interpolate: selection length differs from video length");
  std::vector<long> knots;
  for (long t = 0; t < n; ++t) {
    if (!selected[t]) continue;
    if (!boxes[t]) throw std::invalid_argument("interpolate: selected frame has no candidate");
    knots.push_back(t);
  }
  if (knots.empty()) throw UnusableVideo("interpolate: no frame selected");

  std::vector<BoxD> pseudo(n);
  for (long t = 0; t <= knots.front(); ++t) pseudo[t] = *boxes[knots.front()];
  for (long t = knots.back(); t < n; ++t) pseudo[t] = *boxes[knots.back()];
  for (std::size_t k = 1; k < knots.size(); ++k) {
    const long t0 = knots[k - 1], t1 = knots[k];
    for (long t = t0; t <= t1; ++t) pseudo[t] = lerp_boxes(*boxes[t0], *boxes[t1], t0, t1, t);
  }
  return pseudo;
}

Trajectory build_trajectory(std::vector<std::optional<BoxD>> boxes, double gamma, long max_gap) {
  Trajectory traj;
  traj.boxes = std::move(boxes);
  traj.selected.assign(traj.boxes.size(), false);
  for (long t : dp_select(std::span<const std::optional<BoxD>>(traj.boxes), gamma, max_gap))
    traj.selected[t] = true;
  if (traj.selected_count() > 0) traj.pseudo = interpolate(traj.boxes, traj.selected);
  return traj;
}

}  // namespace usot
