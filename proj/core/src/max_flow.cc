#include "gdalloc/max_flow.h"

#include <algorithm>
#include <cassert>
#include <limits>
#include <queue>
#include <stdexcept>

namespace gdalloc {

FlowNetwork::FlowNetwork(int num_nodes) : adjacency_(num_nodes) {}

FlowNetwork::ArcId FlowNetwork::AddArc(NodeId from, NodeId to,
                                       int64_t capacity) {
  if (capacity < 0) throw std::invalid_argument("negative arc capacity");
  const auto index = static_cast<int32_t>(arcs_.size());
  arcs_.push_back({to, capacity, capacity});
  arcs_.push_back({from, 0, 0});
  adjacency_[from].push_back(index);
  adjacency_[to].push_back(index + 1);
  return index / 2;
}

void FlowNetwork::SetCapacity(ArcId a, int64_t capacity) {
  const int64_t current_flow = flow(a);
  if (capacity < current_flow) {
    throw std::invalid_argument("capacity below current flow");
  }
  arcs_[2 * a].capacity = capacity;
  arcs_[2 * a].residual = capacity - current_flow;
}

bool FlowNetwork::BuildLevels(NodeId source, NodeId sink) {
  level_.assign(adjacency_.size(), -1);
  std::queue<NodeId> queue;
  level_[source] = 0;
  queue.push(source);
  while (!queue.empty()) {
    const NodeId u = queue.front();
    queue.pop();
    for (int32_t r : adjacency_[u]) {
      const ResidualArc& arc = arcs_[r];
      if (arc.residual > 0 && level_[arc.head] < 0) {
        level_[arc.head] = level_[u] + 1;
        queue.push(arc.head);
      }
    }
  }
  return level_[sink] >= 0;
}

int64_t FlowNetwork::PushBlocking(NodeId node, NodeId sink, int64_t limit) {
  if (node == sink) return limit;
  auto& adj = adjacency_[node];
  for (size_t& k = next_arc_[node]; k < adj.size(); ++k) {
    const int32_t r = adj[k];
    ResidualArc& arc = arcs_[r];
    if (arc.residual <= 0 || level_[arc.head] != level_[node] + 1) continue;
    const int64_t pushed =
        PushBlocking(arc.head, sink, std::min(limit, arc.residual));
    if (pushed > 0) {
      arc.residual -= pushed;
      arcs_[r ^ 1].residual += pushed;
      return pushed;
    }
  }
  return 0;
}

int64_t FlowNetwork::Maximize(NodeId source, NodeId sink) {
  constexpr int64_t kUnbounded = std::numeric_limits<int64_t>::max();
  while (BuildLevels(source, sink)) {
    next_arc_.assign(adjacency_.size(), 0);
    while (PushBlocking(source, sink, kUnbounded) > 0) {
    }
  }
  return NetOutflow(source);
}

std::vector<bool> FlowNetwork::ResidualReachable(
    NodeId root, std::vector<int32_t>* parent_arc) const {
  std::vector<bool> reached(adjacency_.size(), false);
  if (parent_arc != nullptr) parent_arc->assign(adjacency_.size(), -1);
  std::queue<NodeId> queue;
  reached[root] = true;
  queue.push(root);
  while (!queue.empty()) {
    const NodeId u = queue.front();
    queue.pop();
    for (int32_t r : adjacency_[u]) {
      const ResidualArc& arc = arcs_[r];
      if (arc.residual > 0 && !reached[arc.head]) {
        reached[arc.head] = true;
        if (parent_arc != nullptr) (*parent_arc)[arc.head] = r;
        queue.push(arc.head);
      }
    }
  }
  return reached;
}

void FlowNetwork::AugmentAlong(const std::vector<int32_t>& parent_arc,
                               NodeId node, int64_t amount) {
  while (parent_arc[node] >= 0) {
    const int32_t r = parent_arc[node];
    assert(arcs_[r].residual >= amount);
    arcs_[r].residual -= amount;
    arcs_[r ^ 1].residual += amount;
    node = arcs_[r ^ 1].head;
  }
}

void FlowNetwork::PushForward(ArcId a, int64_t amount) {
  ResidualArc& forward = arcs_[2 * a];
  if (forward.residual < amount) {
    throw std::logic_error("push exceeds residual capacity");
  }
  forward.residual -= amount;
  arcs_[2 * a + 1].residual += amount;
}

int64_t FlowNetwork::NetOutflow(NodeId node) const {
  int64_t total = 0;
  for (int32_t r : adjacency_[node]) {
    // Forward half: flow = reverse residual. Reverse half: -flow.
    total += (r % 2 == 0) ? arcs_[r + 1].residual : -arcs_[r].residual;
  }
  return total;
}

}  // namespace gdalloc
