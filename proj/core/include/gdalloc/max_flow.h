// Integer maximum flow (Dinic) with support for growing a single arc's
// capacity and re-augmenting from the previous maximum.

#ifndef GDALLOC_MAX_FLOW_H_
#define GDALLOC_MAX_FLOW_H_

#include <cstdint>
#include <vector>

namespace gdalloc {

class FlowNetwork {
 public:
  using NodeId = int32_t;
  using ArcId = int32_t;

  explicit FlowNetwork(int num_nodes);

  ArcId AddArc(NodeId from, NodeId to, int64_t capacity);

  int num_nodes() const { return static_cast<int>(adjacency_.size()); }
  int num_arcs() const { return static_cast<int>(arcs_.size() / 2); }

  NodeId tail(ArcId a) const { return arcs_[2 * a + 1].head; }
  NodeId head(ArcId a) const { return arcs_[2 * a].head; }
  int64_t capacity(ArcId a) const { return arcs_[2 * a].capacity; }
  int64_t flow(ArcId a) const { return arcs_[2 * a + 1].residual; }

  // Capacity may only grow, or shrink down to the current flow.
  void SetCapacity(ArcId a, int64_t capacity);

  // Raises the current flow to a maximum s-t flow and returns its value.
  // Arcs are scanned in insertion order, so the result is deterministic.
  int64_t Maximize(NodeId source, NodeId sink);

  // Breadth-first search over residual arcs. Fills parent_arc (residual arc
  // index, -1 for unreached nodes and the root) and returns reached flags.
  std::vector<bool> ResidualReachable(NodeId root,
                                      std::vector<int32_t>* parent_arc = nullptr) const;

  // Pushes `amount` along the residual path recorded by ResidualReachable,
  // ending at `node`.
  void AugmentAlong(const std::vector<int32_t>& parent_arc, NodeId node,
                    int64_t amount);

  // Adds `amount` of flow on arc a; requires residual capacity.
  void PushForward(ArcId a, int64_t amount);

  // Net flow leaving `node`.
  int64_t NetOutflow(NodeId node) const;

 private:
  struct ResidualArc {
    NodeId head;
    int64_t capacity;  // meaningful on forward halves only
    int64_t residual;
  };

  bool BuildLevels(NodeId source, NodeId sink);
  int64_t PushBlocking(NodeId node, NodeId sink, int64_t limit);

  std::vector<ResidualArc> arcs_;
  std::vector<std::vector<int32_t>> adjacency_;
  std::vector<int32_t> level_;
  std::vector<size_t> next_arc_;
};

}  // namespace gdalloc

#endif  // GDALLOC_MAX_FLOW_H_
