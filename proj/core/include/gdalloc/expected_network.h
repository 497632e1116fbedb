// The expected network: source -> campaign (demand), campaign -> user type
// (targeting edge), user type -> sink (supply).

#ifndef GDALLOC_EXPECTED_NETWORK_H_
#define GDALLOC_EXPECTED_NETWORK_H_

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "gdalloc/instance.h"
#include "gdalloc/max_flow.h"

namespace gdalloc {

// Capacity rule for the campaign -> type arcs.
class InnerCapacity {
 public:
  // Every targeting arc gets capacity M (times the demand scale).
  static InnerCapacity TotalDemand() { return InnerCapacity(-1, {}); }
  static InnerCapacity Uniform(int64_t capacity) {
    return InnerCapacity(capacity, {});
  }
  // One capacity per EdgeId.
  static InnerCapacity PerEdge(std::vector<int64_t> capacities) {
    return InnerCapacity(-1, std::move(capacities));
  }

  int64_t For(const Instance& instance, EdgeId e, int64_t demand_scale) const;

 private:
  InnerCapacity(int64_t uniform, std::vector<int64_t> per_edge)
      : uniform_(uniform), per_edge_(std::move(per_edge)) {}

  int64_t uniform_;
  std::vector<int64_t> per_edge_;
};

class PlanUnavailableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ExpectedNetwork {
 public:
  // supply[j] is the capacity of arc (u_j, t). Source arcs carry
  // W_i * demand_scale. Starts with zero flow.
  ExpectedNetwork(const Instance& instance, std::span<const int64_t> supply,
                  const InnerCapacity& inner = InnerCapacity::TotalDemand(),
                  int64_t demand_scale = 1);

  // Maximizes the flow and returns its value.
  int64_t Solve();

  // Adds one unit of supply to type j, re-maximizes and returns the new
  // value. Costs at most one residual search; searches that fail are cached
  // until the next augmentation.
  int64_t IncrementSupply(UserTypeId j);

  int64_t value() const { return value_; }
  // Flow value that routes every demand: M * demand_scale.
  int64_t required() const { return required_; }
  bool saturated() const { return value_ >= required_; }

  // C_{i,j} = flow on each targeting arc. Requires a saturating maximum flow.
  CapacityPlan ExtractPlan() const;

  // Campaigns on the source side of the minimum cut of the current maximum
  // flow.
  std::vector<CampaignId> SourceSideCampaigns() const;

  const FlowNetwork& graph() const { return network_; }
  FlowNetwork::NodeId source() const { return 0; }
  FlowNetwork::NodeId sink() const { return 1; }
  FlowNetwork::NodeId campaign_node(CampaignId i) const { return 2 + i; }
  FlowNetwork::NodeId type_node(UserTypeId j) const {
    return 2 + num_campaigns_ + j;
  }
  FlowNetwork::ArcId source_arc(CampaignId i) const { return source_arcs_[i]; }
  FlowNetwork::ArcId edge_arc(EdgeId e) const { return edge_arcs_[e]; }
  FlowNetwork::ArcId sink_arc(UserTypeId j) const { return sink_arcs_[j]; }

 private:
  FlowNetwork network_;
  int num_campaigns_ = 0;
  std::vector<FlowNetwork::ArcId> source_arcs_;
  std::vector<FlowNetwork::ArcId> edge_arcs_;
  std::vector<FlowNetwork::ArcId> sink_arcs_;
  int64_t required_ = 0;
  int64_t value_ = 0;
  bool at_maximum_ = false;

  // Source-reachable set after the last failed augmenting search.
  std::vector<bool> reachable_;
  bool reachable_valid_ = false;
};

}  // namespace gdalloc

#endif  // GDALLOC_EXPECTED_NETWORK_H_
