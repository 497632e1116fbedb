#include "gdalloc/expected_network.h"

#include <algorithm>

namespace gdalloc {

int64_t InnerCapacity::For(const Instance& instance, EdgeId e,
                           int64_t demand_scale) const {
  if (!per_edge_.empty()) return per_edge_[e];
  if (uniform_ >= 0) return uniform_;
  return instance.total_demand() * demand_scale;
}

ExpectedNetwork::ExpectedNetwork(const Instance& instance,
                                 std::span<const int64_t> supply,
                                 const InnerCapacity& inner,
                                 int64_t demand_scale)
    : network_(2 + instance.num_campaigns() + instance.num_types()),
      num_campaigns_(instance.num_campaigns()),
      required_(instance.total_demand() * demand_scale) {
  if (static_cast<int>(supply.size()) != instance.num_types()) {
    throw std::invalid_argument("supply length must equal number of types");
  }
  // Arc insertion order fixes which maximum flow Solve() lands on: source
  // arcs by campaign, targeting arcs by (campaign, type), sink arcs by type.
  source_arcs_.reserve(instance.num_campaigns());
  for (CampaignId i = 0; i < instance.num_campaigns(); ++i) {
    source_arcs_.push_back(network_.AddArc(
        source(), campaign_node(i), instance.demand(i) * demand_scale));
  }
  edge_arcs_.assign(instance.num_edges(), -1);
  for (EdgeId e = 0; e < instance.num_edges(); ++e) {
    const Edge& edge = instance.edge(e);
    if (edge.campaign < 0 || edge.campaign >= instance.num_campaigns() ||
        edge.type < 0 || edge.type >= instance.num_types()) {
      continue;
    }
    edge_arcs_[e] =
        network_.AddArc(campaign_node(edge.campaign), type_node(edge.type),
                        inner.For(instance, e, demand_scale));
  }
  sink_arcs_.reserve(instance.num_types());
  for (UserTypeId j = 0; j < instance.num_types(); ++j) {
    sink_arcs_.push_back(network_.AddArc(type_node(j), sink(), supply[j]));
  }
}

int64_t ExpectedNetwork::Solve() {
  value_ = network_.Maximize(source(), sink());
  at_maximum_ = true;
  reachable_valid_ = false;
  return value_;
}

int64_t ExpectedNetwork::IncrementSupply(UserTypeId j) {
  if (!at_maximum_) Solve();
  const FlowNetwork::ArcId arc = sink_arcs_[j];
  network_.SetCapacity(arc, network_.capacity(arc) + 1);

  // The flow was maximum before, so any augmenting path must end with the
  // arc just widened; it exists iff u_j is reachable from the source. The
  // capacity change does not alter reachability from the source.
  const FlowNetwork::NodeId node = type_node(j);
  if (reachable_valid_) {
    if (!reachable_[node]) return value_;
    reachable_valid_ = false;
  }
  std::vector<int32_t> parent;
  std::vector<bool> reached = network_.ResidualReachable(source(), &parent);
  if (!reached[node]) {
    reachable_ = std::move(reached);
    reachable_valid_ = true;
    return value_;
  }
  network_.AugmentAlong(parent, node, 1);
  network_.PushForward(arc, 1);
  value_ += 1;
  return value_;
}

CapacityPlan ExpectedNetwork::ExtractPlan() const {
  if (!at_maximum_ || !saturated()) {
    throw PlanUnavailableError("plan requires saturating flow");
  }
  CapacityPlan plan;
  plan.capacity.assign(edge_arcs_.size(), 0);
  for (size_t e = 0; e < edge_arcs_.size(); ++e) {
    if (edge_arcs_[e] >= 0) plan.capacity[e] = network_.flow(edge_arcs_[e]);
  }
  return plan;
}

std::vector<CampaignId> ExpectedNetwork::SourceSideCampaigns() const {
  const std::vector<bool> reached = network_.ResidualReachable(source());
  std::vector<CampaignId> side;
  for (CampaignId i = 0; i < num_campaigns_; ++i) {
    if (reached[campaign_node(i)]) side.push_back(i);
  }
  return side;
}

}  // namespace gdalloc
