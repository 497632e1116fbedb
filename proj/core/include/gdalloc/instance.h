// Demand-supply instance: campaigns with exposure demands, atomic user types
// with an arrival distribution, and the targeting relation between them.

#ifndef GDALLOC_INSTANCE_H_
#define GDALLOC_INSTANCE_H_

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gdalloc {

// Campaigns and user types are dense zero-based indices.
using CampaignId = int32_t;
using UserTypeId = int32_t;
using EdgeId = int32_t;

inline constexpr double kProbabilitySumTolerance = 1e-9;

struct Edge {
  CampaignId campaign = 0;
  UserTypeId type = 0;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Optional human-readable names; never consulted by algorithms.
struct Labels {
  std::vector<std::string> campaigns;
  std::vector<std::string> types;

  bool empty() const { return campaigns.empty() && types.empty(); }
  friend bool operator==(const Labels&, const Labels&) = default;
};

enum class ViolationCode {
  kNoCampaigns,
  kNoUserTypes,
  kNonPositiveDemand,
  kProbabilityOutOfRange,
  kNotNormalized,
  kEdgeOutOfRange,
  kDuplicateEdge,
  kUnreachableCampaign,
  kLabelCountMismatch,
};

std::string_view ViolationName(ViolationCode code);

struct Violation {
  ViolationCode code;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool Has(ViolationCode code) const;
  std::string Summary() const;
};

// Immutable after construction. Edges are kept sorted by (campaign, type); the
// position of an edge in that order is its EdgeId, which every per-edge array
// in the library (capacity plans, delivery counts) is indexed by.
//
// Construction never rejects input: out-of-range and duplicate edges are kept
// so that Validate() can report them. Adjacency lists skip out-of-range edges.
class Instance {
 public:
  Instance() = default;
  Instance(std::vector<int64_t> demands, std::vector<double> probs,
           std::vector<Edge> edges, Labels labels = {});

  int num_campaigns() const { return static_cast<int>(demands_.size()); }
  int num_types() const { return static_cast<int>(probs_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }

  int64_t demand(CampaignId i) const { return demands_[i]; }
  std::span<const int64_t> demands() const { return demands_; }
  // M = sum of all demands.
  int64_t total_demand() const { return total_demand_; }

  double prob(UserTypeId j) const { return probs_[j]; }
  std::span<const double> probs() const { return probs_; }
  double min_prob() const;
  double max_prob() const;

  std::span<const Edge> edges() const { return edges_; }
  const Edge& edge(EdgeId e) const { return edges_[e]; }
  const Labels& labels() const { return labels_; }

  // Edges incident to campaign i, ordered by type.
  std::span<const EdgeId> campaign_edges(CampaignId i) const {
    return campaign_edges_[i];
  }
  // Edges incident to type j, ordered by campaign.
  std::span<const EdgeId> type_edges(UserTypeId j) const {
    return type_edges_[j];
  }
  int campaign_degree(CampaignId i) const {
    return static_cast<int>(campaign_edges_[i].size());
  }

  std::optional<EdgeId> FindEdge(CampaignId i, UserTypeId j) const;

  // W(u_j): total demand of campaigns targeting type j.
  int64_t type_demand(UserTypeId j) const { return type_demand_[j]; }

  // Same graph and demands, different arrival distribution.
  Instance WithProbs(std::vector<double> probs) const;
  Instance WithDemands(std::vector<int64_t> demands) const;

  friend bool operator==(const Instance& a, const Instance& b) {
    return a.demands_ == b.demands_ && a.probs_ == b.probs_ &&
           a.edges_ == b.edges_ && a.labels_ == b.labels_;
  }

 private:
  std::vector<int64_t> demands_;
  std::vector<double> probs_;
  std::vector<Edge> edges_;
  Labels labels_;

  int64_t total_demand_ = 0;
  std::vector<std::vector<EdgeId>> campaign_edges_;
  std::vector<std::vector<EdgeId>> type_edges_;
  std::vector<int64_t> type_demand_;
};

// Lists every violated invariant; an empty report means the instance is
// usable by the planner and simulator.
ValidationReport Validate(const Instance& instance);

// Per-edge non-negative integer capacities C_{i,j}, indexed by EdgeId.
struct CapacityPlan {
  std::vector<int64_t> capacity;

  int64_t at(EdgeId e) const { return capacity[e]; }
  int64_t CampaignTotal(const Instance& instance, CampaignId i) const;
  friend bool operator==(const CapacityPlan&, const CapacityPlan&) = default;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInstanceError : public std::runtime_error {
 public:
  explicit InvalidInstanceError(ValidationReport report);
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

// JSON form:
//   {"m": int, "n": int, "demands": [int], "probs": [float],
//    "edges": [[campaign, type], ...], "labels": {"campaigns": [...],
//    "types": [...]}}
// LoadInstance throws ParseError for malformed input and
// InvalidInstanceError when the parsed instance fails Validate().
Instance LoadInstance(std::string_view json_text);
std::string SaveInstance(const Instance& instance);

Instance ReadInstanceFile(const std::string& path);
void WriteInstanceFile(const std::string& path, const Instance& instance);

}  // namespace gdalloc

#endif  // GDALLOC_INSTANCE_H_
