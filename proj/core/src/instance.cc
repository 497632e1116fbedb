#include "gdalloc/instance.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <utility>

namespace gdalloc {

std::string_view ViolationName(ViolationCode code) {
  switch (code) {
    case ViolationCode::kNoCampaigns:
      return "no campaigns";
    case ViolationCode::kNoUserTypes:
      return "no user types";
    case ViolationCode::kNonPositiveDemand:
      return "non-positive demand";
    case ViolationCode::kProbabilityOutOfRange:
      return "probability out of range";
    case ViolationCode::kNotNormalized:
      return "distribution not normalized";
    case ViolationCode::kEdgeOutOfRange:
      return "edge out of range";
    case ViolationCode::kDuplicateEdge:
      return "duplicate edge";
    case ViolationCode::kUnreachableCampaign:
      return "unreachable campaign";
    case ViolationCode::kLabelCountMismatch:
      return "label count mismatch";
  }
  return "unknown";
}

bool ValidationReport::Has(ViolationCode code) const {
  return std::any_of(violations.begin(), violations.end(),
                     [code](const Violation& v) { return v.code == code; });
}

std::string ValidationReport::Summary() const {
  std::ostringstream out;
  for (size_t k = 0; k < violations.size(); ++k) {
    if (k > 0) out << "; ";
    out << ViolationName(violations[k].code) << ": " << violations[k].message;
  }
  return out.str();
}

Instance::Instance(std::vector<int64_t> demands, std::vector<double> probs,
                   std::vector<Edge> edges, Labels labels)
    : demands_(std::move(demands)),
      probs_(std::move(probs)),
      edges_(std::move(edges)),
      labels_(std::move(labels)) {
  std::sort(edges_.begin(), edges_.end());
  total_demand_ = std::accumulate(demands_.begin(), demands_.end(), int64_t{0});

  const int m = num_campaigns();
  const int n = num_types();
  campaign_edges_.assign(m, {});
  type_edges_.assign(n, {});
  type_demand_.assign(n, 0);
  for (EdgeId e = 0; e < num_edges(); ++e) {
    const Edge& edge = edges_[e];
    if (edge.campaign < 0 || edge.campaign >= m || edge.type < 0 ||
        edge.type >= n) {
      continue;
    }
    campaign_edges_[edge.campaign].push_back(e);
    type_edges_[edge.type].push_back(e);
    type_demand_[edge.type] += demands_[edge.campaign];
  }
}

double Instance::min_prob() const {
  return probs_.empty() ? 0.0 : *std::min_element(probs_.begin(), probs_.end());
}

double Instance::max_prob() const {
  return probs_.empty() ? 0.0 : *std::max_element(probs_.begin(), probs_.end());
}

std::optional<EdgeId> Instance::FindEdge(CampaignId i, UserTypeId j) const {
  if (i < 0 || i >= num_campaigns()) return std::nullopt;
  const auto& list = campaign_edges_[i];
  auto it = std::lower_bound(
      list.begin(), list.end(), j,
      [this](EdgeId e, UserTypeId type) { return edges_[e].type < type; });
  if (it == list.end() || edges_[*it].type != j) return std::nullopt;
  return *it;
}

Instance Instance::WithProbs(std::vector<double> probs) const {
  return Instance(demands_, std::move(probs), edges_, labels_);
}

Instance Instance::WithDemands(std::vector<int64_t> demands) const {
  return Instance(std::move(demands), probs_, edges_, labels_);
}

ValidationReport Validate(const Instance& instance) {
  ValidationReport report;
  auto add = [&report](ViolationCode code, std::string message) {
    report.violations.push_back({code, std::move(message)});
  };

  const int m = instance.num_campaigns();
  const int n = instance.num_types();
  if (m == 0) add(ViolationCode::kNoCampaigns, "m must be at least 1");
  if (n == 0) add(ViolationCode::kNoUserTypes, "n must be at least 1");

  for (CampaignId i = 0; i < m; ++i) {
    if (instance.demand(i) < 1) {
      add(ViolationCode::kNonPositiveDemand,
          "demands[" + std::to_string(i) + "] = " +
              std::to_string(instance.demand(i)));
    }
  }

  double sum = 0.0;
  for (UserTypeId j = 0; j < n; ++j) {
    const double p = instance.prob(j);
    if (!(p > 0.0 && p <= 1.0)) {
      add(ViolationCode::kProbabilityOutOfRange,
          "probs[" + std::to_string(j) + "] = " + std::to_string(p));
    }
    sum += p;
  }
  if (n > 0 && !(std::abs(sum - 1.0) <= kProbabilitySumTolerance)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "probabilities sum to " << sum;
    add(ViolationCode::kNotNormalized, msg.str());
  }

  const auto edges = instance.edges();
  for (size_t k = 0; k < edges.size(); ++k) {
    const Edge& e = edges[k];
    if (e.campaign < 0 || e.campaign >= m || e.type < 0 || e.type >= n) {
      add(ViolationCode::kEdgeOutOfRange,
          "edge [" + std::to_string(e.campaign) + ", " +
              std::to_string(e.type) + "]");
    } else if (k > 0 && edges[k - 1] == e) {
      add(ViolationCode::kDuplicateEdge,
          "edge [" + std::to_string(e.campaign) + ", " +
              std::to_string(e.type) + "]");
    }
  }

  for (CampaignId i = 0; i < m; ++i) {
    if (instance.campaign_edges(i).empty()) {
      add(ViolationCode::kUnreachableCampaign,
          "campaign " + std::to_string(i) + " targets no user type");
    }
  }

  const Labels& labels = instance.labels();
  if ((!labels.campaigns.empty() &&
       static_cast<int>(labels.campaigns.size()) != m) ||
      (!labels.types.empty() && static_cast<int>(labels.types.size()) != n)) {
    add(ViolationCode::kLabelCountMismatch,
        "label lists must be empty or match m and n");
  }
  return report;
}

int64_t CapacityPlan::CampaignTotal(const Instance& instance,
                                    CampaignId i) const {
  int64_t total = 0;
  for (EdgeId e : instance.campaign_edges(i)) total += capacity[e];
  return total;
}

InvalidInstanceError::InvalidInstanceError(ValidationReport report)
    : std::runtime_error("invalid instance: " + report.Summary()),
      report_(std::move(report)) {}

}  // namespace gdalloc
