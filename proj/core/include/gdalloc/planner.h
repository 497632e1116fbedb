// Offline planning: the minimal integer budget z_hat, the per-edge capacity
// plan read off a saturating max flow, and the real-valued lower bound
// z_flow on the optimal offline consumption.

#ifndef GDALLOC_PLANNER_H_
#define GDALLOC_PLANNER_H_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gdalloc/instance.h"

namespace gdalloc {

enum class PlanVariant { kStandard, kRepresentative, kMultiple };

std::string_view PlanVariantName(PlanVariant variant);

struct FlowPlan {
  int64_t z_hat = 0;
  CapacityPlan capacities;
  double z_flow = 0.0;
  PlanVariant variant = PlanVariant::kStandard;
  // Ads shown per user visit; 1 except for kMultiple.
  int slots = 1;

  // ceil(z_hat * slots * p_j): users of type j the plan budgets for.
  std::vector<int64_t> TypeThresholds(const Instance& instance) const;
};

// Inner (campaign -> type) capacity used by the multiple-delivery network.
enum class MultiInnerRule {
  kProbeBudget,  // capacity = the budget being probed
  kTotalDemand,  // capacity = M, as in the single-delivery network
};

// ceil(budget * slots * p_j) for every type.
std::vector<int64_t> BudgetSupply(const Instance& instance, int64_t budget,
                                  int slots = 1);

// Max flow of the integer expected network at `budget`.
int64_t BudgetMaxFlow(const Instance& instance, int64_t budget, int slots = 1,
                      MultiInnerRule inner = MultiInnerRule::kTotalDemand);

struct BudgetSearchResult {
  int64_t z_hat = 0;
  CapacityPlan capacities;
  int probes = 0;
};

// Doubling then binary search for the least budget whose network routes all
// of M; the plan is the flow at that budget.
BudgetSearchResult FindMinimalBudget(const Instance& instance);
BudgetSearchResult FindMinimalBudget(const Instance& instance, int slots,
                                     MultiInnerRule inner);

double DefaultFlowBoundTolerance(const Instance& instance);

// z_flow: least real T whose real-capacity expected network routes M.
// Result is a subset ratio W(S)/p(Gamma(S)), so never above the exact value,
// and within `tolerance` of it.
double ComputeFlowLowerBound(const Instance& instance, double tolerance);
inline double ComputeFlowLowerBound(const Instance& instance) {
  return ComputeFlowLowerBound(instance, DefaultFlowBoundTolerance(instance));
}

// max over nonempty campaign subsets S of W(S) / p(Gamma(S)).
struct SubsetBound {
  std::vector<CampaignId> subset;
  int64_t demand = 0;
  double probability = 0.0;

  double value() const { return static_cast<double>(demand) / probability; }
};

inline constexpr int kMaxExactSubsetCampaigns = 20;

class SizeLimitError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Enumerates all 2^m - 1 subsets; throws SizeLimitError for m > 20.
SubsetBound ExactFlowLowerBound(const Instance& instance);

FlowPlan StandardPlan(const Instance& instance);
// Capacities proportional to p_j within each campaign, rounded by largest
// remainder (ties to the lower type index).
FlowPlan RepresentativePlan(const Instance& instance);
FlowPlan MultipleDeliveryPlan(const Instance& instance, int slots,
                              MultiInnerRule inner = MultiInnerRule::kProbeBudget);

// {"z_hat", "z_flow", "variant", "k", "capacities": [[i, j, c], ...]}
std::string SavePlan(const Instance& instance, const FlowPlan& plan);
FlowPlan LoadPlan(const Instance& instance, std::string_view json_text);

}  // namespace gdalloc

#endif  // GDALLOC_PLANNER_H_
