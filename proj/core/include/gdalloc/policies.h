// Online delivery policies. A policy sees one user type at a time and either
// delivers contracted ads or passes the user through to other uses.

#ifndef GDALLOC_POLICIES_H_
#define GDALLOC_POLICIES_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gdalloc/instance.h"
#include "gdalloc/planner.h"

namespace gdalloc {

using Rng = std::mt19937_64;

// Residual demands W_i and their total M, counted down as ads are delivered.
class PolicyState {
 public:
  explicit PolicyState(const Instance& instance);

  int64_t residual(CampaignId i) const { return residual_[i]; }
  std::span<const int64_t> residual_demands() const { return residual_; }
  int64_t remaining_total() const { return remaining_total_; }
  bool done() const { return remaining_total_ == 0; }
  bool eligible(CampaignId i) const { return residual_[i] > 0; }

  void Deliver(CampaignId i);

 private:
  std::vector<int64_t> residual_;
  int64_t remaining_total_ = 0;
};

struct DeliveryDecision {
  std::optional<CampaignId> campaign;

  static DeliveryDecision PassThrough() { return {}; }
  static DeliveryDecision Deliver(CampaignId i) { return {i}; }
  bool delivered() const { return campaign.has_value(); }
  friend bool operator==(const DeliveryDecision&,
                         const DeliveryDecision&) = default;
};

// Chooses a campaign for a user of a given type from per-edge capacities.
// Select() updates the rule's own bookkeeping but not the PolicyState.
class DeliveryRule {
 public:
  virtual ~DeliveryRule() = default;
  virtual std::optional<CampaignId> Select(UserTypeId type,
                                           const PolicyState& state) = 0;
};

// argmax residual C_{i,j} over campaigns of the type with demand left. The
// residual may go negative: eligibility depends only on demand.
class GreedyRule final : public DeliveryRule {
 public:
  GreedyRule(const Instance& instance, const CapacityPlan& plan);
  std::optional<CampaignId> Select(UserTypeId type,
                                   const PolicyState& state) override;
  int64_t residual(EdgeId e) const { return residual_[e]; }

 private:
  const Instance* instance_;
  std::vector<int64_t> residual_;
};

// argmin remaining/planned over eligible edges that still have planned units
// left. When none has, falls back to greedy on the remaining counts.
class SmoothRule final : public DeliveryRule {
 public:
  SmoothRule(const Instance& instance, const CapacityPlan& plan);
  std::optional<CampaignId> Select(UserTypeId type,
                                   const PolicyState& state) override;
  int64_t planned(EdgeId e) const { return planned_[e]; }
  int64_t remaining(EdgeId e) const { return remaining_[e]; }

 private:
  const Instance* instance_;
  std::vector<int64_t> planned_;
  std::vector<int64_t> remaining_;
};

// Greedy, except that a user is passed through once the best residual
// capacity is zero; no edge is ever served beyond its plan.
class RepresentativeRule final : public DeliveryRule {
 public:
  RepresentativeRule(const Instance& instance, const CapacityPlan& plan);
  std::optional<CampaignId> Select(UserTypeId type,
                                   const PolicyState& state) override;
  int64_t residual(EdgeId e) const { return residual_[e]; }

 private:
  const Instance* instance_;
  std::vector<int64_t> residual_;
};

class DeliveryPolicy {
 public:
  virtual ~DeliveryPolicy() = default;
  // Ads shown per visit.
  virtual int slots() const { return 1; }
  // Serves one user: applies every delivery to `state` and appends the
  // campaigns to `delivered`. Leaves `delivered` untouched on pass-through.
  virtual void Serve(UserTypeId type, PolicyState& state, Rng& rng,
                     std::vector<CampaignId>& delivered) = 0;
};

class SingleSlotPolicy : public DeliveryPolicy {
 public:
  virtual DeliveryDecision Decide(UserTypeId type, PolicyState& state,
                                  Rng& rng) = 0;
  void Serve(UserTypeId type, PolicyState& state, Rng& rng,
             std::vector<CampaignId>& delivered) final;
};

class FlowBasedPolicy final : public SingleSlotPolicy {
 public:
  explicit FlowBasedPolicy(std::unique_ptr<DeliveryRule> rule);
  DeliveryDecision Decide(UserTypeId type, PolicyState& state,
                          Rng& rng) override;
  const DeliveryRule& rule() const { return *rule_; }

 private:
  std::unique_ptr<DeliveryRule> rule_;
};

// Up to `slots` distinct campaigns per visit, highest residual capacity
// first (ties to the lower campaign index).
class MultiDeliveryPolicy final : public DeliveryPolicy {
 public:
  MultiDeliveryPolicy(const Instance& instance, const CapacityPlan& plan,
                      int slots);
  int slots() const override { return slots_; }
  void Serve(UserTypeId type, PolicyState& state, Rng& rng,
             std::vector<CampaignId>& delivered) override;
  // Selection without side effects on the state.
  std::vector<CampaignId> Choose(UserTypeId type, const PolicyState& state);

 private:
  const Instance* instance_;
  std::vector<int64_t> residual_;
  int slots_;
  std::vector<EdgeId> scratch_;
};

// Uniform over the unexpanded unit ads still waiting: campaign i is chosen
// with probability proportional to its residual demand.
class RandomPolicy final : public SingleSlotPolicy {
 public:
  explicit RandomPolicy(const Instance& instance) : instance_(&instance) {}
  DeliveryDecision Decide(UserTypeId type, PolicyState& state,
                          Rng& rng) override;

 private:
  const Instance* instance_;
};

// Eligible campaign with the fewest targeted types.
class DegreeGreedyPolicy final : public SingleSlotPolicy {
 public:
  explicit DegreeGreedyPolicy(const Instance& instance)
      : instance_(&instance) {}
  DeliveryDecision Decide(UserTypeId type, PolicyState& state,
                          Rng& rng) override;

 private:
  const Instance* instance_;
};

// Eligible campaign with the least delivery value
// r_i = sum over targeted types of p_j / W(u_j), computed once up front.
class ProbabilityGreedyPolicy final : public SingleSlotPolicy {
 public:
  explicit ProbabilityGreedyPolicy(const Instance& instance);
  DeliveryDecision Decide(UserTypeId type, PolicyState& state,
                          Rng& rng) override;
  double delivery_value(CampaignId i) const { return values_[i]; }

 private:
  const Instance* instance_;
  std::vector<double> values_;
};

// High-water-mark style baseline. Campaigns are ordered by contention
// (forecast supply over demand, ascending) and receive serving fractions by
// water-filling the forecast supply z_hat * p_j. A user is offered to its
// eligible campaigns in that order, each accepting with its fraction.
class HwmPolicy final : public SingleSlotPolicy {
 public:
  HwmPolicy(const Instance& instance, int64_t forecast_total);
  DeliveryDecision Decide(UserTypeId type, PolicyState& state,
                          Rng& rng) override;
  double serving_fraction(CampaignId i) const { return alpha_[i]; }
  std::span<const CampaignId> allocation_order() const { return order_; }

 private:
  const Instance* instance_;
  std::vector<double> alpha_;
  std::vector<CampaignId> order_;
  std::vector<std::vector<CampaignId>> type_order_;
};

enum class PolicyKind {
  kFlowGreedy,
  kFlowSmooth,
  kFlowRepresentative,
  kFlowMulti,
  kRandom,
  kDegreeGreedy,
  kProbabilityGreedy,
  kHwm,
};

class UnknownPolicyError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct PolicySpec {
  PolicyKind kind = PolicyKind::kFlowGreedy;
  int slots = 1;

  // "fb-greedy", "fb-smooth", "fb-representative", "fb-multi:<k>", "random",
  // "dg", "pg", "hwm".
  static PolicySpec Parse(std::string_view name);
  std::string name() const;
  bool uses_plan() const;
  PlanVariant plan_variant() const;
  friend bool operator==(const PolicySpec&, const PolicySpec&) = default;
};

std::vector<std::string> PolicyNames();

// The plan a policy needs (the standard plan for baselines; HWM uses its
// z_hat as the supply forecast).
FlowPlan MakePlanFor(const PolicySpec& spec, const Instance& instance);

// `instance` and `plan` must outlive the policy.
std::unique_ptr<DeliveryPolicy> MakePolicy(const PolicySpec& spec,
                                           const Instance& instance,
                                           const FlowPlan& plan);

}  // namespace gdalloc

#endif  // GDALLOC_POLICIES_H_
