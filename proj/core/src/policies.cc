#include "gdalloc/policies.h"

#include <algorithm>
#include <charconv>
#include <numeric>

namespace gdalloc {

PolicyState::PolicyState(const Instance& instance)
    : residual_(instance.demands().begin(), instance.demands().end()),
      remaining_total_(instance.total_demand()) {}

void PolicyState::Deliver(CampaignId i) {
  if (residual_[i] <= 0) {
    throw std::logic_error("delivery to satisfied campaign " +
                           std::to_string(i));
  }
  --residual_[i];
  --remaining_total_;
}

GreedyRule::GreedyRule(const Instance& instance, const CapacityPlan& plan)
    : instance_(&instance), residual_(plan.capacity) {}

std::optional<CampaignId> GreedyRule::Select(UserTypeId type,
                                             const PolicyState& state) {
  std::optional<EdgeId> best;
  for (EdgeId e : instance_->type_edges(type)) {
    if (!state.eligible(instance_->edge(e).campaign)) continue;
    if (!best || residual_[e] > residual_[*best]) best = e;
  }
  if (!best) return std::nullopt;
  --residual_[*best];
  return instance_->edge(*best).campaign;
}

SmoothRule::SmoothRule(const Instance& instance, const CapacityPlan& plan)
    : instance_(&instance),
      planned_(plan.capacity),
      remaining_(plan.capacity) {}

std::optional<CampaignId> SmoothRule::Select(UserTypeId type,
                                             const PolicyState& state) {
  std::optional<EdgeId> best;
  std::optional<EdgeId> fallback;
  for (EdgeId e : instance_->type_edges(type)) {
    if (!state.eligible(instance_->edge(e).campaign)) continue;
    if (!fallback || remaining_[e] > remaining_[*fallback]) fallback = e;
    if (planned_[e] <= 0 || remaining_[e] <= 0) continue;
    // remaining[e]/planned[e] < remaining[b]/planned[b], cross-multiplied.
    if (!best || remaining_[e] * planned_[*best] <
                     remaining_[*best] * planned_[e]) {
      best = e;
    }
  }
  if (!best) best = fallback;
  if (!best) return std::nullopt;
  --remaining_[*best];
  return instance_->edge(*best).campaign;
}

RepresentativeRule::RepresentativeRule(const Instance& instance,
                                       const CapacityPlan& plan)
    : instance_(&instance), residual_(plan.capacity) {}

std::optional<CampaignId> RepresentativeRule::Select(
    UserTypeId type, const PolicyState& state) {
  std::optional<EdgeId> best;
  for (EdgeId e : instance_->type_edges(type)) {
    if (!state.eligible(instance_->edge(e).campaign)) continue;
    if (!best || residual_[e] > residual_[*best]) best = e;
  }
  if (!best || residual_[*best] <= 0) return std::nullopt;
  --residual_[*best];
  return instance_->edge(*best).campaign;
}

void SingleSlotPolicy::Serve(UserTypeId type, PolicyState& state, Rng& rng,
                             std::vector<CampaignId>& delivered) {
  const DeliveryDecision decision = Decide(type, state, rng);
  if (decision.delivered()) delivered.push_back(*decision.campaign);
}

FlowBasedPolicy::FlowBasedPolicy(std::unique_ptr<DeliveryRule> rule)
    : rule_(std::move(rule)) {}

DeliveryDecision FlowBasedPolicy::Decide(UserTypeId type, PolicyState& state,
                                         Rng& /*rng*/) {
  const std::optional<CampaignId> chosen = rule_->Select(type, state);
  if (!chosen) return DeliveryDecision::PassThrough();
  state.Deliver(*chosen);
  return DeliveryDecision::Deliver(*chosen);
}

MultiDeliveryPolicy::MultiDeliveryPolicy(const Instance& instance,
                                         const CapacityPlan& plan, int slots)
    : instance_(&instance), residual_(plan.capacity), slots_(slots) {
  if (slots < 1) throw std::invalid_argument("slots must be >= 1");
}

std::vector<CampaignId> MultiDeliveryPolicy::Choose(UserTypeId type,
                                                    const PolicyState& state) {
  scratch_.clear();
  for (EdgeId e : instance_->type_edges(type)) {
    if (state.eligible(instance_->edge(e).campaign)) scratch_.push_back(e);
  }
  // type_edges is in campaign order, so stability keeps lower indices first.
  std::stable_sort(scratch_.begin(), scratch_.end(), [this](EdgeId a, EdgeId b) {
    return residual_[a] > residual_[b];
  });
  if (static_cast<int>(scratch_.size()) > slots_) scratch_.resize(slots_);
  std::vector<CampaignId> chosen;
  chosen.reserve(scratch_.size());
  for (EdgeId e : scratch_) {
    --residual_[e];
    chosen.push_back(instance_->edge(e).campaign);
  }
  return chosen;
}

void MultiDeliveryPolicy::Serve(UserTypeId type, PolicyState& state,
                                Rng& /*rng*/,
                                std::vector<CampaignId>& delivered) {
  for (CampaignId i : Choose(type, state)) {
    state.Deliver(i);
    delivered.push_back(i);
  }
}

DeliveryDecision RandomPolicy::Decide(UserTypeId type, PolicyState& state,
                                      Rng& rng) {
  int64_t tickets = 0;
  for (EdgeId e : instance_->type_edges(type)) {
    tickets += state.residual(instance_->edge(e).campaign);
  }
  if (tickets == 0) return DeliveryDecision::PassThrough();
  int64_t draw = std::uniform_int_distribution<int64_t>(0, tickets - 1)(rng);
  for (EdgeId e : instance_->type_edges(type)) {
    const CampaignId i = instance_->edge(e).campaign;
    if (draw < state.residual(i)) {
      state.Deliver(i);
      return DeliveryDecision::Deliver(i);
    }
    draw -= state.residual(i);
  }
  throw std::logic_error("ticket draw out of range");
}

DeliveryDecision DegreeGreedyPolicy::Decide(UserTypeId type,
                                            PolicyState& state, Rng& /*rng*/) {
  std::optional<CampaignId> best;
  for (EdgeId e : instance_->type_edges(type)) {
    const CampaignId i = instance_->edge(e).campaign;
    if (!state.eligible(i)) continue;
    if (!best ||
        instance_->campaign_degree(i) < instance_->campaign_degree(*best)) {
      best = i;
    }
  }
  if (!best) return DeliveryDecision::PassThrough();
  state.Deliver(*best);
  return DeliveryDecision::Deliver(*best);
}

ProbabilityGreedyPolicy::ProbabilityGreedyPolicy(const Instance& instance)
    : instance_(&instance), values_(instance.num_campaigns(), 0.0) {
  for (CampaignId i = 0; i < instance.num_campaigns(); ++i) {
    for (EdgeId e : instance.campaign_edges(i)) {
      const UserTypeId j = instance.edge(e).type;
      values_[i] +=
          instance.prob(j) / static_cast<double>(instance.type_demand(j));
    }
  }
}

DeliveryDecision ProbabilityGreedyPolicy::Decide(UserTypeId type,
                                                 PolicyState& state,
                                                 Rng& /*rng*/) {
  std::optional<CampaignId> best;
  for (EdgeId e : instance_->type_edges(type)) {
    const CampaignId i = instance_->edge(e).campaign;
    if (!state.eligible(i)) continue;
    if (!best || values_[i] < values_[*best]) best = i;
  }
  if (!best) return DeliveryDecision::PassThrough();
  state.Deliver(*best);
  return DeliveryDecision::Deliver(*best);
}

HwmPolicy::HwmPolicy(const Instance& instance, int64_t forecast_total)
    : instance_(&instance), alpha_(instance.num_campaigns(), 0.0) {
  const int m = instance.num_campaigns();
  const int n = instance.num_types();
  std::vector<double> supply(n);
  for (UserTypeId j = 0; j < n; ++j) {
    supply[j] = static_cast<double>(forecast_total) * instance.prob(j);
  }

  std::vector<double> contention(m, 0.0);
  for (CampaignId i = 0; i < m; ++i) {
    for (EdgeId e : instance.campaign_edges(i)) {
      contention[i] += supply[instance.edge(e).type];
    }
    contention[i] /= static_cast<double>(instance.demand(i));
  }
  order_.resize(m);
  std::iota(order_.begin(), order_.end(), 0);
  std::stable_sort(order_.begin(), order_.end(),
                   [&](CampaignId a, CampaignId b) {
                     return contention[a] < contention[b];
                   });

  std::vector<double> remaining = supply;
  struct Breakpoint {
    UserTypeId type;
    double at;
  };
  std::vector<Breakpoint> breakpoints;
  for (CampaignId i : order_) {
    const double demand = static_cast<double>(instance.demand(i));
    breakpoints.clear();
    double available = 0.0;
    double slope = 0.0;
    for (EdgeId e : instance.campaign_edges(i)) {
      const UserTypeId j = instance.edge(e).type;
      available += remaining[j];
      slope += supply[j];
      breakpoints.push_back({j, supply[j] > 0 ? remaining[j] / supply[j] : 0});
    }
    // Least alpha with sum_j min(remaining_j, alpha * s_j) >= W_i.
    double alpha = 1.0;
    if (available > demand) {
      std::stable_sort(breakpoints.begin(), breakpoints.end(),
                       [](const Breakpoint& a, const Breakpoint& b) {
                         return a.at < b.at;
                       });
      double saturated = 0.0;
      for (const Breakpoint& bp : breakpoints) {
        if (slope > 0 && saturated + slope * bp.at >= demand) {
          alpha = (demand - saturated) / slope;
          break;
        }
        saturated += remaining[bp.type];
        slope -= supply[bp.type];
      }
    }
    alpha = std::clamp(alpha, 0.0, 1.0);
    alpha_[i] = alpha;
    for (EdgeId e : instance.campaign_edges(i)) {
      const UserTypeId j = instance.edge(e).type;
      remaining[j] -= std::min(remaining[j], alpha * supply[j]);
    }
  }

  std::vector<int> rank(m);
  for (int r = 0; r < m; ++r) rank[order_[r]] = r;
  type_order_.assign(n, {});
  for (UserTypeId j = 0; j < n; ++j) {
    for (EdgeId e : instance.type_edges(j)) {
      type_order_[j].push_back(instance.edge(e).campaign);
    }
    std::sort(type_order_[j].begin(), type_order_[j].end(),
              [&](CampaignId a, CampaignId b) { return rank[a] < rank[b]; });
  }
}

DeliveryDecision HwmPolicy::Decide(UserTypeId type, PolicyState& state,
                                   Rng& rng) {
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (CampaignId i : type_order_[type]) {
    if (!state.eligible(i)) continue;
    if (alpha_[i] >= 1.0 || coin(rng) < alpha_[i]) {
      state.Deliver(i);
      return DeliveryDecision::Deliver(i);
    }
  }
  return DeliveryDecision::PassThrough();
}

PolicySpec PolicySpec::Parse(std::string_view name) {
  static constexpr std::string_view kMultiPrefix = "fb-multi:";
  if (name == "fb-greedy") return {PolicyKind::kFlowGreedy, 1};
  if (name == "fb-smooth") return {PolicyKind::kFlowSmooth, 1};
  if (name == "fb-representative") return {PolicyKind::kFlowRepresentative, 1};
  if (name == "random") return {PolicyKind::kRandom, 1};
  if (name == "dg") return {PolicyKind::kDegreeGreedy, 1};
  if (name == "pg") return {PolicyKind::kProbabilityGreedy, 1};
  if (name == "hwm") return {PolicyKind::kHwm, 1};
  if (name.starts_with(kMultiPrefix)) {
    const std::string_view digits = name.substr(kMultiPrefix.size());
    int k = 0;
    const auto [ptr, ec] =
        std::from_chars(digits.data(), digits.data() + digits.size(), k);
    if (ec == std::errc() && ptr == digits.data() + digits.size() && k >= 1) {
      return {PolicyKind::kFlowMulti, k};
    }
  }
  std::string valid;
  for (const std::string& n : PolicyNames()) {
    if (!valid.empty()) valid += ", ";
    valid += n;
  }
  throw UnknownPolicyError("unknown policy \"" + std::string(name) +
                           "\"; valid names: " + valid);
}

std::string PolicySpec::name() const {
  switch (kind) {
    case PolicyKind::kFlowGreedy:
      return "fb-greedy";
    case PolicyKind::kFlowSmooth:
      return "fb-smooth";
    case PolicyKind::kFlowRepresentative:
      return "fb-representative";
    case PolicyKind::kFlowMulti:
      return "fb-multi:" + std::to_string(slots);
    case PolicyKind::kRandom:
      return "random";
    case PolicyKind::kDegreeGreedy:
      return "dg";
    case PolicyKind::kProbabilityGreedy:
      return "pg";
    case PolicyKind::kHwm:
      return "hwm";
  }
  return "unknown";
}

bool PolicySpec::uses_plan() const {
  switch (kind) {
    case PolicyKind::kFlowGreedy:
    case PolicyKind::kFlowSmooth:
    case PolicyKind::kFlowRepresentative:
    case PolicyKind::kFlowMulti:
    case PolicyKind::kHwm:
      return true;
    default:
      return false;
  }
}

PlanVariant PolicySpec::plan_variant() const {
  switch (kind) {
    case PolicyKind::kFlowRepresentative:
      return PlanVariant::kRepresentative;
    case PolicyKind::kFlowMulti:
      return PlanVariant::kMultiple;
    default:
      return PlanVariant::kStandard;
  }
}

std::vector<std::string> PolicyNames() {
  return {"fb-greedy", "fb-smooth", "fb-representative", "fb-multi:<k>",
          "random",    "dg",        "pg",                "hwm"};
}

FlowPlan MakePlanFor(const PolicySpec& spec, const Instance& instance) {
  switch (spec.plan_variant()) {
    case PlanVariant::kRepresentative:
      return RepresentativePlan(instance);
    case PlanVariant::kMultiple:
      return MultipleDeliveryPlan(instance, spec.slots);
    case PlanVariant::kStandard:
      break;
  }
  return StandardPlan(instance);
}

std::unique_ptr<DeliveryPolicy> MakePolicy(const PolicySpec& spec,
                                           const Instance& instance,
                                           const FlowPlan& plan) {
  switch (spec.kind) {
    case PolicyKind::kFlowGreedy:
      return std::make_unique<FlowBasedPolicy>(
          std::make_unique<GreedyRule>(instance, plan.capacities));
    case PolicyKind::kFlowSmooth:
      return std::make_unique<FlowBasedPolicy>(
          std::make_unique<SmoothRule>(instance, plan.capacities));
    case PolicyKind::kFlowRepresentative:
      return std::make_unique<FlowBasedPolicy>(
          std::make_unique<RepresentativeRule>(instance, plan.capacities));
    case PolicyKind::kFlowMulti:
      return std::make_unique<MultiDeliveryPolicy>(instance, plan.capacities,
                                                   spec.slots);
    case PolicyKind::kRandom:
      return std::make_unique<RandomPolicy>(instance);
    case PolicyKind::kDegreeGreedy:
      return std::make_unique<DegreeGreedyPolicy>(instance);
    case PolicyKind::kProbabilityGreedy:
      return std::make_unique<ProbabilityGreedyPolicy>(instance);
    case PolicyKind::kHwm:
      return std::make_unique<HwmPolicy>(instance, plan.z_hat);
  }
  throw std::logic_error("unhandled policy kind");
}

}  // namespace gdalloc
