#include "gdalloc/planner.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gdalloc/expected_network.h"
#include "json.hpp"

namespace gdalloc {
namespace {

// Fixed-point scale for the real-capacity feasibility check.
constexpr int64_t kRealScale = int64_t{1} << 20;

InnerCapacity InnerFor(int64_t budget, MultiInnerRule inner) {
  return inner == MultiInnerRule::kProbeBudget ? InnerCapacity::Uniform(budget)
                                               : InnerCapacity::TotalDemand();
}

ExpectedNetwork SolvedBudgetNetwork(const Instance& instance, int64_t budget,
                                    int slots, MultiInnerRule inner) {
  const std::vector<int64_t> supply = BudgetSupply(instance, budget, slots);
  ExpectedNetwork network(instance, supply,
                          InnerFor(budget, inner));
  network.Solve();
  return network;
}

// Real-capacity expected network at T, scaled to integers. `optimistic`
// rounds supplies up (a failure then proves infeasibility); otherwise they
// are rounded down (a success proves feasibility).
ExpectedNetwork ScaledRealNetwork(const Instance& instance, double t,
                                  bool optimistic) {
  std::vector<int64_t> supply(instance.num_types());
  for (UserTypeId j = 0; j < instance.num_types(); ++j) {
    const double scaled = t * instance.prob(j) * static_cast<double>(kRealScale);
    supply[j] = static_cast<int64_t>(optimistic ? std::ceil(scaled)
                                                : std::floor(scaled));
  }
  const int64_t inner = (instance.total_demand() + 1) * kRealScale;
  ExpectedNetwork network(instance, supply, InnerCapacity::Uniform(inner),
                          kRealScale);
  network.Solve();
  return network;
}

SubsetBound BoundForSubset(const Instance& instance,
                           std::vector<CampaignId> subset) {
  SubsetBound bound;
  std::vector<char> covered(instance.num_types(), 0);
  for (CampaignId i : subset) {
    bound.demand += instance.demand(i);
    for (EdgeId e : instance.campaign_edges(i)) {
      covered[instance.edge(e).type] = 1;
    }
  }
  for (UserTypeId j = 0; j < instance.num_types(); ++j) {
    if (covered[j]) bound.probability += instance.prob(j);
  }
  bound.subset = std::move(subset);
  return bound;
}

}  // namespace

std::string_view PlanVariantName(PlanVariant variant) {
  switch (variant) {
    case PlanVariant::kStandard:
      return "standard";
    case PlanVariant::kRepresentative:
      return "representative";
    case PlanVariant::kMultiple:
      return "multiple";
  }
  return "unknown";
}

std::vector<int64_t> FlowPlan::TypeThresholds(const Instance& instance) const {
  return BudgetSupply(instance, z_hat, slots);
}

std::vector<int64_t> BudgetSupply(const Instance& instance, int64_t budget,
                                  int slots) {
  std::vector<int64_t> supply(instance.num_types());
  for (UserTypeId j = 0; j < instance.num_types(); ++j) {
    supply[j] = static_cast<int64_t>(std::ceil(
        static_cast<double>(budget) * slots * instance.prob(j)));
  }
  return supply;
}

int64_t BudgetMaxFlow(const Instance& instance, int64_t budget, int slots,
                      MultiInnerRule inner) {
  return SolvedBudgetNetwork(instance, budget, slots, inner).value();
}

BudgetSearchResult FindMinimalBudget(const Instance& instance) {
  return FindMinimalBudget(instance, 1, MultiInnerRule::kTotalDemand);
}

BudgetSearchResult FindMinimalBudget(const Instance& instance, int slots,
                                     MultiInnerRule inner) {
  if (slots < 1) throw std::invalid_argument("slots must be >= 1");
  BudgetSearchResult result;
  const int64_t total = instance.total_demand();
  auto feasible = [&](int64_t budget) {
    ++result.probes;
    return BudgetMaxFlow(instance, budget, slots, inner) >= total;
  };

  // Doubling phase. `known_infeasible` is the largest probe that failed.
  int64_t budget = std::max<int64_t>(1, total / 2);
  int64_t known_infeasible = 0;
  while (true) {
    budget *= 2;
    if (feasible(budget)) break;
    known_infeasible = budget;
  }

  int64_t begin = known_infeasible + 1;
  int64_t end = budget;
  while (begin < end) {
    const int64_t mid = begin + (end - begin) / 2;
    if (!feasible(mid)) {
      begin = mid + 1;
    } else {
      end = mid;
    }
  }
  result.z_hat = begin;
  result.capacities =
      SolvedBudgetNetwork(instance, result.z_hat, slots, inner).ExtractPlan();
  return result;
}

double DefaultFlowBoundTolerance(const Instance& instance) {
  return 1e-6 * static_cast<double>(instance.total_demand());
}

double ComputeFlowLowerBound(const Instance& instance, double tolerance) {
  if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be > 0");
  auto feasible = [&](double t) {
    return ScaledRealNetwork(instance, t, /*optimistic=*/false).saturated();
  };

  double lo = 0.0;
  double hi = std::max(1.0, static_cast<double>(instance.total_demand()));
  while (!feasible(hi)) {
    lo = hi;
    hi *= 2.0;
  }
  while (hi - lo > tolerance) {
    const double mid = 0.5 * (lo + hi);
    if (feasible(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }

  // Start from real subset ratios so the result never overshoots: the whole
  // campaign set, and the cut side of the rounded-down network at lo.
  std::vector<CampaignId> all(instance.num_campaigns());
  std::iota(all.begin(), all.end(), 0);
  double t = BoundForSubset(instance, std::move(all)).value();
  if (lo > 0.0) {
    const SubsetBound cut = BoundForSubset(
        instance, ScaledRealNetwork(instance, lo, /*optimistic=*/false)
                      .SourceSideCampaigns());
    if (!cut.subset.empty()) t = std::max(t, cut.value());
  }
  // Each infeasible cut S gives W(S)/p(Gamma(S)) > T; repeat until the
  // optimistic check passes. The ratio sequence strictly increases.
  for (int iteration = 0; iteration < 64; ++iteration) {
    ExpectedNetwork network =
        ScaledRealNetwork(instance, t, /*optimistic=*/true);
    if (network.saturated()) break;
    const SubsetBound bound =
        BoundForSubset(instance, network.SourceSideCampaigns());
    if (bound.subset.empty() || !(bound.value() > t)) break;
    t = bound.value();
  }
  return std::min(t, hi);
}

SubsetBound ExactFlowLowerBound(const Instance& instance) {
  const int m = instance.num_campaigns();
  if (m > kMaxExactSubsetCampaigns) {
    throw SizeLimitError("subset enumeration limited to m <= " +
                         std::to_string(kMaxExactSubsetCampaigns) + ", got " +
                         std::to_string(m));
  }
  if (m == 0) throw std::invalid_argument("instance has no campaigns");
  SubsetBound best;
  bool have_best = false;
  std::vector<CampaignId> subset;
  for (uint32_t mask = 1; mask < (uint32_t{1} << m); ++mask) {
    subset.clear();
    for (CampaignId i = 0; i < m; ++i) {
      if (mask & (uint32_t{1} << i)) subset.push_back(i);
    }
    SubsetBound candidate = BoundForSubset(instance, subset);
    // Compare W1/P1 > W2/P2 by cross-multiplication.
    if (!have_best ||
        static_cast<double>(candidate.demand) * best.probability >
            static_cast<double>(best.demand) * candidate.probability) {
      best = std::move(candidate);
      have_best = true;
    }
  }
  return best;
}

FlowPlan StandardPlan(const Instance& instance) {
  BudgetSearchResult search = FindMinimalBudget(instance);
  FlowPlan plan;
  plan.z_hat = search.z_hat;
  plan.capacities = std::move(search.capacities);
  plan.z_flow = ComputeFlowLowerBound(instance);
  plan.variant = PlanVariant::kStandard;
  return plan;
}

FlowPlan RepresentativePlan(const Instance& instance) {
  FlowPlan plan;
  plan.z_hat = FindMinimalBudget(instance).z_hat;
  plan.z_flow = ComputeFlowLowerBound(instance);
  plan.variant = PlanVariant::kRepresentative;
  plan.capacities.capacity.assign(instance.num_edges(), 0);

  struct Share {
    EdgeId edge;
    double fraction;
  };
  std::vector<Share> shares;
  for (CampaignId i = 0; i < instance.num_campaigns(); ++i) {
    const auto edges = instance.campaign_edges(i);
    double targeted = 0.0;
    for (EdgeId e : edges) targeted += instance.prob(instance.edge(e).type);

    const double demand = static_cast<double>(instance.demand(i));
    int64_t assigned = 0;
    shares.clear();
    for (EdgeId e : edges) {
      const double target = demand * instance.prob(instance.edge(e).type) /
                            targeted;
      const double whole = std::floor(target);
      plan.capacities.capacity[e] = static_cast<int64_t>(whole);
      assigned += plan.capacities.capacity[e];
      shares.push_back({e, target - whole});
    }
    // Edges are in type order, so a stable sort breaks ties by lower type.
    std::stable_sort(shares.begin(), shares.end(),
                     [](const Share& a, const Share& b) {
                       return a.fraction > b.fraction;
                     });
    int64_t remainder = instance.demand(i) - assigned;
    for (size_t k = 0; remainder > 0 && !shares.empty();
         k = (k + 1) % shares.size(), --remainder) {
      ++plan.capacities.capacity[shares[k].edge];
    }
  }
  return plan;
}

FlowPlan MultipleDeliveryPlan(const Instance& instance, int slots,
                              MultiInnerRule inner) {
  BudgetSearchResult search = FindMinimalBudget(instance, slots, inner);
  FlowPlan plan;
  plan.z_hat = search.z_hat;
  plan.capacities = std::move(search.capacities);
  plan.z_flow = ComputeFlowLowerBound(instance);
  plan.variant = PlanVariant::kMultiple;
  plan.slots = slots;
  return plan;
}

std::string SavePlan(const Instance& instance, const FlowPlan& plan) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::object();
  doc["z_hat"] = plan.z_hat;
  doc["z_flow"] = plan.z_flow;
  doc["variant"] = PlanVariantName(plan.variant);
  doc["k"] = plan.slots;
  nlohmann::ordered_json caps = nlohmann::ordered_json::array();
  for (EdgeId e = 0; e < instance.num_edges(); ++e) {
    const Edge& edge = instance.edge(e);
    caps.push_back({edge.campaign, edge.type, plan.capacities.at(e)});
  }
  doc["capacities"] = std::move(caps);
  return doc.dump() + "\n";
}

FlowPlan LoadPlan(const Instance& instance, std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text.begin(), json_text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("plan: ") + e.what());
  }
  FlowPlan plan;
  try {
    plan.z_hat = doc.at("z_hat").get<int64_t>();
    plan.z_flow = doc.at("z_flow").get<double>();
    const std::string variant = doc.at("variant").get<std::string>();
    if (variant == "standard") {
      plan.variant = PlanVariant::kStandard;
    } else if (variant == "representative") {
      plan.variant = PlanVariant::kRepresentative;
    } else if (variant == "multiple") {
      plan.variant = PlanVariant::kMultiple;
    } else {
      throw ParseError("plan: unknown variant \"" + variant + "\"");
    }
    plan.slots = doc.value("k", 1);
    plan.capacities.capacity.assign(instance.num_edges(), 0);
    for (const auto& entry : doc.at("capacities")) {
      const auto i = entry.at(0).get<CampaignId>();
      const auto j = entry.at(1).get<UserTypeId>();
      const auto edge = instance.FindEdge(i, j);
      if (!edge) {
        throw ParseError("plan: capacity on non-edge [" + std::to_string(i) +
                         ", " + std::to_string(j) + "]");
      }
      plan.capacities.capacity[*edge] = entry.at(2).get<int64_t>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("plan: ") + e.what());
  }
  return plan;
}

}  // namespace gdalloc
