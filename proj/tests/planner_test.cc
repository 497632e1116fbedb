#include "gdalloc/planner.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "gdalloc/expected_network.h"
#include "test_util.h"

namespace gdalloc {
namespace {

using testing::MakeInstance;

std::vector<int64_t> CeilSupply(const Instance& instance, int64_t budget,
                                int slots = 1) {
  std::vector<int64_t> supply(instance.num_types());
  for (int j = 0; j < instance.num_types(); ++j) {
    supply[j] = static_cast<int64_t>(
        std::ceil(static_cast<double>(budget) * slots * instance.prob(j)));
  }
  return supply;
}

// Linear scan with Hall's condition; no flow code involved.
int64_t ScanZHat(const Instance& instance, int slots = 1) {
  for (int64_t z = 1;; ++z) {
    if (testing::HallFeasible(instance, CeilSupply(instance, z, slots))) {
      return z;
    }
  }
}

// max over subsets of W(S)/p(Gamma(S)), computed in doubles.
double SubsetRatio(const Instance& instance) {
  const int m = instance.num_campaigns();
  double best = 0.0;
  for (uint32_t mask = 1; mask < (1u << m); ++mask) {
    double demand = 0.0;
    std::vector<char> covered(instance.num_types(), 0);
    for (int i = 0; i < m; ++i) {
      if (!(mask & (1u << i))) continue;
      demand += static_cast<double>(instance.demand(i));
      for (EdgeId e : instance.campaign_edges(i)) {
        covered[instance.edge(e).type] = 1;
      }
    }
    double p = 0.0;
    for (int j = 0; j < instance.num_types(); ++j) {
      if (covered[j]) p += instance.prob(j);
    }
    best = std::max(best, demand / p);
  }
  return best;
}

Instance SharedTypeExample() {
  return MakeInstance({10, 10}, {0.5, 0.5}, {{0, 0}, {1, 0}, {1, 1}});
}

TEST(FindMinimalBudgetTest, SingleCampaign) {
  const Instance instance = MakeInstance({10}, {1.0}, {{0, 0}});
  const BudgetSearchResult result = FindMinimalBudget(instance);
  EXPECT_EQ(result.z_hat, 10);
  EXPECT_EQ(result.capacities.capacity, std::vector<int64_t>{10});
}

TEST(FindMinimalBudgetTest, SharedTypeMatchesScan) {
  const Instance instance = SharedTypeExample();
  EXPECT_EQ(FindMinimalBudget(instance).z_hat, ScanZHat(instance));
  // z_hat <= ceil(z_flow) with z_flow = 20.
  EXPECT_LE(FindMinimalBudget(instance).z_hat, 20);
}

TEST(FindMinimalBudgetTest, TwoTypesOneCampaignMatchesScan) {
  const Instance instance = MakeInstance({7}, {0.3, 0.7}, {{0, 0}, {0, 1}});
  EXPECT_EQ(FindMinimalBudget(instance).z_hat, ScanZHat(instance));
}

TEST(FindMinimalBudgetTest, MinimalOnUnitDemand) {
  const Instance instance = MakeInstance({1}, {1.0}, {{0, 0}});
  EXPECT_EQ(FindMinimalBudget(instance).z_hat, 1);
}

TEST(FindMinimalBudgetTest, MatchesHallScanOnRandomInstances) {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 300; ++trial) {
    const Instance instance = testing::RandomSmallInstance(rng, 6, 6, 15);
    const BudgetSearchResult result = FindMinimalBudget(instance);
    ASSERT_EQ(result.z_hat, ScanZHat(instance)) << trial;
    const int64_t m = instance.total_demand();
    EXPECT_GE(BudgetMaxFlow(instance, result.z_hat), m);
    if (result.z_hat > 1) {
      EXPECT_LT(BudgetMaxFlow(instance, result.z_hat - 1), m);
    }
    for (int i = 0; i < instance.num_campaigns(); ++i) {
      EXPECT_EQ(result.capacities.CampaignTotal(instance, i),
                instance.demand(i));
    }
  }
}

TEST(FindMinimalBudgetTest, FeasibilityIsMonotoneInBudget) {
  std::mt19937_64 rng(103);
  for (int trial = 0; trial < 50; ++trial) {
    const Instance instance = testing::RandomSmallInstance(rng, 5, 5, 10);
    const int64_t m = instance.total_demand();
    bool seen = false;
    for (int64_t z = 1; z <= 6 * m; ++z) {
      const bool feasible = BudgetMaxFlow(instance, z) >= m;
      if (seen) EXPECT_TRUE(feasible) << trial << " z=" << z;
      seen = seen || feasible;
    }
    EXPECT_TRUE(seen);
  }
}

TEST(FlowLowerBoundTest, Examples) {
  const Instance single = MakeInstance({10}, {1.0}, {{0, 0}});
  EXPECT_NEAR(ComputeFlowLowerBound(single), 10.0,
              DefaultFlowBoundTolerance(single));
  const Instance shared = SharedTypeExample();
  EXPECT_NEAR(ComputeFlowLowerBound(shared), 20.0,
              DefaultFlowBoundTolerance(shared));
  const Instance untargeted = MakeInstance({3}, {0.25, 0.75}, {{0, 0}});
  EXPECT_NEAR(ComputeFlowLowerBound(untargeted), 12.0,
              DefaultFlowBoundTolerance(untargeted));
}

TEST(ExactFlowLowerBoundTest, Examples) {
  EXPECT_DOUBLE_EQ(ExactFlowLowerBound(MakeInstance({10}, {1.0}, {{0, 0}}))
                       .value(),
                   10.0);
  EXPECT_DOUBLE_EQ(ExactFlowLowerBound(SharedTypeExample()).value(), 20.0);
  EXPECT_DOUBLE_EQ(
      ExactFlowLowerBound(MakeInstance({3}, {0.25, 0.75}, {{0, 0}})).value(),
      12.0);
  const SubsetBound disjoint = ExactFlowLowerBound(
      MakeInstance({1, 1}, {0.9, 0.1}, {{0, 0}, {1, 1}}));
  EXPECT_NEAR(disjoint.value(), 10.0, 1e-12);
  EXPECT_EQ(disjoint.subset, std::vector<CampaignId>{1});
}

TEST(ExactFlowLowerBoundTest, TooManyCampaigns) {
  std::vector<int64_t> demands(21, 1);
  std::vector<Edge> edges;
  for (int i = 0; i < 21; ++i) edges.push_back({i, 0});
  EXPECT_THROW(ExactFlowLowerBound(MakeInstance(demands, {1.0}, edges)),
               SizeLimitError);
}

TEST(FlowLowerBoundTest, AgreesWithSubsetEnumeration) {
  std::mt19937_64 rng(107);
  for (int trial = 0; trial < 200; ++trial) {
    const Instance instance = testing::RandomSmallInstance(rng, 12, 8, 100);
    const double exact = SubsetRatio(instance);
    EXPECT_NEAR(ExactFlowLowerBound(instance).value(), exact, 1e-9 * exact);
    const double tol = DefaultFlowBoundTolerance(instance);
    const double z_flow = ComputeFlowLowerBound(instance);
    EXPECT_NEAR(z_flow, exact, tol) << trial;
    EXPECT_LE(z_flow, exact * (1 + 1e-12)) << trial;
    const int64_t z_hat = FindMinimalBudget(instance).z_hat;
    EXPECT_LE(z_hat, static_cast<int64_t>(std::ceil(exact - 1e-9)) + 0)
        << trial;
  }
}

// Rounded-down supplies can make the bisection bracket sit just above the
// true value; the result must still not exceed it.
TEST(FlowLowerBoundTest, NeverAboveExactOnUnitBounds) {
  std::mt19937_64 rng(108);
  for (int trial = 0; trial < 300; ++trial) {
    const Instance instance = testing::RandomSmallInstance(rng, 3, 4, 2);
    const double exact = SubsetRatio(instance);
    EXPECT_LE(ComputeFlowLowerBound(instance), exact * (1 + 1e-12)) << trial;
  }
}

TEST(RepresentativePlanTest, Examples) {
  const Instance exact = MakeInstance({10}, {0.3, 0.7}, {{0, 0}, {0, 1}});
  EXPECT_EQ(RepresentativePlan(exact).capacities.capacity,
            (std::vector<int64_t>{3, 7}));
  const Instance tie = MakeInstance({3}, {0.5, 0.5}, {{0, 0}, {0, 1}});
  EXPECT_EQ(RepresentativePlan(tie).capacities.capacity,
            (std::vector<int64_t>{2, 1}));
  const Instance single = MakeInstance({9}, {0.4, 0.6}, {{0, 1}});
  const FlowPlan plan = RepresentativePlan(single);
  EXPECT_EQ(plan.capacities.capacity, std::vector<int64_t>{9});
  EXPECT_EQ(plan.variant, PlanVariant::kRepresentative);
  EXPECT_GT(plan.z_hat, 0);
}

TEST(RepresentativePlanTest, WithinOneOfTargets) {
  std::mt19937_64 rng(109);
  for (int trial = 0; trial < 200; ++trial) {
    const Instance instance = testing::RandomSmallInstance(rng, 8, 8, 500);
    const CapacityPlan plan = RepresentativePlan(instance).capacities;
    for (int i = 0; i < instance.num_campaigns(); ++i) {
      double gamma = 0.0;
      for (EdgeId e : instance.campaign_edges(i)) {
        gamma += instance.prob(instance.edge(e).type);
      }
      for (EdgeId e : instance.campaign_edges(i)) {
        const double target = static_cast<double>(instance.demand(i)) *
                              instance.prob(instance.edge(e).type) / gamma;
        EXPECT_LT(std::abs(static_cast<double>(plan.at(e)) - target), 1.0);
      }
      EXPECT_EQ(plan.CampaignTotal(instance, i), instance.demand(i));
    }
  }
}

TEST(MultipleDeliveryPlanTest, SingleSlotWithTotalDemandMatchesStandard) {
  std::mt19937_64 rng(113);
  for (int trial = 0; trial < 100; ++trial) {
    const Instance instance = testing::RandomSmallInstance(rng, 6, 6, 20);
    EXPECT_EQ(MultipleDeliveryPlan(instance, 1, MultiInnerRule::kTotalDemand)
                  .z_hat,
              FindMinimalBudget(instance).z_hat);
  }
}

TEST(MultipleDeliveryPlanTest, TwoSlotsOneCampaign) {
  const Instance instance = MakeInstance({10}, {1.0}, {{0, 0}});
  // Supply ceil(2Z) reaches 10 at Z = 5 when inner arcs carry M.
  EXPECT_EQ(
      MultipleDeliveryPlan(instance, 2, MultiInnerRule::kTotalDemand).z_hat,
      5);
  // With inner capacity equal to the probed budget the single edge also
  // needs Z >= 10.
  const FlowPlan plan = MultipleDeliveryPlan(instance, 2);
  EXPECT_EQ(plan.z_hat, 10);
  EXPECT_EQ(plan.slots, 2);
  EXPECT_EQ(plan.variant, PlanVariant::kMultiple);
}

TEST(MultipleDeliveryPlanTest, MatchesScanWithTotalDemandInner) {
  std::mt19937_64 rng(127);
  for (int trial = 0; trial < 100; ++trial) {
    const Instance instance = testing::RandomSmallInstance(rng, 5, 5, 20);
    for (int k : {2, 3}) {
      EXPECT_EQ(
          MultipleDeliveryPlan(instance, k, MultiInnerRule::kTotalDemand).z_hat,
          ScanZHat(instance, k));
    }
  }
}

TEST(MultipleDeliveryPlanTest, ProbeBudgetInnerIsMinimal) {
  std::mt19937_64 rng(131);
  for (int trial = 0; trial < 100; ++trial) {
    const Instance instance = testing::RandomSmallInstance(rng, 5, 5, 20);
    const int64_t m = instance.total_demand();
    const FlowPlan plan = MultipleDeliveryPlan(instance, 2);
    EXPECT_GE(BudgetMaxFlow(instance, plan.z_hat, 2,
                            MultiInnerRule::kProbeBudget),
              m);
    if (plan.z_hat > 1) {
      EXPECT_LT(BudgetMaxFlow(instance, plan.z_hat - 1, 2,
                              MultiInnerRule::kProbeBudget),
                m);
    }
  }
}

TEST(PlanIoTest, RoundTrip) {
  const Instance instance = SharedTypeExample();
  for (const FlowPlan& plan :
       {StandardPlan(instance), RepresentativePlan(instance),
        MultipleDeliveryPlan(instance, 3)}) {
    const FlowPlan loaded = LoadPlan(instance, SavePlan(instance, plan));
    EXPECT_EQ(loaded.z_hat, plan.z_hat);
    EXPECT_EQ(loaded.capacities, plan.capacities);
    EXPECT_EQ(loaded.variant, plan.variant);
    EXPECT_EQ(loaded.slots, plan.slots);
    EXPECT_DOUBLE_EQ(loaded.z_flow, plan.z_flow);
  }
}

TEST(PlanTest, TypeThresholds) {
  const Instance instance = SharedTypeExample();
  const FlowPlan plan = StandardPlan(instance);
  const std::vector<int64_t> thresholds = plan.TypeThresholds(instance);
  EXPECT_EQ(thresholds, CeilSupply(instance, plan.z_hat));
}

}  // namespace
}  // namespace gdalloc
