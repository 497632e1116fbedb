#include "gdalloc/oracles.h"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <map>
#include <random>

#include "gdalloc/planner.h"
#include "gdalloc/rng.h"
#include "test_util.h"

namespace gdalloc {
namespace {

using testing::MakeInstance;

// Top-down memoized form of the optimal online recursion.
class RecursiveDp {
 public:
  explicit RecursiveDp(const Instance& instance) : instance_(instance) {}

  double Solve() {
    return Value(std::vector<int64_t>(instance_.demands().begin(),
                                      instance_.demands().end()));
  }

 private:
  double Value(const std::vector<int64_t>& w) {
    bool empty = true;
    for (int64_t x : w) empty = empty && x == 0;
    if (empty) return 0.0;
    if (auto it = memo_.find(w); it != memo_.end()) return it->second;
    double useful = 0.0;
    double sum = 0.0;
    for (int j = 0; j < instance_.num_types(); ++j) {
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < instance_.num_campaigns(); ++i) {
        if (w[i] == 0 || !instance_.FindEdge(i, j)) continue;
        std::vector<int64_t> next = w;
        --next[i];
        best = std::min(best, Value(next));
      }
      if (std::isfinite(best)) {
        useful += instance_.prob(j);
        sum += instance_.prob(j) * best;
      }
    }
    // E = 1 + sum + (1 - useful) E.
    const double value = (1.0 + sum) / useful;
    memo_[w] = value;
    return value;
  }

  const Instance& instance_;
  std::map<std::vector<int64_t>, double> memo_;
};

double Harmonic(int n) {
  double h = 0.0;
  for (int k = 1; k <= n; ++k) h += 1.0 / k;
  return h;
}

TEST(DpTest, Examples) {
  EXPECT_DOUBLE_EQ(DpOptimalExpected(MakeInstance({1}, {1.0}, {{0, 0}})), 1.0);
  EXPECT_DOUBLE_EQ(
      DpOptimalExpected(MakeInstance({1}, {0.5, 0.5}, {{0, 0}})), 2.0);
  EXPECT_DOUBLE_EQ(DpOptimalExpected(
                       MakeInstance({1, 1}, {0.5, 0.5}, {{0, 0}, {1, 1}})),
                   3.0);
}

TEST(DpTest, MatchesRecursiveMemo) {
  std::mt19937_64 rng(401);
  for (int trial = 0; trial < 100; ++trial) {
    const Instance instance = testing::RandomSmallInstance(rng, 4, 4, 4);
    const double expected = RecursiveDp(instance).Solve();
    EXPECT_NEAR(DpOptimalExpected(instance), expected, 1e-9 * expected)
        << trial;
  }
}

TEST(DpTest, StateGuard) {
  const Instance instance = MakeInstance({999, 1000}, {1.0}, {{0, 0}, {1, 0}});
  EXPECT_GT(DpStateCount(instance), kDpStateLimit);
  EXPECT_EQ(DpStateCount(MakeInstance({9, 9}, {1.0}, {{0, 0}, {1, 0}})), 100);
  EXPECT_THROW(DpOptimalExpected(instance), StateSpaceError);
  EXPECT_NO_THROW(DpOptimalExpected(MakeInstance({999}, {1.0}, {{0, 0}})));
}

TEST(DpTest, BoundedBelowByFlowBound) {
  std::mt19937_64 rng(409);
  for (int trial = 0; trial < 100; ++trial) {
    const Instance instance = testing::RandomSmallInstance(rng, 4, 4, 5);
    EXPECT_LE(ExactFlowLowerBound(instance).value(),
              DpOptimalExpected(instance) + 1e-9);
  }
}

TEST(RandomUpperBoundTest, AnalyticIntegrals) {
  EXPECT_NEAR(RandomUpperBound(MakeInstance({1}, {1.0}, {{0, 0}})), 1.0, 1e-6);
  EXPECT_NEAR(RandomUpperBound(
                  MakeInstance({1, 1}, {0.5, 0.5}, {{0, 0}, {1, 1}})),
              3.0, 1e-6);
  // One campaign with demand W on a single type: W * H_W.
  for (int w : {2, 5, 40}) {
    EXPECT_NEAR(RandomUpperBound(MakeInstance({w}, {1.0}, {{0, 0}})),
                w * Harmonic(w), 1e-4 * w * Harmonic(w));
  }
}

TEST(RandomUpperBoundTest, LargeDemandsStayFinite) {
  const Instance instance =
      MakeInstance({20000, 15000}, {0.3, 0.7}, {{0, 0}, {1, 1}, {1, 0}});
  const double bound = RandomUpperBound(instance);
  EXPECT_TRUE(std::isfinite(bound));
  EXPECT_GT(bound, static_cast<double>(instance.total_demand()));
}

TEST(RandomUpperBoundTest, IntegrandIsDecreasing) {
  std::mt19937_64 rng(419);
  const Instance instance = testing::RandomSmallInstance(rng, 6, 6, 50);
  double previous = RandomBoundIntegrand(instance, 0.0);
  EXPECT_DOUBLE_EQ(previous, 1.0);
  for (double t = 0.5; t < 2000; t += 0.5) {
    const double value = RandomBoundIntegrand(instance, t);
    EXPECT_LE(value, previous + 1e-15);
    previous = value;
  }
}

TEST(RandomUpperBoundTest, DominatesDp) {
  std::mt19937_64 rng(421);
  for (int trial = 0; trial < 60; ++trial) {
    const Instance instance = testing::RandomSmallInstance(rng, 4, 4, 5);
    EXPECT_LE(DpOptimalExpected(instance), RandomUpperBound(instance) + 1e-6);
  }
}

std::vector<EpisodeRecord> Simulate(const Instance& instance,
                                    const std::string& name, int episodes) {
  const PolicySpec spec = PolicySpec::Parse(name);
  const FlowPlan plan = MakePlanFor(spec, instance);
  std::vector<EpisodeRecord> records;
  for (int k = 0; k < episodes; ++k) {
    auto policy = MakePolicy(spec, instance, plan);
    const uint64_t coord = static_cast<uint64_t>(k);
    records.push_back(RunEpisode(instance, *policy,
                                 StreamSeed(5, "sequence", {coord}),
                                 StreamSeed(5, "policy", {coord}),
                                 DefaultEpisodeCap(instance, plan.z_hat)));
  }
  return records;
}

TEST(WaldCheckTest, DegenerateDistributionHasZeroDeviation) {
  const Instance instance = MakeInstance({4}, {1.0}, {{0, 0}});
  const auto report = WaldCheck(Simulate(instance, "fb-greedy", 100),
                                instance.probs());
  ASSERT_EQ(report.size(), 1u);
  EXPECT_EQ(report[0].deviation, 0.0);
  EXPECT_EQ(report[0].z_score, 0.0);
}

TEST(WaldCheckTest, HoldsForUntargetedType) {
  const Instance instance =
      MakeInstance({3, 2}, {0.3, 0.3, 0.4}, {{0, 0}, {1, 1}});
  const auto report = WaldCheck(Simulate(instance, "random", 4000),
                                instance.probs());
  ASSERT_EQ(report.size(), 3u);
  for (const WaldDeviation& row : report) {
    EXPECT_LT(std::abs(row.z_score), 4.0) << row.type;
  }
}

TEST(WaldCheckTest, MeansAndDeviation) {
  std::vector<EpisodeRecord> records(2);
  records[0].consumption = 4;
  records[0].type_counts = {1, 3};
  records[1].consumption = 6;
  records[1].type_counts = {3, 3};
  const std::vector<double> probs{0.5, 0.5};
  const auto report = WaldCheck(records, probs);
  EXPECT_DOUBLE_EQ(report[0].mean_count, 2.0);
  EXPECT_DOUBLE_EQ(report[0].expected_count, 2.5);
  EXPECT_DOUBLE_EQ(report[0].deviation, 0.5);
  EXPECT_DOUBLE_EQ(report[1].deviation, 0.5);
}

TEST(CouponCollectorTest, RandomPolicyMonteCarlo) {
  const Instance instance = MakeInstance({1, 1}, {0.5, 0.5}, {{0, 0}, {1, 1}});
  const auto records = Simulate(instance, "random", 10000);
  double total = 0.0;
  for (const EpisodeRecord& r : records) total += r.consumption;
  EXPECT_NEAR(total / records.size(), 3.0, 0.05);
}

}  // namespace
}  // namespace gdalloc
