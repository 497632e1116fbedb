#include "gdalloc/experiments.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

#include "gdalloc/parallel.h"
#include "gdalloc/planner.h"
#include "gdalloc/rng.h"
#include "gdalloc/simulator.h"

namespace gdalloc {

std::string_view DistributionName(DistributionKind kind) {
  switch (kind) {
    case DistributionKind::kRandomNormalization:
      return "random";
    case DistributionKind::kGaussPerturbation:
      return "gauss";
  }
  return "unknown";
}

DistributionKind ParseDistribution(std::string_view name) {
  if (name == "random") return DistributionKind::kRandomNormalization;
  if (name == "gauss") return DistributionKind::kGaussPerturbation;
  throw std::invalid_argument("unknown distribution \"" + std::string(name) +
                              "\" (expected random or gauss)");
}

void CheckConfig(const GeneratorConfig& config) {
  if (config.m < 1 || config.n < 1) {
    throw std::invalid_argument("m and n must be >= 1");
  }
  if (config.avg_degree < 1) throw std::invalid_argument("degree must be >= 1");
  if (config.avg_degree > config.m) {
    throw std::invalid_argument("degree must not exceed m");
  }
  if (config.demand_lo < 1 || config.demand_hi < config.demand_lo) {
    throw std::invalid_argument("demand range must satisfy 1 <= lo <= hi");
  }
}

GeneratedInstance GenerateInstance(const GeneratorConfig& config) {
  CheckConfig(config);
  Rng rng(config.seed);
  const int m = config.m;
  const int n = config.n;
  const int d = config.avg_degree;

  std::vector<Edge> edges;
  edges.reserve(static_cast<size_t>(n) * d + m);
  std::vector<char> has_edge(m, 0);
  if (config.degree_mode == DegreeMode::kExactPerType) {
    std::vector<CampaignId> pool(m);
    for (UserTypeId j = 0; j < n; ++j) {
      std::iota(pool.begin(), pool.end(), 0);
      // Partial Fisher-Yates: the first d slots are a uniform d-subset.
      for (int k = 0; k < d; ++k) {
        const int pick = std::uniform_int_distribution<int>(k, m - 1)(rng);
        std::swap(pool[k], pool[pick]);
        edges.push_back({pool[k], j});
        has_edge[pool[k]] = 1;
      }
    }
  } else {
    std::set<std::pair<int, int>> chosen;
    const int64_t target = static_cast<int64_t>(n) * d;
    std::uniform_int_distribution<int> campaign(0, m - 1);
    std::uniform_int_distribution<int> type(0, n - 1);
    while (static_cast<int64_t>(chosen.size()) < target) {
      const int i = campaign(rng);
      const int j = type(rng);
      if (chosen.emplace(i, j).second) {
        edges.push_back({i, j});
        has_edge[i] = 1;
      }
    }
  }

  GeneratedInstance out;
  std::uniform_int_distribution<int> any_type(0, n - 1);
  for (CampaignId i = 0; i < m; ++i) {
    if (!has_edge[i]) {
      edges.push_back({i, any_type(rng)});
      ++out.repair_count;
    }
  }

  std::vector<int64_t> demands(m);
  std::uniform_int_distribution<int64_t> demand(config.demand_lo,
                                                config.demand_hi);
  for (int64_t& w : demands) w = demand(rng);

  std::vector<double> weights(n);
  if (config.distribution == DistributionKind::kRandomNormalization) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (double& r : weights) r = 1.0 - unit(rng);  // (0, 1]
  } else {
    const double mean = 1.0 / n;
    std::normal_distribution<double> noise(0.0, mean / 6.0);
    for (double& r : weights) {
      do {
        r = mean + noise(rng);
      } while (r <= 0.0);
    }
  }
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  for (double& r : weights) r /= total;

  out.instance = Instance(std::move(demands), std::move(weights),
                          std::move(edges));
  return out;
}

namespace {

struct Moments {
  double mean_a = 0.0;
  double mean_b = 0.0;
  double ratio = 0.0;
  double ratio_se = 0.0;
};

// Ratio of means mean(b)/mean(a) over paired samples, with a delta-method
// standard error.
Moments PairedRatio(const std::vector<double>& a, const std::vector<double>& b) {
  Moments out;
  const size_t count = a.size();
  if (count == 0) return out;
  for (size_t k = 0; k < count; ++k) {
    out.mean_a += a[k];
    out.mean_b += b[k];
  }
  out.mean_a /= static_cast<double>(count);
  out.mean_b /= static_cast<double>(count);
  out.ratio = out.mean_b / out.mean_a;
  if (count > 1) {
    double var = 0.0;
    for (size_t k = 0; k < count; ++k) {
      const double r = b[k] - out.ratio * a[k];
      var += r * r;
    }
    var /= static_cast<double>(count - 1);
    out.ratio_se =
        std::sqrt(var / static_cast<double>(count)) / std::abs(out.mean_a);
  }
  return out;
}

constexpr int64_t kFailed = -1;

}  // namespace

EvalReport RunComparison(std::span<const NamedInstance> instances,
                         const ComparisonConfig& config) {
  if (config.episodes_per_instance < 1) {
    throw std::invalid_argument("episodes per instance must be >= 1");
  }
  const auto& policies = config.policies;
  const int num_policies = static_cast<int>(policies.size());
  const int num_instances = static_cast<int>(instances.size());
  const int episodes = config.episodes_per_instance;

  // Plans, one per (instance, policy); non-standard variants computed on
  // demand.
  struct InstancePlans {
    FlowPlan standard;
    std::vector<FlowPlan> per_policy;
    int64_t cap = 0;
  };
  std::vector<InstancePlans> plans(num_instances);
  ParallelFor(num_instances, config.threads, [&](int64_t k) {
    const Instance& instance = instances[k].instance;
    InstancePlans& p = plans[k];
    p.standard = StandardPlan(instance);
    for (const PolicySpec& spec : policies) {
      p.per_policy.push_back(spec.plan_variant() == PlanVariant::kStandard
                                 ? p.standard
                                 : MakePlanFor(spec, instance));
    }
    p.cap = DefaultEpisodeCap(instance, p.standard.z_hat);
  });

  // consumption[unit][policy] and t_star[unit][policy]; unit = instance *
  // episodes + episode.
  const int64_t units = static_cast<int64_t>(num_instances) * episodes;
  std::vector<std::vector<int64_t>> consumption(units);
  std::vector<std::vector<int64_t>> t_star(units);
  ParallelFor(units, config.threads, [&](int64_t unit) {
    const int k = static_cast<int>(unit / episodes);
    const auto e = static_cast<uint64_t>(unit % episodes);
    const Instance& instance = instances[k].instance;
    const InstancePlans& p = plans[k];
    const uint64_t sequence_seed =
        StreamSeed(config.seed, "sequence", {static_cast<uint64_t>(k), e});

    std::vector<std::pair<int, int64_t>> optimum_by_slots;
    auto optimum = [&](int slots) -> int64_t {
      for (const auto& [s, value] : optimum_by_slots) {
        if (s == slots) return value;
      }
      int64_t value = kFailed;
      try {
        value = slots == 1
                    ? OfflineOptimum(instance, sequence_seed, p.cap)
                    : OfflineOptimumMulti(instance, sequence_seed, p.cap, slots);
      } catch (const CapExceededError&) {
      }
      optimum_by_slots.emplace_back(slots, value);
      return value;
    };

    consumption[unit].assign(num_policies, kFailed);
    t_star[unit].assign(num_policies, kFailed);
    for (int q = 0; q < num_policies; ++q) {
      const PolicySpec& spec = policies[q];
      t_star[unit][q] = optimum(spec.slots);
      auto policy = MakePolicy(spec, instance, p.per_policy[q]);
      const uint64_t policy_seed = StreamSeed(
          config.seed, "policy:" + spec.name(), {static_cast<uint64_t>(k), e});
      try {
        consumption[unit][q] =
            RunEpisode(instance, *policy, sequence_seed, policy_seed, p.cap)
                .consumption;
      } catch (const CapExceededError&) {
      }
    }
  });

  EvalReport report;
  report.seed = config.seed;
  report.episodes_per_instance = episodes;
  for (int k = 0; k < num_instances; ++k) {
    InstanceSummary summary;
    summary.id = instances[k].id;
    summary.setting = instances[k].setting;
    summary.z_hat = plans[k].standard.z_hat;
    summary.z_flow = plans[k].standard.z_flow;
    for (int q = 0; q < num_policies; ++q) {
      PolicyInstanceResult result;
      result.policy = policies[q].name();
      std::vector<double> a;
      std::vector<double> b;
      for (int e = 0; e < episodes; ++e) {
        const int64_t unit = static_cast<int64_t>(k) * episodes + e;
        const int64_t c = consumption[unit][q];
        const int64_t t = t_star[unit][q];
        if (c == kFailed || t == kFailed) {
          ++result.failed;
          continue;
        }
        a.push_back(static_cast<double>(t));
        b.push_back(static_cast<double>(c));
        result.worst_ratio = std::max(
            result.worst_ratio, static_cast<double>(c) / static_cast<double>(t));
      }
      const Moments moments = PairedRatio(a, b);
      result.completed = static_cast<int>(a.size());
      result.mean_t_star = moments.mean_a;
      result.mean_consumption = moments.mean_b;
      result.ratio = moments.ratio;
      result.ratio_standard_error = moments.ratio_se;
      summary.policies.push_back(result);
    }
    report.instances.push_back(std::move(summary));
  }

  for (int q = 0; q < num_policies; ++q) {
    PolicySummary summary;
    summary.policy = policies[q].name();
    int counted = 0;
    for (const InstanceSummary& inst : report.instances) {
      const PolicyInstanceResult& r = inst.policies[q];
      summary.failed += r.failed;
      if (r.completed == 0) continue;
      summary.mean_consumption += r.mean_consumption;
      summary.mean_t_star += r.mean_t_star;
      summary.mean_ratio += r.ratio;
      summary.min_ratio =
          counted == 0 ? r.ratio : std::min(summary.min_ratio, r.ratio);
      summary.max_ratio = std::max(summary.max_ratio, r.ratio);
      summary.worst_sequence_ratio =
          std::max(summary.worst_sequence_ratio, r.worst_ratio);
      ++counted;
    }
    if (counted > 0) {
      summary.mean_consumption /= counted;
      summary.mean_t_star /= counted;
      summary.mean_ratio /= counted;
    }
    report.policies.push_back(summary);
  }
  return report;
}

RobustnessReport RunRobustness(const Instance& instance,
                               const RobustnessConfig& config) {
  if (!(config.delta >= 0.0 && config.delta < 1.0)) {
    throw std::invalid_argument("delta must lie in [0, 1)");
  }
  if (config.episodes < 1) throw std::invalid_argument("episodes must be >= 1");

  RobustnessReport report;
  report.delta_requested = config.delta;
  report.delta = std::min(config.delta, kMaxRobustnessDelta);
  report.capped = config.delta > kMaxRobustnessDelta;
  report.episodes = config.episodes;

  const int n = instance.num_types();
  std::vector<double> biased(instance.probs().begin(), instance.probs().end());
  if (report.delta > 0.0) {
    Rng rng(StreamSeed(config.seed, "robustness-bias"));
    std::uniform_real_distribution<double> multiplier(1.0 - report.delta,
                                                      1.0 + report.delta);
    for (double& p : biased) p *= multiplier(rng);
    const double total = std::accumulate(biased.begin(), biased.end(), 0.0);
    for (double& p : biased) p /= total;
  }
  for (UserTypeId j = 0; j < n; ++j) {
    report.delta_effective = std::max(
        report.delta_effective, std::abs(biased[j] / instance.prob(j) - 1.0));
  }
  report.biased_probs = biased;
  report.bound = report.delta_effective < 1.0
                     ? (1.0 + report.delta_effective) /
                           (1.0 - report.delta_effective)
                     : std::numeric_limits<double>::infinity();

  const Instance biased_instance = instance.WithProbs(biased);
  const FlowPlan true_plan = MakePlanFor(config.policy, instance);
  const FlowPlan biased_plan = MakePlanFor(config.policy, biased_instance);
  const int64_t cap = DefaultEpisodeCap(
      instance, std::max(true_plan.z_hat, biased_plan.z_hat));

  std::vector<int64_t> true_runs(config.episodes, kFailed);
  std::vector<int64_t> biased_runs(config.episodes, kFailed);
  ParallelFor(config.episodes, config.threads, [&](int64_t e) {
    const auto episode = static_cast<uint64_t>(e);
    const uint64_t sequence_seed =
        StreamSeed(config.seed, "sequence", {episode});
    const uint64_t policy_seed = StreamSeed(config.seed, "policy", {episode});
    auto true_policy = MakePolicy(config.policy, instance, true_plan);
    auto biased_policy = MakePolicy(config.policy, biased_instance, biased_plan);
    try {
      true_runs[e] = RunEpisode(instance, *true_policy, sequence_seed,
                                policy_seed, cap)
                         .consumption;
      biased_runs[e] = RunEpisode(instance, *biased_policy, sequence_seed,
                                  policy_seed, cap)
                           .consumption;
    } catch (const CapExceededError&) {
    }
  });

  std::vector<double> a;
  std::vector<double> b;
  for (int e = 0; e < config.episodes; ++e) {
    if (true_runs[e] == kFailed || biased_runs[e] == kFailed) {
      ++report.failed;
      continue;
    }
    a.push_back(static_cast<double>(true_runs[e]));
    b.push_back(static_cast<double>(biased_runs[e]));
  }
  const Moments moments = PairedRatio(a, b);
  report.mean_true_plan = moments.mean_a;
  report.mean_biased_plan = moments.mean_b;
  report.ratio = moments.ratio;
  report.ratio_standard_error = moments.ratio_se;
  return report;
}

}  // namespace gdalloc
