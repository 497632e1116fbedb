// Random instance generation, multi-policy comparisons on shared user
// sequences, and the distribution-bias robustness harness.

#ifndef GDALLOC_EXPERIMENTS_H_
#define GDALLOC_EXPERIMENTS_H_

#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gdalloc/instance.h"
#include "gdalloc/policies.h"

namespace gdalloc {

enum class DistributionKind {
  // r_j ~ Uniform(0, 1], p_j = r_j / sum r.
  kRandomNormalization,
  // r_j = 1/n + N(0, (1/(6n))^2), non-positive draws resampled, normalized.
  kGaussPerturbation,
};

enum class DegreeMode {
  // Every user type targets exactly avg_degree distinct campaigns.
  kExactPerType,
  // n * avg_degree distinct edges placed uniformly over all pairs.
  kUniformEdges,
};

std::string_view DistributionName(DistributionKind kind);
DistributionKind ParseDistribution(std::string_view name);

struct GeneratorConfig {
  int m = 50;
  int n = 100;
  int avg_degree = 5;
  int64_t demand_lo = 50;
  int64_t demand_hi = 100;
  DistributionKind distribution = DistributionKind::kRandomNormalization;
  DegreeMode degree_mode = DegreeMode::kExactPerType;
  uint64_t seed = 0;
};

// Throws std::invalid_argument on bad configs (d < 1, d > m, lo < 1, ...).
void CheckConfig(const GeneratorConfig& config);

struct GeneratedInstance {
  Instance instance;
  // Campaigns left without edges and attached to a random type.
  int repair_count = 0;
};

GeneratedInstance GenerateInstance(const GeneratorConfig& config);

struct NamedInstance {
  std::string id;
  Instance instance;
  // Free-form tag copied into report rows, e.g. "deg=5;dist=random".
  std::string setting;
};

struct ComparisonConfig {
  std::vector<PolicySpec> policies;
  int episodes_per_instance = 100;
  uint64_t seed = 0;
  int threads = 1;
};

struct PolicyInstanceResult {
  std::string policy;
  double mean_consumption = 0.0;
  double mean_t_star = 0.0;
  // mean consumption / mean t_star over this instance's sequences.
  double ratio = 0.0;
  // Largest consumption / t_star over the sequences.
  double worst_ratio = 0.0;
  double ratio_standard_error = 0.0;
  int completed = 0;
  int failed = 0;
};

struct InstanceSummary {
  std::string id;
  std::string setting;
  int64_t z_hat = 0;
  double z_flow = 0.0;
  std::vector<PolicyInstanceResult> policies;
};

struct PolicySummary {
  std::string policy;
  double mean_consumption = 0.0;
  double mean_t_star = 0.0;
  // Mean over instances of the per-instance ratio.
  double mean_ratio = 0.0;
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  double worst_sequence_ratio = 0.0;
  int failed = 0;
};

struct EvalReport {
  uint64_t seed = 0;
  int episodes_per_instance = 0;
  std::vector<PolicySummary> policies;
  std::vector<InstanceSummary> instances;
};

// Plans each instance once, then runs every policy on the same seeded
// sequences and pairs them with the per-sequence offline optimum. Episodes
// that hit the stream cap are counted as failed and left out of the means.
EvalReport RunComparison(std::span<const NamedInstance> instances,
                         const ComparisonConfig& config);

struct RobustnessConfig {
  // Multipliers on p_j are drawn from Uniform[1 - delta, 1 + delta].
  double delta = 0.1;
  int episodes = 1000;
  uint64_t seed = 0;
  PolicySpec policy{PolicyKind::kFlowGreedy, 1};
  int threads = 1;
};

inline constexpr double kMaxRobustnessDelta = 0.9;

struct RobustnessReport {
  double delta_requested = 0.0;
  double delta = 0.0;  // after capping at 0.9
  bool capped = false;
  // max_j |p_hat_j / p_j - 1| after renormalization.
  double delta_effective = 0.0;
  std::vector<double> biased_probs;
  // E_D of the policy planned with the true and with the biased distribution.
  double mean_true_plan = 0.0;
  double mean_biased_plan = 0.0;
  double ratio = 0.0;
  double ratio_standard_error = 0.0;
  // (1 + delta_eff) / (1 - delta_eff).
  double bound = 0.0;
  int episodes = 0;
  int failed = 0;
};

// Both plans run on the same sequences drawn from the true distribution.
RobustnessReport RunRobustness(const Instance& instance,
                               const RobustnessConfig& config);

void WriteReportJson(std::ostream& out, const EvalReport& report);
// One row per instance per policy:
// instance_id,setting,policy,z_hat,z_flow,mean_consumption,mean_t_star,
// competitive_ratio,worst_ratio,completed,failed
void WriteReportCsv(std::ostream& out, const EvalReport& report);
void WriteRobustnessJson(std::ostream& out, const RobustnessReport& report);

}  // namespace gdalloc

#endif  // GDALLOC_EXPERIMENTS_H_
