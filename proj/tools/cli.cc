#include "cli.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gdalloc/experiments.h"
#include "gdalloc/instance.h"
#include "gdalloc/oracles.h"
#include "gdalloc/parallel.h"
#include "gdalloc/planner.h"
#include "gdalloc/policies.h"
#include "gdalloc/rng.h"
#include "gdalloc/simulator.h"

namespace gdalloc::cli {
namespace {

std::string Format(const char* fmt, double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), fmt, value);
  return buffer;
}

void WriteText(const std::string& path, const std::string& text,
               std::ostream& out) {
  if (path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open " + path + " for writing");
  file << text;
  file.flush();
  if (!file) throw IoError("write failed: " + path);
}

int ResolveThreads(int requested) {
  return requested > 0 ? requested : DefaultThreadCount();
}

std::string TypeName(const Instance& instance, UserTypeId j) {
  if (static_cast<int>(instance.labels().types.size()) > j) {
    return instance.labels().types[j];
  }
  return "u" + std::to_string(j);
}

// Shared generator flags.
struct GenFlags {
  int m = 50;
  int n = 100;
  std::vector<int> degrees{5};
  int64_t lo = 50;
  int64_t hi = 100;
  std::string dist = "random";
  std::string degree_mode = "exact";

  void Add(CLI::App* app, bool many_degrees) {
    app->add_option("--m", m, "number of campaigns")->capture_default_str();
    app->add_option("--n", n, "number of user types")->capture_default_str();
    auto* deg = app->add_option("--deg", degrees, "average user-type degree")
                    ->capture_default_str();
    if (many_degrees) {
      deg->delimiter(',');
    } else {
      deg->expected(1);
    }
    app->add_option("--lo", lo, "smallest demand")->capture_default_str();
    app->add_option("--hi", hi, "largest demand")->capture_default_str();
    app->add_option("--dist", dist,
                    "distribution: random | gauss | mixed (alternating)")
        ->capture_default_str();
    app->add_option("--degree-mode", degree_mode, "exact | uniform")
        ->capture_default_str();
  }

  // `index` picks the distribution under "mixed": even random, odd gauss.
  GeneratorConfig Config(int degree, uint64_t seed, int index = 0) const {
    GeneratorConfig config;
    config.m = m;
    config.n = n;
    config.avg_degree = degree;
    config.demand_lo = lo;
    config.demand_hi = hi;
    if (dist == "mixed") {
      config.distribution = index % 2 ? DistributionKind::kGaussPerturbation
                                      : DistributionKind::kRandomNormalization;
    } else {
      config.distribution = ParseDistribution(dist);
    }
    if (degree_mode == "exact") {
      config.degree_mode = DegreeMode::kExactPerType;
    } else if (degree_mode == "uniform") {
      config.degree_mode = DegreeMode::kUniformEdges;
    } else {
      throw std::invalid_argument("unknown degree mode \"" + degree_mode +
                                  "\"; valid: exact, uniform");
    }
    config.seed = seed;
    CheckConfig(config);
    return config;
  }
};

// ---- gen

struct GenCommand {
  GenFlags flags;
  uint64_t seed = kDefaultSeed;
  std::string out_path = "-";

  int Run(std::ostream& out, std::ostream& err) const {
    err << "seed: " << seed << "\n";
    const GeneratedInstance generated =
        GenerateInstance(flags.Config(flags.degrees.front(), seed));
    err << "repairs: " << generated.repair_count << "\n";
    WriteText(out_path, SaveInstance(generated.instance), out);
    return kExitOk;
  }
};

// ---- plan

struct PlanCommand {
  std::string instance_path;
  std::string variant = "standard";
  int k = 1;
  std::optional<int64_t> forecast;
  std::string out_path;

  int Run(std::ostream& out, std::ostream& /*err*/) const {
    const Instance instance = ReadInstanceFile(instance_path);
    FlowPlan plan;
    if (variant == "standard") {
      plan = StandardPlan(instance);
    } else if (variant == "representative") {
      plan = RepresentativePlan(instance);
    } else if (variant == "multi") {
      if (k < 1) throw std::invalid_argument("--k must be >= 1");
      plan = MultipleDeliveryPlan(instance, k);
    } else {
      throw std::invalid_argument("unknown variant \"" + variant +
                                  "\"; valid: standard, representative, multi");
    }
    if (!out_path.empty()) WriteText(out_path, SavePlan(instance, plan), out);
    if (out_path == "-") return kExitOk;

    const std::vector<int64_t> thresholds = plan.TypeThresholds(instance);
    out << "variant: " << PlanVariantName(plan.variant);
    if (plan.variant == PlanVariant::kMultiple) out << " (k=" << plan.slots << ")";
    out << "\n";
    out << "z_hat: " << plan.z_hat << "\n";
    out << "z_flow: " << Format("%.6f", plan.z_flow) << "\n";
    out << "thresholds: [";
    for (size_t j = 0; j < thresholds.size(); ++j) {
      out << (j ? ", " : "") << thresholds[j];
    }
    out << "]\n";
    if (forecast) {
      const int64_t surplus = *forecast - plan.z_hat;
      out << "forecast: " << *forecast << "\n";
      if (surplus >= 0) {
        out << "surplus: " << surplus
            << " users beyond the plan budget are free for other use\n";
      } else {
        out << "deficit: " << -surplus
            << " more users needed to expect all contracts filled\n";
      }
      out << "type,threshold,expected_supply,balance\n";
      for (UserTypeId j = 0; j < instance.num_types(); ++j) {
        const double supply =
            static_cast<double>(*forecast) * instance.prob(j);
        out << TypeName(instance, j) << ',' << thresholds[j] << ','
            << Format("%.3f", supply) << ','
            << Format("%+.3f", supply - static_cast<double>(thresholds[j]))
            << "\n";
      }
    }
    return kExitOk;
  }
};

// ---- simulate

struct SimulateCommand {
  std::string instance_path;
  std::string policy = "fb-greedy";
  int episodes = 100;
  uint64_t seed = kDefaultSeed;
  std::string id;
  std::string out_path = "-";
  int threads = 0;

  int Run(std::ostream& out, std::ostream& err) const {
    err << "seed: " << seed << "\n";
    if (episodes < 1) throw std::invalid_argument("--episodes must be >= 1");
    const PolicySpec spec = PolicySpec::Parse(policy);
    const Instance instance = ReadInstanceFile(instance_path);
    const FlowPlan plan = MakePlanFor(spec, instance);
    const FlowPlan standard =
        spec.plan_variant() == PlanVariant::kStandard ? plan
                                                      : StandardPlan(instance);
    const int64_t cap = DefaultEpisodeCap(instance, standard.z_hat);
    const std::string instance_id =
        id.empty() ? std::filesystem::path(instance_path).stem().string() : id;

    std::vector<EpisodeRow> rows(episodes);
    ParallelFor(episodes, ResolveThreads(threads), [&](int64_t e) {
      const auto coord = static_cast<uint64_t>(e);
      EpisodeRow& row = rows[e];
      row.instance_id = instance_id;
      row.policy = spec.name();
      row.seed = StreamSeed(seed, "sequence", {0, coord});
      try {
        row.t_star =
            spec.slots == 1
                ? OfflineOptimum(instance, row.seed, cap)
                : OfflineOptimumMulti(instance, row.seed, cap, spec.slots);
      } catch (const CapExceededError&) {
        row.failed = true;
      }
      auto delivery = MakePolicy(spec, instance, plan);
      try {
        const EpisodeRecord record = RunEpisode(
            instance, *delivery, row.seed,
            StreamSeed(seed, "policy:" + spec.name(), {0, coord}), cap);
        row.consumption = record.consumption;
        row.passthrough = record.passthrough_count;
      } catch (const CapExceededError&) {
        row.failed = true;
      }
    });

    std::ostringstream csv;
    WriteEpisodeCsv(csv, rows);
    WriteText(out_path, csv.str(), out);

    if (out_path != "-") {
      double consumption = 0.0;
      double t_star = 0.0;
      int completed = 0;
      for (const EpisodeRow& row : rows) {
        if (row.failed) continue;
        consumption += static_cast<double>(row.consumption);
        t_star += static_cast<double>(row.t_star);
        ++completed;
      }
      out << "policy: " << spec.name() << "\n";
      out << "episodes: " << episodes << " (completed " << completed
          << ", failed " << episodes - completed << ")\n";
      if (completed > 0) {
        out << "mean_consumption: " << Format("%.4f", consumption / completed)
            << "\n";
        out << "mean_t_star: " << Format("%.4f", t_star / completed) << "\n";
        out << "competitive_ratio: " << Format("%.6f", consumption / t_star)
            << "\n";
      }
    }
    return kExitOk;
  }
};

// ---- compare

std::vector<PolicySpec> ParsePolicies(const std::vector<std::string>& names) {
  std::vector<PolicySpec> specs;
  for (const std::string& name : names) specs.push_back(PolicySpec::Parse(name));
  if (specs.empty()) throw std::invalid_argument("no policies given");
  return specs;
}

void PrintSummary(std::ostream& out, const EvalReport& report) {
  // Settings in first-seen order.
  std::vector<std::string> settings;
  for (const InstanceSummary& inst : report.instances) {
    if (std::find(settings.begin(), settings.end(), inst.setting) ==
        settings.end()) {
      settings.push_back(inst.setting);
    }
  }
  char line[160];
  if (settings.size() > 1) {
    for (const std::string& setting : settings) {
      out << "[" << setting << "]\n";
      std::snprintf(line, sizeof(line), "%-20s %11s %9s\n", "policy",
                    "mean_ratio", "instances");
      out << line;
      for (size_t q = 0; q < report.policies.size(); ++q) {
        double sum = 0.0;
        int count = 0;
        for (const InstanceSummary& inst : report.instances) {
          if (inst.setting != setting || inst.policies[q].completed == 0) {
            continue;
          }
          sum += inst.policies[q].ratio;
          ++count;
        }
        std::snprintf(line, sizeof(line), "%-20s %11.6f %9d\n",
                      report.policies[q].policy.c_str(),
                      count ? sum / count : 0.0, count);
        out << line;
      }
    }
    out << "[all]\n";
  }
  std::snprintf(line, sizeof(line), "%-20s %11s %11s %11s %11s %7s\n",
                "policy", "mean_ratio", "min_ratio", "max_ratio", "worst_seq",
                "failed");
  out << line;
  for (const PolicySummary& p : report.policies) {
    std::snprintf(line, sizeof(line),
                  "%-20s %11.6f %11.6f %11.6f %11.6f %7d\n", p.policy.c_str(),
                  p.mean_ratio, p.min_ratio, p.max_ratio,
                  p.worst_sequence_ratio, p.failed);
    out << line;
  }
}

struct CompareCommand {
  std::vector<std::string> instance_paths;
  GenFlags flags;
  int instances = 10;
  std::vector<std::string> policies{"fb-greedy", "random", "dg", "pg", "hwm"};
  int episodes = 100;
  uint64_t seed = kDefaultSeed;
  std::string json_path;
  std::string csv_path;
  int threads = 0;

  int Run(std::ostream& out, std::ostream& err) const {
    err << "seed: " << seed << "\n";
    ComparisonConfig config;
    config.policies = ParsePolicies(policies);
    config.episodes_per_instance = episodes;
    config.seed = seed;
    config.threads = ResolveThreads(threads);

    std::vector<NamedInstance> named;
    if (!instance_paths.empty()) {
      for (const std::string& path : instance_paths) {
        named.push_back({std::filesystem::path(path).stem().string(),
                         ReadInstanceFile(path), "file"});
      }
    } else {
      if (instances < 1) throw std::invalid_argument("--instances must be >= 1");
      int repairs = 0;
      for (int degree : flags.degrees) {
        const std::string setting =
            "deg=" + std::to_string(degree) + " W=[" +
            std::to_string(flags.lo) + "," + std::to_string(flags.hi) + "]";
        for (int k = 0; k < instances; ++k) {
          // The graph stream ignores the demand range so exposure sweeps
          // share graphs.
          const GeneratedInstance generated = GenerateInstance(flags.Config(
              degree, StreamSeed(seed, "instance", {static_cast<uint64_t>(k)}),
              k));
          repairs += generated.repair_count;
          char id[64];
          std::snprintf(id, sizeof(id), "deg%d-%03d", degree, k);
          named.push_back({id, generated.instance, setting});
        }
      }
      err << "generated " << named.size() << " instances (" << repairs
          << " campaign repairs)\n";
    }

    const EvalReport report = RunComparison(named, config);
    if (!json_path.empty()) {
      std::ostringstream json;
      WriteReportJson(json, report);
      WriteText(json_path, json.str(), out);
    }
    if (!csv_path.empty()) {
      std::ostringstream csv;
      WriteReportCsv(csv, report);
      WriteText(csv_path, csv.str(), out);
    }
    if (json_path != "-" && csv_path != "-") PrintSummary(out, report);
    return kExitOk;
  }
};

// ---- robustness

struct RobustnessCommand {
  std::string instance_path;
  GenFlags flags;
  double delta = 0.1;
  int episodes = 1000;
  std::string policy = "fb-greedy";
  uint64_t seed = kDefaultSeed;
  std::string out_path;
  int threads = 0;

  int Run(std::ostream& out, std::ostream& err) const {
    err << "seed: " << seed << "\n";
    const Instance instance =
        instance_path.empty()
            ? GenerateInstance(flags.Config(flags.degrees.front(),
                                            StreamSeed(seed, "instance", {0})))
                  .instance
            : ReadInstanceFile(instance_path);
    RobustnessConfig config;
    config.delta = delta;
    config.episodes = episodes;
    config.seed = seed;
    config.policy = PolicySpec::Parse(policy);
    config.threads = ResolveThreads(threads);
    const RobustnessReport report = RunRobustness(instance, config);
    if (report.capped) {
      err << "delta " << report.delta_requested << " capped at "
          << report.delta << "\n";
    }
    if (!out_path.empty()) {
      std::ostringstream json;
      WriteRobustnessJson(json, report);
      WriteText(out_path, json.str(), out);
      if (out_path == "-") return kExitOk;
    }
    out << "policy: " << config.policy.name() << "\n";
    out << "delta: " << Format("%.4f", report.delta) << "\n";
    out << "delta_effective: " << Format("%.6f", report.delta_effective)
        << "\n";
    out << "mean_true_plan: " << Format("%.4f", report.mean_true_plan) << "\n";
    out << "mean_biased_plan: " << Format("%.4f", report.mean_biased_plan)
        << "\n";
    out << "ratio: " << Format("%.6f", report.ratio) << " (se "
        << Format("%.6f", report.ratio_standard_error) << ")\n";
    out << "bound: " << Format("%.6f", report.bound) << "\n";
    out << "failed_episodes: " << report.failed << "\n";
    return kExitOk;
  }
};

// ---- oracle

struct OracleCommand {
  std::string instance_path;

  int Run(std::ostream& out, std::ostream& /*err*/) const {
    const Instance instance = ReadInstanceFile(instance_path);
    out << "z_flow: " << Format("%.6f", ComputeFlowLowerBound(instance))
        << "\n";
    try {
      out << "dp_optimal_expected: "
          << Format("%.6f", DpOptimalExpected(instance)) << "\n";
    } catch (const StateSpaceError& e) {
      out << "dp_optimal_expected: omitted (" << e.what() << ")\n";
    }
    out << "random_upper_bound: " << Format("%.6f", RandomUpperBound(instance))
        << "\n";
    return kExitOk;
  }
};

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Guaranteed-delivery ad allocation: planning, simulation and "
               "policy comparison"};
  app.name("gdalloc");
  app.require_subcommand(1);

  GenCommand gen;
  auto* gen_cmd = app.add_subcommand("gen", "generate a random instance");
  gen.flags.Add(gen_cmd, false);
  gen_cmd->add_option("--seed", gen.seed, "root seed")->capture_default_str();
  gen_cmd->add_option("--out", gen.out_path, "output file, - for stdout")
      ->capture_default_str();

  PlanCommand plan;
  auto* plan_cmd = app.add_subcommand("plan", "compute the delivery plan");
  plan_cmd->add_option("instance,--instance", plan.instance_path,
                       "instance JSON")
      ->required();
  plan_cmd->add_option("--variant", plan.variant,
                       "standard | representative | multi")
      ->capture_default_str();
  plan_cmd->add_option("--k", plan.k, "slots per user for the multi variant")
      ->capture_default_str();
  plan_cmd->add_option("--forecast", plan.forecast,
                       "forecast number of users for surplus/deficit");
  plan_cmd->add_option("--out", plan.out_path, "plan JSON output, - for stdout");

  SimulateCommand sim;
  auto* sim_cmd = app.add_subcommand("simulate", "run seeded episodes");
  sim_cmd->add_option("instance,--instance", sim.instance_path, "instance JSON")
      ->required();
  sim_cmd->add_option("--policy", sim.policy, "policy name")
      ->capture_default_str();
  sim_cmd->add_option("--episodes", sim.episodes, "number of episodes")
      ->capture_default_str();
  sim_cmd->add_option("--seed", sim.seed, "root seed")->capture_default_str();
  sim_cmd->add_option("--id", sim.id, "instance id written to the CSV");
  sim_cmd->add_option("--out", sim.out_path, "episode CSV, - for stdout")
      ->capture_default_str();
  sim_cmd->add_option("--threads", sim.threads,
                      "worker threads (default: $GDALLOC_THREADS or cores)");

  CompareCommand cmp;
  auto* cmp_cmd = app.add_subcommand("compare", "compare policies");
  cmp_cmd->add_option("--instance", cmp.instance_paths,
                      "instance JSON (repeatable); otherwise instances are "
                      "generated");
  cmp.flags.Add(cmp_cmd, true);
  cmp_cmd->add_option("--instances", cmp.instances,
                      "generated instances per degree")
      ->capture_default_str();
  cmp_cmd->add_option("--policies", cmp.policies, "comma-separated names")
      ->delimiter(',')
      ->capture_default_str();
  cmp_cmd->add_option("--episodes", cmp.episodes, "sequences per instance")
      ->capture_default_str();
  cmp_cmd->add_option("--seed", cmp.seed, "root seed")->capture_default_str();
  cmp_cmd->add_option("--json", cmp.json_path, "report JSON output");
  cmp_cmd->add_option("--csv", cmp.csv_path, "plot-data CSV output");
  cmp_cmd->add_option("--threads", cmp.threads,
                      "worker threads (default: $GDALLOC_THREADS or cores)");

  RobustnessCommand rob;
  auto* rob_cmd = app.add_subcommand(
      "robustness", "plan with a biased distribution, simulate with the true one");
  rob_cmd->add_option("--instance", rob.instance_path,
                      "instance JSON; otherwise one is generated");
  rob.flags.Add(rob_cmd, false);
  rob_cmd->add_option("--delta", rob.delta, "multiplicative bias bound")
      ->capture_default_str();
  rob_cmd->add_option("--episodes", rob.episodes, "paired episodes")
      ->capture_default_str();
  rob_cmd->add_option("--policy", rob.policy, "policy name")
      ->capture_default_str();
  rob_cmd->add_option("--seed", rob.seed, "root seed")->capture_default_str();
  rob_cmd->add_option("--out", rob.out_path, "report JSON output");
  rob_cmd->add_option("--threads", rob.threads,
                      "worker threads (default: $GDALLOC_THREADS or cores)");

  OracleCommand oracle;
  auto* oracle_cmd =
      app.add_subcommand("oracle", "lower bound, exact DP and Random bound");
  oracle_cmd->add_option("instance,--instance", oracle.instance_path,
                         "instance JSON")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*gen_cmd) return gen.Run(out, err);
    if (*plan_cmd) return plan.Run(out, err);
    if (*sim_cmd) return sim.Run(out, err);
    if (*cmp_cmd) return cmp.Run(out, err);
    if (*rob_cmd) return rob.Run(out, err);
    if (*oracle_cmd) return oracle.Run(out, err);
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const InvalidInstanceError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UnknownPolicyError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const SizeLimitError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}

}  // namespace gdalloc::cli
