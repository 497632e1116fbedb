#include <cstdio>
#include <string>

#include "gdalloc/experiments.h"
#include "json.hpp"

namespace gdalloc {
namespace {

using nlohmann::ordered_json;

std::string Fixed(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.9f", value);
  return buffer;
}

std::string CsvField(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

}  // namespace

void WriteReportJson(std::ostream& out, const EvalReport& report) {
  ordered_json doc;
  doc["seed"] = report.seed;
  doc["episodes_per_instance"] = report.episodes_per_instance;
  ordered_json policies = ordered_json::array();
  for (const PolicySummary& p : report.policies) {
    policies.push_back({{"policy", p.policy},
                        {"mean_consumption", p.mean_consumption},
                        {"mean_t_star", p.mean_t_star},
                        {"mean_ratio", p.mean_ratio},
                        {"min_ratio", p.min_ratio},
                        {"max_ratio", p.max_ratio},
                        {"worst_sequence_ratio", p.worst_sequence_ratio},
                        {"failed_episodes", p.failed}});
  }
  doc["policies"] = std::move(policies);
  ordered_json instances = ordered_json::array();
  for (const InstanceSummary& inst : report.instances) {
    ordered_json rows = ordered_json::array();
    for (const PolicyInstanceResult& r : inst.policies) {
      rows.push_back({{"policy", r.policy},
                      {"mean_consumption", r.mean_consumption},
                      {"mean_t_star", r.mean_t_star},
                      {"ratio", r.ratio},
                      {"ratio_standard_error", r.ratio_standard_error},
                      {"worst_ratio", r.worst_ratio},
                      {"completed", r.completed},
                      {"failed", r.failed}});
    }
    instances.push_back({{"id", inst.id},
                         {"setting", inst.setting},
                         {"z_hat", inst.z_hat},
                         {"z_flow", inst.z_flow},
                         {"policies", std::move(rows)}});
  }
  doc["instances"] = std::move(instances);
  out << doc.dump(2) << "\n";
}

void WriteReportCsv(std::ostream& out, const EvalReport& report) {
  out << "instance_id,setting,policy,z_hat,z_flow,mean_consumption,"
         "mean_t_star,competitive_ratio,worst_ratio,completed,failed\n";
  for (const InstanceSummary& inst : report.instances) {
    for (const PolicyInstanceResult& r : inst.policies) {
      out << CsvField(inst.id) << ',' << CsvField(inst.setting) << ','
          << r.policy << ',' << inst.z_hat << ',' << Fixed(inst.z_flow) << ','
          << Fixed(r.mean_consumption) << ',' << Fixed(r.mean_t_star) << ','
          << Fixed(r.ratio) << ',' << Fixed(r.worst_ratio) << ','
          << r.completed << ',' << r.failed << '\n';
    }
  }
}

void WriteRobustnessJson(std::ostream& out, const RobustnessReport& report) {
  ordered_json doc;
  doc["delta_requested"] = report.delta_requested;
  doc["delta"] = report.delta;
  doc["capped"] = report.capped;
  doc["delta_effective"] = report.delta_effective;
  doc["mean_true_plan"] = report.mean_true_plan;
  doc["mean_biased_plan"] = report.mean_biased_plan;
  doc["ratio"] = report.ratio;
  doc["ratio_standard_error"] = report.ratio_standard_error;
  doc["bound"] = report.bound;
  doc["episodes"] = report.episodes;
  doc["failed"] = report.failed;
  doc["biased_probs"] = report.biased_probs;
  out << doc.dump(2) << "\n";
}

}  // namespace gdalloc
