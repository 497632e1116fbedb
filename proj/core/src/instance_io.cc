#include <fstream>
#include <sstream>
#include <string>

#include "gdalloc/instance.h"
#include "json.hpp"

namespace gdalloc {
namespace {

using nlohmann::json;

int LineOfOffset(std::string_view text, size_t offset) {
  offset = std::min(offset, text.size());
  int line = 1;
  for (size_t k = 0; k < offset; ++k) {
    if (text[k] == '\n') ++line;
  }
  return line;
}

const json& RequireField(const json& doc, const char* name) {
  auto it = doc.find(name);
  if (it == doc.end()) {
    throw ParseError(std::string("missing field \"") + name + "\"");
  }
  return *it;
}

int64_t AsInteger(const json& value, const std::string& where) {
  if (!value.is_number_integer()) {
    throw ParseError("field \"" + where + "\": expected integer, got " +
                     std::string(value.type_name()));
  }
  return value.get<int64_t>();
}

double AsNumber(const json& value, const std::string& where) {
  if (!value.is_number()) {
    throw ParseError("field \"" + where + "\": expected number, got " +
                     std::string(value.type_name()));
  }
  return value.get<double>();
}

const json& AsArray(const json& value, const std::string& where) {
  if (!value.is_array()) {
    throw ParseError("field \"" + where + "\": expected array, got " +
                     std::string(value.type_name()));
  }
  return value;
}

std::vector<std::string> ReadLabelList(const json& labels, const char* key) {
  std::vector<std::string> out;
  auto it = labels.find(key);
  if (it == labels.end()) return out;
  const std::string where = std::string("labels.") + key;
  for (const json& v : AsArray(*it, where)) {
    if (!v.is_string()) {
      throw ParseError("field \"" + where + "\": expected strings");
    }
    out.push_back(v.get<std::string>());
  }
  return out;
}

}  // namespace

Instance LoadInstance(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    throw ParseError("line " +
                     std::to_string(LineOfOffset(json_text, e.byte)) + ": " +
                     e.what());
  }
  if (!doc.is_object()) throw ParseError("top level must be a JSON object");

  const int64_t m = AsInteger(RequireField(doc, "m"), "m");
  const int64_t n = AsInteger(RequireField(doc, "n"), "n");

  const json& demands_json = AsArray(RequireField(doc, "demands"), "demands");
  if (static_cast<int64_t>(demands_json.size()) != m) {
    throw ParseError("field \"demands\": length " +
                     std::to_string(demands_json.size()) + " != m = " +
                     std::to_string(m));
  }
  std::vector<int64_t> demands;
  demands.reserve(demands_json.size());
  for (size_t i = 0; i < demands_json.size(); ++i) {
    demands.push_back(
        AsInteger(demands_json[i], "demands[" + std::to_string(i) + "]"));
  }

  const json& probs_json = AsArray(RequireField(doc, "probs"), "probs");
  if (static_cast<int64_t>(probs_json.size()) != n) {
    throw ParseError("field \"probs\": length " +
                     std::to_string(probs_json.size()) + " != n = " +
                     std::to_string(n));
  }
  std::vector<double> probs;
  probs.reserve(probs_json.size());
  for (size_t j = 0; j < probs_json.size(); ++j) {
    probs.push_back(AsNumber(probs_json[j], "probs[" + std::to_string(j) + "]"));
  }

  const json& edges_json = AsArray(RequireField(doc, "edges"), "edges");
  std::vector<Edge> edges;
  edges.reserve(edges_json.size());
  for (size_t k = 0; k < edges_json.size(); ++k) {
    const std::string where = "edges[" + std::to_string(k) + "]";
    const json& pair = AsArray(edges_json[k], where);
    if (pair.size() != 2) {
      throw ParseError("field \"" + where + "\": expected [campaign, type]");
    }
    edges.push_back({static_cast<CampaignId>(AsInteger(pair[0], where)),
                     static_cast<UserTypeId>(AsInteger(pair[1], where))});
  }

  Labels labels;
  if (auto it = doc.find("labels"); it != doc.end() && !it->is_null()) {
    if (!it->is_object()) {
      throw ParseError("field \"labels\": expected object");
    }
    labels.campaigns = ReadLabelList(*it, "campaigns");
    labels.types = ReadLabelList(*it, "types");
  }

  Instance instance(std::move(demands), std::move(probs), std::move(edges),
                    std::move(labels));
  ValidationReport report = Validate(instance);
  if (!report.ok()) throw InvalidInstanceError(std::move(report));
  return instance;
}

std::string SaveInstance(const Instance& instance) {
  json doc = json::object();
  doc["m"] = instance.num_campaigns();
  doc["n"] = instance.num_types();
  doc["demands"] = std::vector<int64_t>(instance.demands().begin(),
                                        instance.demands().end());
  doc["probs"] =
      std::vector<double>(instance.probs().begin(), instance.probs().end());
  json edges = json::array();
  for (const Edge& e : instance.edges()) edges.push_back({e.campaign, e.type});
  doc["edges"] = std::move(edges);
  if (!instance.labels().empty()) {
    doc["labels"] = {{"campaigns", instance.labels().campaigns},
                     {"types", instance.labels().types}};
  }
  return doc.dump() + "\n";
}

Instance ReadInstanceFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("failed reading " + path);
  return LoadInstance(buffer.str());
}

void WriteInstanceFile(const std::string& path, const Instance& instance) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << SaveInstance(instance);
  if (!out) throw IoError("failed writing " + path);
}

}  // namespace gdalloc
