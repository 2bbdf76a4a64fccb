#include "invtest/report.hpp"

#include <iomanip>
#include <ostream>

namespace invtest {
namespace {

nlohmann::ordered_json optional_number(const std::optional<double>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

}  // namespace

nlohmann::ordered_json report_to_json(const TestReport& r) {
  nlohmann::ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["procedure"] = to_string(r.procedure);
  j["group"] = r.group;

  nlohmann::ordered_json cfg;
  cfg["n"] = r.n;
  cfg["d"] = r.d;
  if (r.n1) cfg["n1"] = *r.n1;
  if (r.n2) cfg["n2"] = *r.n2;
  cfg["alpha"] = r.alpha;
  if (r.directions_per_replicate) cfg["directions"] = *r.directions_per_replicate;
  if (r.replicates) cfg[r.procedure == Procedure::kB ? "bootstrap" : "replicates"] = *r.replicates;
  if (r.scheme) cfg["bootstrap_scheme"] = to_string(*r.scheme);
  nlohmann::ordered_json seeds;
  for (const auto& [name, value] : r.seeds) seeds[name] = value;
  cfg["seeds"] = std::move(seeds);
  j["config"] = std::move(cfg);

  j["statistic"] = r.statistic;
  j["critical_value"] = r.critical_value;
  j["p_value"] = optional_number(r.p_value);
  j["overall_reject"] = r.overall_reject;

  auto gens = nlohmann::ordered_json::array();
  for (const auto& g : r.per_generator) {
    nlohmann::ordered_json e;
    e["label"] = g.label;
    e["directions"] = g.directions;
    e["statistic"] = g.statistic;
    e["threshold"] = g.threshold;
    e["p_value"] = optional_number(g.p_value);
    e["reject"] = g.reject;
    gens.push_back(std::move(e));
  }
  j["per_generator"] = std::move(gens);

  // Per-generator directions are listed in full only for procedure A, where
  // there are k of them; the l directions of B are available as CSV.
  if (r.procedure == Procedure::kA) {
    auto dirs = nlohmann::ordered_json::array();
    for (const auto& h : r.directions) dirs.push_back(std::vector<double>(h.coords.begin(), h.coords.end()));
    j["directions"] = std::move(dirs);
  }
  return j;
}

void write_report_table(std::ostream& os, const TestReport& r) {
  const auto flags = os.flags();
  os << "procedure " << to_string(r.procedure) << ", group " << r.group << ", n=" << r.n << ", d=" << r.d;
  if (r.n1 && r.n2) os << " (split " << *r.n1 << "/" << *r.n2 << ")";
  os << ", alpha=" << r.alpha << '\n';
  os << std::left << std::setw(28) << "generator" << std::right << std::setw(12) << "statistic" << std::setw(12)
     << "threshold" << std::setw(12) << "p-value" << std::setw(9) << "reject" << '\n';
  os << std::fixed << std::setprecision(5);
  for (const auto& g : r.per_generator) {
    os << std::left << std::setw(28) << g.label << std::right << std::setw(12) << g.statistic << std::setw(12)
       << g.threshold << std::setw(12);
    if (g.p_value) os << *g.p_value;
    else os << "-";
    os << std::setw(9) << (g.reject ? "yes" : "no") << '\n';
  }
  os << "statistic " << r.statistic << ", critical value " << r.critical_value;
  if (r.p_value) {
    os << ", p-value " << *r.p_value;
    if (*r.p_value == 0.0 && r.replicates) os << " (< " << 1.0 / *r.replicates << ")";
  }
  os << "\nverdict: " << (r.overall_reject ? "REJECT invariance" : "do not reject invariance") << '\n';
  os.flags(flags);
}

}  // namespace invtest
