#include "szilard/io.hpp"

#include <fstream>
#include <sstream>

namespace szilard::io {

namespace {

template <typename F>
auto decoding(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("invalid ") + what + ": " + e.what());
  }
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) throw ValidationError("expected a JSON object");
  auto it = j.find(key);
  if (it == j.end()) throw ValidationError(std::string("missing field \"") + key + "\"");
  return *it;
}

}  // namespace

Json to_json(const ProbDist& d) { return Json(d.to_vector()); }

ProbDist prob_dist_from_json(const Json& j) {
  if (!j.is_array()) throw ValidationError("probability vector must be a JSON array");
  return decoding("probability vector", [&] {
    ProbDist::Vector w(static_cast<Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (!j[i].is_number()) throw ValidationError("probability vector entries must be numbers");
      w(static_cast<Index>(i)) = j[i].get<double>();
    }
    return ProbDist(w);
  });
}

Json to_json(const EngineSpec& spec) {
  return Json{{"prior", to_json(spec.prior())}, {"bob", to_json(spec.bob())}, {"kT", spec.kT()}};
}

EngineSpec engine_spec_from_json(const Json& j) {
  return decoding("engine spec", [&] {
    ProbDist prior = prob_dist_from_json(field(j, "prior"));
    ProbDist bob = prob_dist_from_json(field(j, "bob"));
    double kT = 1.0;
    if (j.contains("kT")) kT = j.at("kT").get<double>();
    return EngineSpec(std::move(prior), std::move(bob), kT);
  });
}

Json to_json(const AuditReport& report) {
  return Json{{"ce", report.ce},
              {"min_work", report.min_work},
              {"violated", report.violated},
              {"r", report.r},
              {"alpha", report.alpha}};
}

SimConfigDocument sim_config_from_json(const Json& j) {
  return decoding("simulation config", [&] {
    if (!field(j, "seed").is_number_unsigned()) throw ValidationError("seed must be a non-negative integer");
    SimConfigDocument doc{field(j, "seed").get<std::uint64_t>(),
                          field(j, "rounds").get<Count>(),
                          field(j, "trials").get<Count>(),
                          engine_spec_from_json(field(j, "spec")),
                          std::nullopt,
                          std::nullopt};
    if (doc.rounds < 1 || doc.trials < 1) throw ValidationError("rounds and trials must be positive");
    if (j.contains("strategy")) doc.strategy = prob_dist_from_json(j.at("strategy"));
    if (j.contains("target")) doc.target = SequenceType(j.at("target").get<std::vector<Count>>());
    return doc;
  });
}

Json to_json(const SimReport& report) {
  auto estimate = [](const Estimate& e) { return Json{{"mean", e.mean}, {"standard_error", e.standard_error}}; };
  Json histogram = Json::array();
  for (const auto& [counts, n] : report.type_histogram) {
    Json row = Json::array();
    for (Count c : counts) row.push_back(c);
    row.push_back(static_cast<double>(n) / static_cast<double>(report.trials));
    histogram.push_back(std::move(row));
  }
  return Json{{"rounds", report.rounds},
              {"trials", report.trials},
              {"r", report.r},
              {"mean_work", estimate(report.work)},
              {"mean_utility", estimate(report.utility)},
              {"empirical_ce", estimate(report.certainty_equivalent)},
              {"type_histogram", std::move(histogram)},
              {"success_count", report.success_count},
              {"success_rate", report.success_rate}};
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

}  // namespace szilard::io
