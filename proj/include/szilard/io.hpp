#ifndef SZILARD_IO_HPP
#define SZILARD_IO_HPP

#include <string>

#include "json.hpp"

#include "szilard/montecarlo.hpp"

namespace szilard::io {

using Json = nlohmann::json;

// Every JSON decoding failure (wrong shape, wrong type, violated invariant)
// surfaces as a ValidationError.

Json to_json(const ProbDist& d);
ProbDist prob_dist_from_json(const Json& j);

// {"prior": [...], "bob": [...], "kT": number}; kT defaults to 1.
Json to_json(const EngineSpec& spec);
EngineSpec engine_spec_from_json(const Json& j);

// {"ce", "min_work", "violated", "r", "alpha"}
Json to_json(const AuditReport& report);

// {"seed", "rounds", "trials", "spec", "strategy"?, "target"?}. A missing
// strategy is returned as std::nullopt so callers can substitute a default.
struct SimConfigDocument {
  std::uint64_t seed;
  Count rounds;
  Count trials;
  EngineSpec spec;
  std::optional<ProbDist> strategy;
  std::optional<SequenceType> target;
};
SimConfigDocument sim_config_from_json(const Json& j);

// Histogram rows are [counts..., frequency].
Json to_json(const SimReport& report);

Json read_json_file(const std::string& path);

}  // namespace szilard::io

#endif  // SZILARD_IO_HPP
