#ifndef SZILARD_MONTECARLO_HPP
#define SZILARD_MONTECARLO_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <vector>

#include "szilard/kelly.hpp"
#include "szilard/risk.hpp"

namespace szilard {

// Random streams are std::mt19937_64, whose output sequence is fixed by the
// C++ standard. Trial t of a run with seed s draws from a generator seeded
// with substream_seed(s, t); uniforms are the top 53 bits scaled by 2^-53.
// Library distributions (std::uniform_real_distribution etc.) are avoided
// because their outputs are implementation-defined.
using Rng = std::mt19937_64;

/// SplitMix64 finalizer applied to seed + (trial + 1) * golden gamma.
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t trial);

/// Uniform double in [0, 1).
double uniform01(Rng& rng);

/// Inverse-CDF sampler over a finite alphabet.
class OutcomeSampler {
 public:
  explicit OutcomeSampler(const ProbDist& d);
  Outcome operator()(Rng& rng) const;

 private:
  std::vector<double> cdf_;
};

struct SimConfig {
  std::uint64_t seed;
  Count rounds;
  Count trials;
  EngineSpec spec;
  ProbDist strategy;
  // When set, success_rate counts trials whose realized type equals it.
  std::optional<SequenceType> target;
};

struct Estimate {
  double mean;
  double standard_error;

  friend bool operator==(const Estimate&, const Estimate&) = default;
};

struct SimReport {
  Count rounds;
  Count trials;
  double r;
  Estimate work;      // per-trial work, energy units
  Estimate utility;   // per-trial CARA utility
  Estimate certainty_equivalent;  // u_r^{-1}(mean utility); SE by the delta method
  std::map<std::vector<Count>, Count> type_histogram;  // realized type -> trials
  Count success_count;
  double success_rate;

  friend bool operator==(const SimReport&, const SimReport&) = default;
};

/// Runs `trials` independent n-round games. Per-trial work is the sum over
/// rounds of work_per_outcome; utility and certainty equivalent are taken on
/// the per-trial work. Results do not depend on `threads` (0 = hardware).
SimReport simulate(const SimConfig& config, const RiskProfile& profile, unsigned threads = 0);

/// Draws one i.i.d. sequence of `rounds` outcomes from `d`.
std::vector<Outcome> sample_sequence(const ProbDist& d, Count rounds, Rng& rng);

struct GrowthEstimate {
  Estimate log_growth_per_round;  // (1/n) ln(W_n / W_i) across trials
  Count rounds;
  Count trials;

  friend bool operator==(const GrowthEstimate&, const GrowthEstimate&) = default;
};

/// Monte Carlo Kelly wealth trajectories under the bettor's prior.
GrowthEstimate simulate_kelly(const BettingSpec& spec, Count rounds, Count trials, std::uint64_t seed,
                              unsigned threads = 0);

}  // namespace szilard

#endif  // SZILARD_MONTECARLO_HPP
