#include "szilard/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace szilard {

namespace {

// Neumaier compensated summation.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

Estimate estimate(const std::vector<double>& samples) {
  const auto n = static_cast<double>(samples.size());
  CompensatedSum s;
  for (double v : samples) s.add(v);
  const double mean = s.value() / n;
  CompensatedSum ss;
  for (double v : samples) ss.add((v - mean) * (v - mean));
  const double var = samples.size() > 1 ? ss.value() / (n - 1.0) : 0.0;
  return {mean, std::sqrt(var / n)};
}

unsigned resolve_threads(unsigned requested, Count trials) {
  unsigned t = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
  return static_cast<unsigned>(std::min<Count>(t, std::max<Count>(1, trials)));
}

// Runs body(begin, end, chunk) over contiguous trial ranges, one per thread.
template <typename Body>
void for_trial_chunks(Count trials, unsigned threads, Body&& body) {
  const Count per = (trials + threads - 1) / threads;
  std::vector<std::thread> pool;
  for (unsigned c = 0; c < threads; ++c) {
    const Count begin = std::min<Count>(trials, c * per);
    const Count end = std::min<Count>(trials, begin + per);
    if (c + 1 == threads) {
      body(begin, end, c);
    } else {
      pool.emplace_back([&body, begin, end, c] { body(begin, end, c); });
    }
  }
  for (auto& t : pool) t.join();
}

void require_run_shape(Count rounds, Count trials) {
  if (rounds < 1) throw DomainError("rounds must be positive");
  if (trials < 1) throw DomainError("trials must be positive");
}

}  // namespace

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t trial) {
  std::uint64_t z = seed + (trial + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

OutcomeSampler::OutcomeSampler(const ProbDist& d) : cdf_(static_cast<std::size_t>(d.size())) {
  double acc = 0.0;
  for (Index x = 0; x < d.size(); ++x) {
    acc += d[x];
    cdf_[static_cast<std::size_t>(x)] = acc;
  }
  cdf_.back() = 1.0;
}

Outcome OutcomeSampler::operator()(Rng& rng) const {
  const double u = uniform01(rng);
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  // Zero-probability outcomes share a cdf value with their predecessor and
  // are never selected by upper_bound.
  return static_cast<Outcome>(std::min<std::ptrdiff_t>(it - cdf_.begin(), static_cast<std::ptrdiff_t>(cdf_.size()) - 1));
}

std::vector<Outcome> sample_sequence(const ProbDist& d, Count rounds, Rng& rng) {
  const OutcomeSampler sampler(d);
  std::vector<Outcome> seq(static_cast<std::size_t>(rounds));
  for (auto& x : seq) x = sampler(rng);
  return seq;
}

SimReport simulate(const SimConfig& config, const RiskProfile& profile, unsigned threads) {
  require_run_shape(config.rounds, config.trials);
  const EngineSpec& spec = config.spec;
  detail::require_strategy(spec, config.strategy);
  if (config.target) {
    if (config.target->alphabet_size() != spec.alphabet_size() || config.target->n() != config.rounds) {
      throw DimensionMismatch("target type does not match the alphabet and round count");
    }
  }

  std::vector<double> per_outcome(static_cast<std::size_t>(spec.alphabet_size()));
  for (Outcome x = 0; x < spec.alphabet_size(); ++x) {
    per_outcome[static_cast<std::size_t>(x)] = work_per_outcome(spec, config.strategy, x);
  }
  const OutcomeSampler sampler(spec.prior());

  const auto trials = static_cast<std::size_t>(config.trials);
  std::vector<double> work(trials);
  std::vector<double> utility(trials);
  const unsigned nthreads = resolve_threads(threads, config.trials);
  std::vector<std::map<std::vector<Count>, Count>> histograms(nthreads);
  std::vector<Count> successes(nthreads, 0);

  for_trial_chunks(config.trials, nthreads, [&](Count begin, Count end, unsigned chunk) {
    std::vector<Count> counts(per_outcome.size());
    for (Count t = begin; t < end; ++t) {
      Rng rng(substream_seed(config.seed, static_cast<std::uint64_t>(t)));
      std::fill(counts.begin(), counts.end(), 0);
      double w = 0.0;
      for (Count i = 0; i < config.rounds; ++i) {
        const auto x = static_cast<std::size_t>(sampler(rng));
        w += per_outcome[x];
        ++counts[x];
      }
      const auto idx = static_cast<std::size_t>(t);
      work[idx] = w;
      utility[idx] = cara_utility(w, profile, spec.kT());
      ++histograms[chunk][counts];
      if (config.target && counts == config.target->counts()) ++successes[chunk];
    }
  });

  SimReport report{};
  report.rounds = config.rounds;
  report.trials = config.trials;
  report.r = profile.r();
  report.work = estimate(work);
  report.utility = estimate(utility);
  const double ce = cara_utility_inverse(report.utility.mean, profile, spec.kT());
  const double slope = spec.kT() / (1.0 - profile.r() * report.utility.mean);
  report.certainty_equivalent = {ce, report.utility.standard_error * slope};
  for (const auto& h : histograms) {
    for (const auto& [type, n] : h) report.type_histogram[type] += n;
  }
  report.success_count = 0;
  for (Count s : successes) report.success_count += s;
  report.success_rate = static_cast<double>(report.success_count) / static_cast<double>(config.trials);
  return report;
}

GrowthEstimate simulate_kelly(const BettingSpec& spec, Count rounds, Count trials, std::uint64_t seed,
                              unsigned threads) {
  require_run_shape(rounds, trials);
  const Index k = spec.prior().size();
  std::vector<double> log_multiplier(static_cast<std::size_t>(k));
  for (Outcome x = 0; x < k; ++x) {
    log_multiplier[static_cast<std::size_t>(x)] = std::log(spec.fractions()[x]) + std::log(spec.odds()(x));
  }
  const OutcomeSampler sampler(spec.prior());
  std::vector<double> growth(static_cast<std::size_t>(trials));
  const unsigned nthreads = resolve_threads(threads, trials);

  for_trial_chunks(trials, nthreads, [&](Count begin, Count end, unsigned) {
    for (Count t = begin; t < end; ++t) {
      Rng rng(substream_seed(seed, static_cast<std::uint64_t>(t)));
      CompensatedSum log_wealth;
      for (Count i = 0; i < rounds; ++i) log_wealth.add(log_multiplier[static_cast<std::size_t>(sampler(rng))]);
      growth[static_cast<std::size_t>(t)] = log_wealth.value() / static_cast<double>(rounds);
    }
  });
  return GrowthEstimate{estimate(growth), rounds, trials};
}

}  // namespace szilard
