#include "szilard/finite.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>

#include "szilard/risk.hpp"

namespace szilard {

namespace {

constexpr double kBisectionTolerance = 1e-10;
constexpr int kBisectionMaxIterations = 200;
constexpr double kMonotoneSlack = 1e-12;

void require_type_alphabet(const ProbDist& d, const SequenceType& t) {
  if (d.size() != t.alphabet_size()) throw DimensionMismatch("type and distribution use different alphabets");
}

void require_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw DomainError("epsilon must lie in (0, 1]");
}

}  // namespace

SequenceType::SequenceType(std::vector<Count> counts) : counts_(std::move(counts)) {
  if (counts_.size() < 2) throw ValidationError("a type needs an alphabet of at least two outcomes");
  for (Count c : counts_) {
    if (c < 0) throw ValidationError("type counts must be non-negative");
    n_ += c;
  }
  if (n_ < 1) throw ValidationError("a type needs at least one round");
}

SequenceType SequenceType::from_sequence(std::span<const Outcome> sequence, Index alphabet_size) {
  std::vector<Count> counts(static_cast<std::size_t>(alphabet_size), 0);
  for (Outcome x : sequence) {
    if (x < 0 || x >= alphabet_size) throw DomainError("sequence contains an outcome outside the alphabet");
    ++counts[static_cast<std::size_t>(x)];
  }
  return SequenceType(std::move(counts));
}

ProbDist SequenceType::lambda() const {
  ProbDist::Vector w(alphabet_size());
  const double n = static_cast<double>(n_);
  for (Index x = 0; x < w.size(); ++x) w(x) = static_cast<double>(count(x)) / n;
  return ProbDist::from_unnormalized(w);
}

RiskBudget::RiskBudget(double epsilon_, double mu_) : epsilon(epsilon_), mu(mu_) {
  require_epsilon(epsilon);
  if (!(mu >= 0.0 && mu <= 1.0)) throw DomainError("mu must lie in [0, 1]");
}

double sequence_work(const EngineSpec& spec, const ProbDist& alice, const SequenceType& t) {
  detail::require_strategy(spec, alice);
  require_type_alphabet(alice, t);
  const ProbDist lambda = t.lambda();
  const double n = static_cast<double>(t.n());
  return spec.kT() * n * (kl_divergence(lambda, spec.bob()) - kl_divergence(lambda, alice));
}

double log_multinomial(const std::vector<Count>& counts) {
  Count n = 0;
  double denom = 0.0;
  for (Count c : counts) {
    n += c;
    denom += std::lgamma(static_cast<double>(c) + 1.0);
  }
  return std::lgamma(static_cast<double>(n) + 1.0) - denom;
}

TypeLogProbability type_log_probability(const ProbDist& prior, const SequenceType& t) {
  require_type_alphabet(prior, t);
  double log_weight = 0.0;
  for (Outcome x = 0; x < prior.size(); ++x) {
    const Count c = t.count(x);
    if (c == 0) continue;
    if (prior[x] == 0.0) throw SupportMismatch("type puts mass on an outcome the prior excludes");
    log_weight += static_cast<double>(c) * std::log(prior[x]);
  }
  const double exact = log_multinomial(t.counts()) + log_weight;
  const double bound = -static_cast<double>(t.n()) * kl_divergence(t.lambda(), prior);
  return {exact, bound};
}

ProbDist optimal_bet(const EngineSpec& spec, double mu) {
  if (!(mu >= 0.0 && mu <= 1.0)) throw DomainError("mu must lie in [0, 1]");
  return geometric_tilt(spec.prior(), spec.bob(), mu).weights;
}

double bet_constraint(const EngineSpec& spec, double mu) {
  const ProbDist bet = optimal_bet(spec, mu);
  for (Outcome x = 0; x < bet.size(); ++x) {
    if (bet[x] > 0.0 && spec.prior()[x] == 0.0) return std::numeric_limits<double>::infinity();
  }
  return kl_divergence(bet, spec.prior());
}

RiskBudget solve_mu(const EngineSpec& spec, Count n, double epsilon) {
  require_epsilon(epsilon);
  if (n < 1) throw DomainError("number of rounds must be positive");
  const double budget = std::log(1.0 / epsilon) / static_cast<double>(n);

  double f_lo = bet_constraint(spec, 0.0);
  if (f_lo <= budget) return RiskBudget(epsilon, 0.0);

  double lo = 0.0;
  double hi = 1.0;
  double f_hi = bet_constraint(spec, 1.0);
  for (int it = 0; it < kBisectionMaxIterations && hi - lo > kBisectionTolerance; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = bet_constraint(spec, mid);
    if (f_mid > f_lo + kMonotoneSlack || f_mid < f_hi - kMonotoneSlack) {
      std::ostringstream os;
      os << "risk constraint is not monotone on [" << lo << ", " << hi << "]";
      throw DomainError(os.str());
    }
    if (f_mid <= budget) {
      hi = mid;
      f_hi = f_mid;
    } else {
      lo = mid;
      f_lo = f_mid;
    }
  }
  return RiskBudget(epsilon, hi);
}

double work_bound(const EngineSpec& spec, Count n, const RiskBudget& budget) {
  if (n < 1) throw DomainError("number of rounds must be positive");
  const double rounds = static_cast<double>(n);
  if (budget.mu == 1.0) {
    if (budget.epsilon != 1.0) throw DomainError("mu = 1 is only attainable with epsilon = 1");
    return spec.kT() * rounds * kl_divergence(spec.prior(), spec.bob());
  }
  const double renyi = renyi_divergence(spec.prior(), spec.bob(), RenyiOrder(budget.mu));
  const double penalty = budget.mu / (1.0 - budget.mu) * std::log(budget.epsilon);
  return spec.kT() * (rounds * renyi + penalty);
}

TradeoffPoint tradeoff_point(const EngineSpec& spec, Count n, double epsilon) {
  const RiskBudget budget = solve_mu(spec, n, epsilon);
  ProbDist strategy = optimal_bet(spec, budget.mu);
  const double bound = work_bound(spec, n, budget);
  const double constraint = kl_divergence(strategy, spec.prior());
  return TradeoffPoint{budget, std::move(strategy), bound, constraint};
}

std::uint64_t type_count(Index alphabet_size, Count n) {
  if (alphabet_size < 1 || n < 0) return 0;
  // C(n+i, i) = C(n+i-1, i-1) (n+i) / i, exact at every step.
  __extension__ using Wide = unsigned __int128;
  Wide c = 1;
  const auto cap = static_cast<Wide>(std::numeric_limits<std::uint64_t>::max());
  for (Index i = 1; i < alphabet_size; ++i) {
    c = c * static_cast<Wide>(n + i) / static_cast<Wide>(i);
    if (c > cap) return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(c);
}

std::vector<SequenceType> enumerate_types(Index alphabet_size, Count n) {
  if (alphabet_size < 2) throw ValidationError("alphabet size must be at least 2");
  if (n < 1) throw DomainError("number of rounds must be positive");
  const std::uint64_t total = type_count(alphabet_size, n);
  if (total > kMaxEnumeratedTypes) {
    std::ostringstream os;
    os << total << " types exceed the enumeration limit of " << kMaxEnumeratedTypes;
    throw TooLarge(os.str());
  }

  std::vector<SequenceType> types;
  types.reserve(static_cast<std::size_t>(total));
  std::vector<Count> counts(static_cast<std::size_t>(alphabet_size), 0);
  const std::size_t last = counts.size() - 1;

  auto fill = [&](auto&& self, std::size_t pos, Count remaining) -> void {
    if (pos == last) {
      counts[pos] = remaining;
      types.emplace_back(counts);
      return;
    }
    for (Count c = 0; c <= remaining; ++c) {
      counts[pos] = c;
      self(self, pos + 1, remaining - c);
    }
  };
  fill(fill, 0, n);
  return types;
}

SequenceType nearest_type(const ProbDist& d, Count n) {
  if (n < 1) throw DomainError("number of rounds must be positive");
  const std::size_t k = static_cast<std::size_t>(d.size());
  std::vector<Count> counts(k);
  std::vector<double> remainder(k);
  Count assigned = 0;
  for (std::size_t x = 0; x < k; ++x) {
    const double scaled = d[static_cast<Index>(x)] * static_cast<double>(n);
    counts[x] = static_cast<Count>(std::floor(scaled));
    remainder[x] = scaled - static_cast<double>(counts[x]);
    assigned += counts[x];
  }
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  // The floors sum to at most n; hand the deficit to the largest remainders.
  for (std::size_t i = 0; assigned < n; ++i, ++assigned) ++counts[order[i % k]];
  return SequenceType(std::move(counts));
}

FrontierOracle brute_force_frontier(const EngineSpec& spec, Count n, double epsilon) {
  require_epsilon(epsilon);
  const auto types = enumerate_types(spec.alphabet_size(), n);
  const double rounds = static_cast<double>(n);

  std::optional<FrontierOracle> best;
  double best_divergence = 0.0;
  for (const SequenceType& t : types) {
    bool supported = true;
    for (Outcome x = 0; x < spec.alphabet_size(); ++x) {
      if (t.count(x) > 0 && spec.prior()[x] == 0.0) supported = false;
    }
    if (!supported) continue;
    const TypeLogProbability lp = type_log_probability(spec.prior(), t);
    const double prob = std::exp(lp.exact);
    if (prob < epsilon) continue;

    const ProbDist lambda = t.lambda();
    const double d = kl_divergence(lambda, spec.bob());
    const double tie = 1e-12 * std::max(1.0, std::abs(best_divergence));
    const bool better = !best || d > best_divergence + tie ||
                        (std::abs(d - best_divergence) <= tie && t.count(0) > best->type.count(0));
    if (better) {
      best = FrontierOracle{t, spec.kT() * rounds * d, prob, std::exp(lp.upper_bound),
                            kl_divergence(lambda, spec.prior())};
      best_divergence = d;
    }
  }
  if (!best) {
    std::ostringstream os;
    os << "no type of length " << n << " has probability >= " << epsilon;
    throw NoFeasibleType(os.str());
  }
  return *best;
}

double lattice_slack(const EngineSpec& spec, Count n) {
  return spec.kT() * static_cast<double>(spec.alphabet_size()) * std::log(static_cast<double>(n) + 1.0);
}

std::vector<WorkOutcome> work_distribution(const EngineSpec& spec, const ProbDist& alice, Count n) {
  detail::require_strategy(spec, alice);
  std::vector<WorkOutcome> out;
  for (const SequenceType& t : enumerate_types(spec.alphabet_size(), n)) {
    double prob = 0.0;
    try {
      prob = std::exp(type_log_probability(spec.prior(), t).exact);
    } catch (const SupportMismatch&) {
      prob = 0.0;
    }
    out.push_back(WorkOutcome{t, prob, sequence_work(spec, alice, t)});
  }
  return out;
}

}  // namespace szilard
