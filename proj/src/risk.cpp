#include "szilard/risk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <vector>

namespace szilard {

RiskProfile::RiskProfile(double r) : r_(r) {
  if (!std::isfinite(r)) throw DomainError("risk parameter r must be finite");
  if (r == -1.0) throw DomainError("risk parameter r = -1 has no Renyi order (alpha = 1/(1+r))");
  alpha_ = 1.0 / (1.0 + r);
}

RiskAttitude RiskProfile::attitude() const {
  if (r_ > 0.0) return RiskAttitude::Averse;
  if (r_ < 0.0) return RiskAttitude::Seeking;
  return RiskAttitude::Neutral;
}

TiltedDistribution geometric_tilt(const ProbDist& prior, const ProbDist& bob, double order) {
  detail::require_same_alphabet(prior, bob);
  if (!std::isfinite(order)) throw DomainError("tilt order must be finite");
  const double neg_inf = -std::numeric_limits<double>::infinity();
  const Index k = prior.size();

  // log of P(x)^a Q(x)^(1-a), with 0^0 = 1 and 0^a = 0 for a > 0.
  auto log_power = [&](double p, double a) {
    if (a == 0.0) return 0.0;
    if (p == 0.0) {
      if (a < 0.0) throw Degenerate("tilt with negative exponent on a zero-probability outcome");
      return neg_inf;
    }
    return a * std::log(p);
  };

  std::vector<double> logw(static_cast<std::size_t>(k));
  for (Index x = 0; x < k; ++x) {
    logw[static_cast<std::size_t>(x)] = log_power(prior[x], order) + log_power(bob[x], 1.0 - order);
  }
  const double log_z = log_sum_exp(logw);
  if (log_z == neg_inf) throw Degenerate("tilt has empty support");

  ProbDist::Vector w(k);
  for (Index x = 0; x < k; ++x) w(x) = std::exp(logw[static_cast<std::size_t>(x)] - log_z);
  return TiltedDistribution{ProbDist::from_unnormalized(w), log_z, prior, bob, order};
}

double cara_utility(double work, const RiskProfile& profile, double kT) {
  const double r = profile.r();
  if (r == 0.0) return work / kT;
  return -std::expm1(-r * work / kT) / r;
}

double cara_utility_inverse(double utility, const RiskProfile& profile, double kT) {
  const double r = profile.r();
  if (r == 0.0) return utility * kT;
  if (!(1.0 - r * utility > 0.0)) {
    std::ostringstream os;
    os << "utility " << utility << " lies outside the range of u_r for r = " << r;
    throw DomainError(os.str());
  }
  return -kT * std::log1p(-r * utility) / r;
}

double expected_utility(const EngineSpec& spec, const ProbDist& alice, const RiskProfile& profile) {
  detail::require_strategy(spec, alice);
  double total = 0.0;
  for (Outcome x = 0; x < spec.alphabet_size(); ++x) {
    if (spec.prior()[x] == 0.0) continue;
    total += spec.prior()[x] * cara_utility(work_per_outcome(spec, alice, x), profile, spec.kT());
  }
  return total;
}

TiltedDistribution optimal_strategy(const EngineSpec& spec, const RiskProfile& profile) {
  return geometric_tilt(spec.prior(), spec.bob(), profile.alpha());
}

double certainty_equivalent(const EngineSpec& spec, const RiskProfile& profile) {
  return spec.kT() * renyi_divergence(spec.prior(), spec.bob(), RenyiOrder(profile.alpha()));
}

double certainty_equivalent_rounds(const EngineSpec& spec, const RiskProfile& profile, long rounds) {
  if (rounds < 1) throw DomainError("number of rounds must be positive");
  return static_cast<double>(rounds) * certainty_equivalent(spec, profile);
}

double expected_work_optimal(const EngineSpec& spec, const RiskProfile& profile) {
  const double kl = kl_divergence(spec.prior(), spec.bob());
  if (profile.r() == 0.0) return spec.kT() * kl;
  const double renyi = renyi_divergence(spec.prior(), spec.bob(), RenyiOrder(profile.alpha()));
  return spec.kT() * (profile.kl_weight() * kl + profile.renyi_weight() * renyi);
}

AuditReport dominance_audit(const EngineSpec& spec, const RiskProfile& profile) {
  // Per-outcome work from the log-domain tilt, kT (alpha ln(P/Q^B) - ln Z),
  // so strategy weights that underflow in double still give finite work.
  const TiltedDistribution tilt = optimal_strategy(spec, profile);
  const double ce = certainty_equivalent(spec, profile);
  double min_work = std::numeric_limits<double>::infinity();
  for (Outcome x = 0; x < spec.alphabet_size(); ++x) {
    const double log_ratio = std::log(spec.prior()[x]) - std::log(spec.bob()[x]);
    min_work = std::min(min_work, spec.kT() * (tilt.order * log_ratio - tilt.log_normalizer));
  }
  const bool tested = profile.r() < -1.0;
  return AuditReport{ce, min_work, tested && ce < min_work, profile.r(), profile.alpha()};
}

namespace {

// Visits every interior grid strategy in lexicographic order of counts.
template <typename Visit>
void for_each_grid_strategy(Index k, long grid, Visit&& visit) {
  ProbDist::Vector w(k);
  const double step = 1.0 / static_cast<double>(grid);
  if (k == 2) {
    for (long i = 1; i < grid; ++i) {
      w << i * step, (grid - i) * step;
      visit(ProbDist(w));
    }
    return;
  }
  for (long i = 1; i < grid - 1; ++i) {
    for (long j = 1; i + j < grid; ++j) {
      w << i * step, j * step, (grid - i - j) * step;
      visit(ProbDist(w));
    }
  }
}

ProbDist grid_extremum(const EngineSpec& spec, const RiskProfile& profile, long grid, bool maximize) {
  const Index k = spec.alphabet_size();
  if (k != 2 && k != 3) throw UnsupportedAlphabet("grid search supports alphabets of size 2 or 3");
  if (grid < 100) throw DomainError("grid resolution must be at least 100");

  std::optional<ProbDist> best;
  double best_value = 0.0;
  for_each_grid_strategy(k, grid, [&](const ProbDist& q) {
    const double v = expected_utility(spec, q, profile);
    if (!best || (maximize ? v > best_value : v < best_value)) {
      best = q;
      best_value = v;
    }
  });
  return *best;
}

}  // namespace

ProbDist brute_force_optimal(const EngineSpec& spec, const RiskProfile& profile, long grid) {
  return grid_extremum(spec, profile, grid, true);
}

ProbDist brute_force_stationary_min(const EngineSpec& spec, const RiskProfile& profile, long grid) {
  return grid_extremum(spec, profile, grid, false);
}

}  // namespace szilard
