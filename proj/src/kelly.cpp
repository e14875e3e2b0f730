#include "szilard/kelly.hpp"

#include <cmath>

namespace szilard {

BettingSpec::BettingSpec(ProbDist prior, Vector odds, ProbDist fractions)
    : prior_(std::move(prior)), odds_(std::move(odds)), fractions_(std::move(fractions)) {
  if (odds_.size() != prior_.size() || fractions_.size() != prior_.size()) {
    throw DimensionMismatch("prior, odds and fractions must share an alphabet");
  }
  for (Index x = 0; x < odds_.size(); ++x) {
    if (!(odds_(x) > 0.0) || !std::isfinite(odds_(x))) throw ValidationError("odds must be positive and finite");
  }
  if (!fractions_.has_full_support()) {
    throw ZeroStrategyWeight("every outcome needs a non-zero wealth fraction");
  }
}

BettingSpec BettingSpec::fair(ProbDist prior, const ProbDist& implied, ProbDist fractions) {
  if (!implied.has_full_support()) throw ZeroWeight("implied probabilities must be positive");
  Vector odds = 1.0 / implied.weights().array();
  return BettingSpec(std::move(prior), std::move(odds), std::move(fractions));
}

bool BettingSpec::is_fair(double tolerance) const { return std::abs(overround() - 1.0) <= tolerance; }

ProbDist BettingSpec::implied_distribution() const {
  if (!is_fair(kRenormalizeTolerance)) throw DomainError("odds are not fair; 1/o is not a distribution");
  return ProbDist(Vector(1.0 / odds_.array()));
}

double log_wealth_ratio(const BettingSpec& spec, const SequenceType& t) {
  if (t.alphabet_size() != spec.prior().size()) throw DimensionMismatch("type and race use different alphabets");
  double total = 0.0;
  for (Outcome x = 0; x < t.alphabet_size(); ++x) {
    const Count c = t.count(x);
    if (c == 0) continue;
    total += static_cast<double>(c) * (std::log(spec.fractions()[x]) + std::log(spec.odds()(x)));
  }
  return total;
}

double wealth_after(const BettingSpec& spec, const SequenceType& t, double initial) {
  if (!(initial > 0.0)) throw DomainError("initial wealth must be positive");
  return initial * std::exp(log_wealth_ratio(spec, t));
}

double log_growth_rate(const BettingSpec& spec) {
  double rate = 0.0;
  for (Outcome x = 0; x < spec.prior().size(); ++x) {
    const double p = spec.prior()[x];
    if (p == 0.0) continue;
    rate += p * (std::log(spec.fractions()[x]) + std::log(spec.odds()(x)));
  }
  return rate;
}

}  // namespace szilard
