#ifndef SZILARD_KELLY_HPP
#define SZILARD_KELLY_HPP

#include "szilard/finite.hpp"

namespace szilard {

/// A horse race with bookmaker odds o_x and Alice's wealth fractions f_x.
/// Odds need not be fair; their overround sum_x 1/o_x is recorded.
class BettingSpec {
 public:
  using Vector = Eigen::VectorXd;

  BettingSpec(ProbDist prior, Vector odds, ProbDist fractions);

  // Fair odds o_x = 1/Q^B(x) taken from an engine placement.
  static BettingSpec fair(ProbDist prior, const ProbDist& implied, ProbDist fractions);

  const ProbDist& prior() const { return prior_; }
  const Vector& odds() const { return odds_; }
  const ProbDist& fractions() const { return fractions_; }

  double overround() const { return (1.0 / odds_.array()).sum(); }
  bool is_fair(double tolerance = kSimplexTolerance) const;

  // 1/o_x as a distribution; only defined for fair odds.
  ProbDist implied_distribution() const;

 private:
  ProbDist prior_;
  Vector odds_;
  ProbDist fractions_;
};

/// ln(W_n / W_i) = sum_x N(x) ln(f_x o_x) after a race sequence of type t.
double log_wealth_ratio(const BettingSpec& spec, const SequenceType& t);

/// W_i prod_x (f_x o_x)^N(x), with full reinvestment every round.
double wealth_after(const BettingSpec& spec, const SequenceType& t, double initial);

/// Expected log-multiplier sum_x P(x) ln(f_x o_x) per round. Under fair odds
/// this is D(P||1/o) - D(P||f).
double log_growth_rate(const BettingSpec& spec);

}  // namespace szilard

#endif  // SZILARD_KELLY_HPP
