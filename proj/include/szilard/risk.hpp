#ifndef SZILARD_RISK_HPP
#define SZILARD_RISK_HPP

#include "szilard/engine.hpp"

namespace szilard {

enum class RiskAttitude { Averse, Neutral, Seeking };

/// CARA risk parameter r and its conjugate Rényi order alpha = 1/(1+r).
/// r = -1 has no order and is rejected.
class RiskProfile {
 public:
  explicit RiskProfile(double r);

  double r() const { return r_; }
  double alpha() const { return alpha_; }
  RiskAttitude attitude() const;

  // Weights of D and D_alpha in the expected work of the optimal strategy;
  // they sum to one.
  double kl_weight() const { return 1.0 / (1.0 + r_); }
  double renyi_weight() const { return r_ / (1.0 + r_); }

 private:
  double r_;
  double alpha_;
};

/// Normalized geometric mixture P^a Q^(1-a) / Z(a), with ln Z(a) retained.
struct TiltedDistribution {
  ProbDist weights;
  double log_normalizer;  // ln Z(order) = (order - 1) D_order(P||Q)
  ProbDist source_prior;
  ProbDist source_bob;
  double order;
};

/// Geometric interpolation between `prior` (order 1) and `bob` (order 0).
/// Orders outside [0, 1] extrapolate along the same exponential family.
TiltedDistribution geometric_tilt(const ProbDist& prior, const ProbDist& bob, double order);

/// u_r(w) = (1 - exp(-r w / kT)) / r, and w / kT at r = 0.
double cara_utility(double work, const RiskProfile& profile, double kT);

/// Inverse of cara_utility; throws DomainError when 1 - r u <= 0.
double cara_utility_inverse(double utility, const RiskProfile& profile, double kT);

/// Sum_x P(x) u_r(w(x)) for a fixed strategy.
double expected_utility(const EngineSpec& spec, const ProbDist& alice, const RiskProfile& profile);

/// Closed-form CARA strategy: the tilt of P toward Q^B with order 1/(1+r).
TiltedDistribution optimal_strategy(const EngineSpec& spec, const RiskProfile& profile);

/// kT D_{1/(1+r)}(P||Q^B).
double certainty_equivalent(const EngineSpec& spec, const RiskProfile& profile);

/// Fixed-strategy, i.i.d. n-round certainty equivalent: n times the
/// single-round value (CARA utilities factorize over independent rounds).
double certainty_equivalent_rounds(const EngineSpec& spec, const RiskProfile& profile, long rounds);

/// kT (D(P||Q^B)/(1+r) + r/(1+r) D_{1/(1+r)}(P||Q^B)).
double expected_work_optimal(const EngineSpec& spec, const RiskProfile& profile);

struct AuditReport {
  double ce;
  double min_work;
  bool violated;
  double r;
  double alpha;
};

/// Checks first-order stochastic dominance for the optimal strategy: a
/// violation would be a certainty equivalent below the worst-case work.
/// Only r < -1 is a genuine test; elsewhere `violated` is false by
/// construction and the fields are still filled in.
AuditReport dominance_audit(const EngineSpec& spec, const RiskProfile& profile);

/// Exhaustive simplex-grid maximizer of expected_utility over strategies with
/// coordinates in {1/grid, ..., (grid-1)/grid}. Alphabet size 2 or 3 only;
/// the first maximizer in lexicographic order wins ties.
ProbDist brute_force_optimal(const EngineSpec& spec, const RiskProfile& profile, long grid);

/// Same scan, minimizing instead. For r < -1 the closed-form tilt is the
/// stationary point of expected utility, which is a minimum there.
ProbDist brute_force_stationary_min(const EngineSpec& spec, const RiskProfile& profile, long grid);

}  // namespace szilard

#endif  // SZILARD_RISK_HPP
