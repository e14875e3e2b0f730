#ifndef SZILARD_FINITE_HPP
#define SZILARD_FINITE_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "szilard/engine.hpp"

namespace szilard {

using Count = std::int64_t;

/// Empirical distribution of a length-n outcome sequence, kept as exact
/// integer counts.
class SequenceType {
 public:
  explicit SequenceType(std::vector<Count> counts);

  static SequenceType from_sequence(std::span<const Outcome> sequence, Index alphabet_size);

  const std::vector<Count>& counts() const { return counts_; }
  Count count(Outcome x) const { return counts_[static_cast<std::size_t>(x)]; }
  Count n() const { return n_; }
  Index alphabet_size() const { return static_cast<Index>(counts_.size()); }

  // counts / n
  ProbDist lambda() const;

  friend bool operator==(const SequenceType&, const SequenceType&) = default;
  friend auto operator<=>(const SequenceType& a, const SequenceType& b) { return a.counts_ <=> b.counts_; }

 private:
  std::vector<Count> counts_;
  Count n_ = 0;
};

struct RiskBudget {
  double epsilon;  // required success probability, in (0, 1]
  double mu;       // tilt parameter, in [0, 1]

  RiskBudget(double epsilon, double mu);
};

struct TradeoffPoint {
  RiskBudget budget;
  ProbDist strategy;        // Q^{A*,mu}
  double work_bound;        // energy
  double constraint_value;  // D(strategy || P), nats
};

struct TypeLogProbability {
  double exact;        // ln P^n(type class)
  double upper_bound;  // -n D(lambda || P)
};

/// kT n (D(lambda||Q^B) - D(lambda||Q^A)): work over any sequence of type t.
double sequence_work(const EngineSpec& spec, const ProbDist& alice, const SequenceType& t);

/// Exact log-probability of the type class under i.i.d. `prior`, with the
/// exponential upper bound.
TypeLogProbability type_log_probability(const ProbDist& prior, const SequenceType& t);

/// ln of the multinomial coefficient n! / prod_x counts(x)!, via log-gamma.
double log_multinomial(const std::vector<Count>& counts);

/// Exponential-family bet P^mu (Q^B)^(1-mu) / Z(mu), mu in [0, 1].
ProbDist optimal_bet(const EngineSpec& spec, double mu);

/// D(Q^{A*,mu} || P): the risk-constraint functional along the bet family.
double bet_constraint(const EngineSpec& spec, double mu);

/// Smallest mu in [0, 1] with D(Q^{A*,mu}||P) <= ln(1/epsilon)/n.
RiskBudget solve_mu(const EngineSpec& spec, Count n, double epsilon);

/// kT (n D_mu(P||Q^B) + mu/(1-mu) ln epsilon); at mu = 1 (requires
/// epsilon = 1) the risk-neutral value kT n D(P||Q^B).
double work_bound(const EngineSpec& spec, Count n, const RiskBudget& budget);

/// solve_mu + optimal_bet + work_bound bundled into one frontier record.
TradeoffPoint tradeoff_point(const EngineSpec& spec, Count n, double epsilon);

/// Number of types of length n over k symbols, C(n+k-1, k-1), saturating at
/// the largest representable value.
std::uint64_t type_count(Index alphabet_size, Count n);

inline constexpr std::uint64_t kMaxEnumeratedTypes = 1'000'000;

/// All compositions of n into alphabet_size parts, lexicographic in counts.
std::vector<SequenceType> enumerate_types(Index alphabet_size, Count n);

/// Nearest type to d in l1 (largest-remainder rounding); ties go to the
/// lower outcome index. The l1 rounding error is at most k/(2n).
SequenceType nearest_type(const ProbDist& d, Count n);

struct FrontierOracle {
  SequenceType type;
  double work;                  // kT n D(type||Q^B), Alice betting on the type
  double success_probability;   // exact multinomial probability of the type
  double probability_bound;     // exp(-n D(type||P))
  double constraint_value;      // D(type||P)
};

/// Exhaustive scan over types with exact probability >= epsilon, maximizing
/// D(lambda||Q^B); ties go to the larger first-coordinate count.
FrontierOracle brute_force_frontier(const EngineSpec& spec, Count n, double epsilon);

/// Work bonus allowed to the lattice-restricted oracle when compared with
/// the continuous bound: kT k ln(n+1), the polynomial factor separating
/// type-class probabilities from their exponential bound.
double lattice_slack(const EngineSpec& spec, Count n);

struct WorkOutcome {
  SequenceType type;
  double probability;
  double work;
};

/// Full distribution of realized n-round work for a fixed strategy, one
/// entry per type.
std::vector<WorkOutcome> work_distribution(const EngineSpec& spec, const ProbDist& alice, Count n);

}  // namespace szilard

#endif  // SZILARD_FINITE_HPP
