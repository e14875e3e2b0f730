#ifndef SZILARD_ENGINE_HPP
#define SZILARD_ENGINE_HPP

#include <cmath>
#include <vector>

#include "szilard/prob.hpp"

namespace szilard {

using Outcome = Index;

/// One game instance: the referee's prior P, Bob's placement Q^B and the
/// thermal energy scale kT. Bob must leave both sides of the partition open,
/// so Q^B has full support.
template <typename Scalar>
class BasicEngineSpec {
 public:
  BasicEngineSpec(BasicProbDist<Scalar> prior, BasicProbDist<Scalar> bob, Scalar kT = Scalar(1))
      : prior_(std::move(prior)), bob_(std::move(bob)), kT_(kT) {
    detail::require_same_alphabet(prior_, bob_);
    if (!bob_.has_full_support()) {
      throw ZeroWeight("Bob's placement must give every outcome positive weight");
    }
    using std::isfinite;
    if (!(kT_ > Scalar(0)) || !isfinite(kT_)) throw ValidationError("kT must be positive and finite");
  }

  const BasicProbDist<Scalar>& prior() const { return prior_; }
  const BasicProbDist<Scalar>& bob() const { return bob_; }
  Scalar kT() const { return kT_; }
  Index alphabet_size() const { return prior_.size(); }

  BasicEngineSpec with_kT(Scalar kT) const { return BasicEngineSpec(prior_, bob_, kT); }

 private:
  BasicProbDist<Scalar> prior_;
  BasicProbDist<Scalar> bob_;
  Scalar kT_;
};

using EngineSpec = BasicEngineSpec<double>;

/// Energy landscape whose Gibbs state at temperature kT is a given
/// distribution. Energies are in energy units; the additive constant is a
/// gauge choice, carried through log_partition = ln sum_x exp(-E(x)/kT).
template <typename Scalar>
class BasicEnergyLevels {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  BasicEnergyLevels(Vector energies, Scalar kT) : energies_(std::move(energies)), kT_(kT) {
    if (energies_.size() < 2) throw ValidationError("energy landscape needs at least two levels");
    std::vector<Scalar> terms(static_cast<std::size_t>(energies_.size()));
    for (Index x = 0; x < energies_.size(); ++x) terms[static_cast<std::size_t>(x)] = -energies_(x) / kT_;
    log_partition_ = log_sum_exp(terms);
  }

  const Vector& energies() const { return energies_; }
  Scalar energy(Outcome x) const { return energies_(x); }
  Scalar kT() const { return kT_; }
  Scalar log_partition() const { return log_partition_; }
  Scalar partition_function() const {
    using std::exp;
    return exp(log_partition_);
  }

  BasicProbDist<Scalar> gibbs_distribution() const {
    using std::exp;
    Vector w(energies_.size());
    for (Index x = 0; x < w.size(); ++x) w(x) = exp(-energies_(x) / kT_ - log_partition_);
    return BasicProbDist<Scalar>::from_unnormalized(w);
  }

  // Same physics, different additive constant.
  BasicEnergyLevels shifted(Scalar offset) const {
    return BasicEnergyLevels(Vector(energies_.array() + offset), kT_);
  }

 private:
  Vector energies_;
  Scalar kT_;
  Scalar log_partition_;
};

using EnergyLevels = BasicEnergyLevels<double>;

namespace detail {

template <typename Scalar>
void require_strategy(const BasicEngineSpec<Scalar>& spec, const BasicProbDist<Scalar>& alice) {
  if (!alice.same_alphabet(spec.bob())) {
    throw DimensionMismatch("strategy and engine use different alphabets");
  }
  if (!alice.has_full_support()) {
    throw ZeroStrategyWeight("strategy puts zero weight on an outcome (unbounded loss)");
  }
}

inline void require_outcome(Index size, Outcome x) {
  if (x < 0 || x >= size) throw DomainError("outcome index out of range");
}

}  // namespace detail

/// Work extracted when the molecule lands in outcome x:
/// kT ln(Q^A(x) / Q^B(x)).
template <typename Scalar>
Scalar work_per_outcome(const BasicEngineSpec<Scalar>& spec, const BasicProbDist<Scalar>& alice,
                        Outcome x) {
  using std::log;
  detail::require_strategy(spec, alice);
  detail::require_outcome(spec.alphabet_size(), x);
  return spec.kT() * (log(alice[x]) - log(spec.bob()[x]));
}

/// Ensemble-average work kT (D(P||Q^B) - D(P||Q^A)).
template <typename Scalar>
Scalar average_work(const BasicEngineSpec<Scalar>& spec, const BasicProbDist<Scalar>& alice) {
  detail::require_strategy(spec, alice);
  return spec.kT() * (kl_divergence(spec.prior(), spec.bob()) - kl_divergence(spec.prior(), alice));
}

/// Energy levels with Gibbs state d at temperature kT, in the gauge Z = 1,
/// i.e. E(x) = -kT ln d(x).
template <typename Scalar>
BasicEnergyLevels<Scalar> levels_from_dist(const BasicProbDist<Scalar>& d, Scalar kT) {
  using std::log;
  if (!d.has_full_support()) throw ZeroWeight("cannot assign a finite energy to a zero-probability state");
  typename BasicEnergyLevels<Scalar>::Vector e(d.size());
  for (Index x = 0; x < d.size(); ++x) e(x) = -kT * log(d[x]);
  return BasicEnergyLevels<Scalar>(e, kT);
}

/// Work for outcome x via the multi-level protocol: quench E^B -> E^A with
/// the state frozen (extracts E^B(x) - E^A(x)), then move E^A -> E^B
/// quasi-statically at temperature kT (extracts kT (ln Z^B - ln Z^A)).
///
/// Both landscapes are re-gauged so their ground level sits at zero, so the
/// partition-function terms are exercised rather than vanishing.
template <typename Scalar>
Scalar protocol_work(const BasicEngineSpec<Scalar>& spec, const BasicProbDist<Scalar>& alice,
                     Outcome x) {
  detail::require_strategy(spec, alice);
  detail::require_outcome(spec.alphabet_size(), x);
  auto ground = [](const BasicEnergyLevels<Scalar>& lv) { return lv.shifted(-lv.energies().minCoeff()); };
  const auto bob_levels = ground(levels_from_dist(spec.bob(), spec.kT()));
  const auto alice_levels = ground(levels_from_dist(alice, spec.kT()));

  const Scalar quench = bob_levels.energy(x) - alice_levels.energy(x);
  const Scalar isothermal = spec.kT() * (bob_levels.log_partition() - alice_levels.log_partition());
  return quench + isothermal;
}

}  // namespace szilard

#endif  // SZILARD_ENGINE_HPP
