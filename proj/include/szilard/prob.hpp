#ifndef SZILARD_PROB_HPP
#define SZILARD_PROB_HPP

#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "szilard/errors.hpp"

namespace szilard {

using Index = Eigen::Index;

// Simplex tolerances. Inputs within kRenormalizeTolerance of unit mass are
// rescaled; after construction the mass is 1 to within kSimplexTolerance.
inline constexpr double kSimplexTolerance = 1e-12;
inline constexpr double kRenormalizeTolerance = 1e-9;

/// A probability vector over the outcome alphabet {0, ..., size()-1}.
///
/// Priors, Bob's placement (odds), Alice's strategies and empirical types all
/// share this representation. Instances are immutable after construction.
template <typename Scalar>
class BasicProbDist {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  explicit BasicProbDist(Vector weights) : w_(std::move(weights)) {
    if (w_.size() < 2) {
      throw InvalidDistribution("probability vector needs at least two outcomes");
    }
    Scalar total(0);
    for (Index i = 0; i < w_.size(); ++i) {
      const Scalar v = w_(i);
      if (!(v >= Scalar(0)) || !isfinite_(v)) {
        std::ostringstream os;
        os << "weight " << i << " is negative or not finite";
        throw InvalidDistribution(os.str());
      }
      total += v;
    }
    using std::abs;
    if (abs(total - Scalar(1)) > Scalar(kRenormalizeTolerance)) {
      std::ostringstream os;
      os.precision(17);
      os << "weights sum to " << static_cast<double>(total) << ", not 1";
      throw InvalidDistribution(os.str());
    }
    if (total != Scalar(1)) w_ /= total;
  }

  BasicProbDist(std::initializer_list<Scalar> weights)
      : BasicProbDist(from_list(weights)) {}

  static BasicProbDist uniform(Index size) {
    if (size < 2) throw InvalidDistribution("uniform distribution needs size >= 2");
    return BasicProbDist(Vector::Constant(size, Scalar(1) / Scalar(size)));
  }

  // Normalizes arbitrary non-negative masses; at least one must be positive.
  static BasicProbDist from_unnormalized(const Vector& masses) {
    const Scalar total = masses.sum();
    if (!(total > Scalar(0)) || !isfinite_(total)) {
      throw InvalidDistribution("cannot normalize masses with non-positive total");
    }
    return BasicProbDist(Vector(masses / total));
  }

  Index size() const { return w_.size(); }
  const Vector& weights() const { return w_; }
  Scalar operator[](Index x) const { return w_(x); }
  Scalar at(Index x) const {
    if (x < 0 || x >= size()) throw DomainError("outcome index out of range");
    return w_(x);
  }

  bool has_full_support() const { return (w_.array() > Scalar(0)).all(); }
  bool same_alphabet(const BasicProbDist& other) const { return size() == other.size(); }

  std::vector<Scalar> to_vector() const { return {w_.data(), w_.data() + w_.size()}; }

  template <typename Other>
  BasicProbDist<Other> cast() const {
    return BasicProbDist<Other>(w_.template cast<Other>().eval());
  }

  friend bool operator==(const BasicProbDist& a, const BasicProbDist& b) {
    return a.size() == b.size() && a.w_ == b.w_;
  }

 private:
  static Vector from_list(std::initializer_list<Scalar> weights) {
    Vector v(static_cast<Index>(weights.size()));
    Index i = 0;
    for (Scalar s : weights) v(i++) = s;
    return v;
  }
  static bool isfinite_(const Scalar& v) {
    using std::isfinite;
    return isfinite(v);
  }

  Vector w_;
};

using ProbDist = BasicProbDist<double>;

/// Order of a Rényi divergence, with the poles {0, 1, +inf} tagged so that
/// they dispatch to their limiting forms instead of the generic formula.
class RenyiOrder {
 public:
  enum class Kind { Zero, One, Infinity, Finite };

  explicit RenyiOrder(double alpha) : alpha_(alpha) {
    if (std::isnan(alpha) || alpha == -std::numeric_limits<double>::infinity()) {
      throw DomainError("Renyi order must lie in (-inf, +inf]");
    }
    if (alpha == 0.0) {
      kind_ = Kind::Zero;
    } else if (alpha == 1.0) {
      kind_ = Kind::One;
    } else if (std::isinf(alpha)) {
      kind_ = Kind::Infinity;
    } else {
      kind_ = Kind::Finite;
    }
  }

  static RenyiOrder zero() { return RenyiOrder(0.0); }
  static RenyiOrder one() { return RenyiOrder(1.0); }
  static RenyiOrder infinity() { return RenyiOrder(std::numeric_limits<double>::infinity()); }

  Kind kind() const { return kind_; }
  double value() const { return alpha_; }

 private:
  double alpha_;
  Kind kind_ = Kind::Finite;
};

// Numerically stable ln(sum_i exp(v_i)). Entries equal to -inf are ignored;
// an empty or all -inf input yields -inf.
template <typename Scalar>
Scalar log_sum_exp(const std::vector<Scalar>& values) {
  using std::exp;
  using std::log;
  const Scalar neg_inf = -std::numeric_limits<Scalar>::infinity();
  Scalar peak = neg_inf;
  for (const Scalar& v : values) {
    if (v > peak) peak = v;
  }
  if (peak == neg_inf) return neg_inf;
  if (peak == std::numeric_limits<Scalar>::infinity()) return peak;
  Scalar acc(0);
  for (const Scalar& v : values) {
    if (v != neg_inf) acc += exp(v - peak);
  }
  return peak + log(acc);
}

namespace detail {

template <typename Scalar>
void require_same_alphabet(const BasicProbDist<Scalar>& p, const BasicProbDist<Scalar>& q) {
  if (!p.same_alphabet(q)) {
    std::ostringstream os;
    os << "alphabet sizes differ (" << p.size() << " vs " << q.size() << ")";
    throw DimensionMismatch(os.str());
  }
}

}  // namespace detail

/// Shannon entropy in nats, with 0 ln 0 = 0.
template <typename Scalar>
Scalar shannon_entropy(const BasicProbDist<Scalar>& p) {
  using std::log;
  Scalar h(0);
  for (Index x = 0; x < p.size(); ++x) {
    if (p[x] > Scalar(0)) h -= p[x] * log(p[x]);
  }
  return h;
}

/// Kullback-Leibler divergence D(p||q) in nats.
template <typename Scalar>
Scalar kl_divergence(const BasicProbDist<Scalar>& p, const BasicProbDist<Scalar>& q) {
  using std::log;
  detail::require_same_alphabet(p, q);
  Scalar d(0);
  for (Index x = 0; x < p.size(); ++x) {
    if (p[x] == Scalar(0)) continue;
    if (q[x] == Scalar(0)) throw SupportMismatch("KL divergence: p(x) > 0 where q(x) = 0");
    d += p[x] * (log(p[x]) - log(q[x]));
  }
  // Rounding can leave a tiny negative residue when p == q.
  return d < Scalar(0) && p == q ? Scalar(0) : d;
}

template <typename Scalar>
struct DivergenceValue {
  Scalar nats;
  bool degenerate = false;
};

/// Rényi divergence D_alpha(p||q) in nats, flagging degenerate cases instead
/// of throwing.
///
/// Finite orders are evaluated as ln-sum-exp of alpha ln p + (1-alpha) ln q.
/// Conventions:
///  - alpha > 1 requires supp(p) within supp(q) (SupportMismatch otherwise);
///  - 0 < alpha < 1 with disjoint supports has a zero defining sum and
///    returns +inf flagged degenerate;
///  - alpha < 0 requires supp(p) == supp(q); anything else is flagged
///    degenerate with a NaN value;
///  - alpha = 0 is -ln q(supp p), alpha = inf is max_x ln(p/q) over supp p.
template <typename Scalar>
DivergenceValue<Scalar> renyi_divergence_flagged(const BasicProbDist<Scalar>& p,
                                                 const BasicProbDist<Scalar>& q,
                                                 const RenyiOrder& order) {
  using std::log;
  detail::require_same_alphabet(p, q);
  const Scalar inf = std::numeric_limits<Scalar>::infinity();

  switch (order.kind()) {
    case RenyiOrder::Kind::One:
      return {kl_divergence(p, q)};
    case RenyiOrder::Kind::Zero: {
      Scalar mass(0);
      for (Index x = 0; x < p.size(); ++x) {
        if (p[x] > Scalar(0)) mass += q[x];
      }
      if (mass == Scalar(0)) return {inf, true};
      const Scalar d = -log(mass);
      return {d < Scalar(0) ? Scalar(0) : d};
    }
    case RenyiOrder::Kind::Infinity: {
      Scalar best = -inf;
      for (Index x = 0; x < p.size(); ++x) {
        if (p[x] == Scalar(0)) continue;
        if (q[x] == Scalar(0)) throw SupportMismatch("D_inf: p(x) > 0 where q(x) = 0");
        const Scalar v = log(p[x]) - log(q[x]);
        if (v > best) best = v;
      }
      return {best};
    }
    case RenyiOrder::Kind::Finite:
      break;
  }

  const Scalar alpha(order.value());
  std::vector<Scalar> terms;
  terms.reserve(static_cast<std::size_t>(p.size()));
  for (Index x = 0; x < p.size(); ++x) {
    const bool pz = p[x] == Scalar(0);
    const bool qz = q[x] == Scalar(0);
    if (alpha < Scalar(0)) {
      if (pz && qz) continue;
      if (pz || qz) return {std::numeric_limits<Scalar>::quiet_NaN(), true};
    } else if (alpha > Scalar(1)) {
      if (pz) continue;
      if (qz) throw SupportMismatch("D_alpha (alpha > 1): p(x) > 0 where q(x) = 0");
    } else if (pz || qz) {
      continue;
    }
    terms.push_back(alpha * log(p[x]) + (Scalar(1) - alpha) * log(q[x]));
  }
  const Scalar log_sum = log_sum_exp(terms);
  if (log_sum == -inf) return {inf, true};
  return {log_sum / (alpha - Scalar(1))};
}

/// Rényi divergence D_alpha(p||q) in nats. Throws Degenerate where the
/// flagged variant would report a degenerate value.
template <typename Scalar>
Scalar renyi_divergence(const BasicProbDist<Scalar>& p, const BasicProbDist<Scalar>& q,
                        const RenyiOrder& order) {
  const auto result = renyi_divergence_flagged(p, q, order);
  if (result.degenerate) {
    std::ostringstream os;
    os << "Renyi divergence of order " << order.value() << " is degenerate for these supports";
    throw Degenerate(os.str());
  }
  return result.nats;
}

template <typename Scalar>
Scalar renyi_divergence(const BasicProbDist<Scalar>& p, const BasicProbDist<Scalar>& q,
                        double alpha) {
  return renyi_divergence(p, q, RenyiOrder(alpha));
}

}  // namespace szilard

#endif  // SZILARD_PROB_HPP
