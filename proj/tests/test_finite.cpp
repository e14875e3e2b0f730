#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "szilard/finite.hpp"
#include "szilard/risk.hpp"
#include "test_support.hpp"

using namespace szilard;
using szilard::testing::random_dist;
using szilard::testing::uniform;

namespace {

const EngineSpec spec73{ProbDist{0.7, 0.3}, ProbDist{0.5, 0.5}};

// Reference values computed with 30-digit arithmetic.
constexpr double kWork31 = 0.523248143764547837;
constexpr double kTilt0 = 0.604356076261039998;
// Root of D(Q^{A*,mu}||P) = ln(10)/50 for the (0.7, 0.3) / (0.5, 0.5) engine,
// solved independently with a bracketing root finder at 30 digits.
constexpr double kMu50 = 0.265187890893711812;

__extension__ using Wide = unsigned __int128;

Wide exact_multinomial(const std::vector<Count>& counts) {
  Wide c = 1;
  Count seen = 0;
  for (Count m : counts) {
    for (Count i = 1; i <= m; ++i) {
      ++seen;
      c = c * static_cast<Wide>(seen) / static_cast<Wide>(i);
    }
  }
  return c;
}

}  // namespace

TEST(SequenceType, FromSequence) {
  const std::vector<Outcome> seq{0, 1, 0, 0, 2, 0};
  const SequenceType t = SequenceType::from_sequence(seq, 3);
  EXPECT_EQ(t.counts(), (std::vector<Count>{4, 1, 1}));
  EXPECT_EQ(t.n(), 6);
  EXPECT_NEAR(t.lambda()[0], 4.0 / 6.0, 1e-15);
  EXPECT_THROW(SequenceType::from_sequence(std::vector<Outcome>{0, 3}, 3), DomainError);
  EXPECT_THROW(SequenceType({-1, 2}), ValidationError);
}

TEST(RiskBudget, Validation) {
  EXPECT_THROW(RiskBudget(0.0, 0.5), DomainError);
  EXPECT_THROW(RiskBudget(1.5, 0.5), DomainError);
  EXPECT_THROW(RiskBudget(0.5, 1.5), DomainError);
  EXPECT_NO_THROW(RiskBudget(1.0, 1.0));
}

TEST(SequenceWork, Examples) {
  const ProbDist alice{0.75, 0.25};
  EXPECT_NEAR(sequence_work(spec73, alice, SequenceType({3, 1})), kWork31, 1e-14);
  EXPECT_NEAR(sequence_work(spec73, spec73.bob(), SequenceType({3, 1})), 0.0, 1e-15);
}

TEST(SequenceWork, EqualsSumOfPerRoundWork) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    const Index k = 2 + trial % 4;
    const EngineSpec spec(random_dist(rng, k), random_dist(rng, k, 1e-3), uniform(rng, 0.2, 3.0));
    const ProbDist alice = random_dist(rng, k, 1e-3);
    const Count n = 1 + trial % 40;
    std::vector<Outcome> seq(static_cast<std::size_t>(n));
    std::uniform_int_distribution<Outcome> pick(0, k - 1);
    double direct = 0.0;
    for (auto& x : seq) {
      x = pick(rng);
      direct += work_per_outcome(spec, alice, x);
    }
    const SequenceType t = SequenceType::from_sequence(seq, k);
    EXPECT_NEAR(sequence_work(spec, alice, t), direct, 1e-10 * (1.0 + std::abs(direct)));
  }
}

TEST(TypeLogProbability, Examples) {
  const ProbDist half{0.5, 0.5};
  const auto even = type_log_probability(half, SequenceType({1, 1}));
  EXPECT_NEAR(even.exact, std::log(0.5), 1e-15);
  EXPECT_NEAR(even.upper_bound, 0.0, 1e-15);

  const auto tenth = type_log_probability(half, SequenceType({7, 3}));
  EXPECT_NEAR(tenth.exact, std::log(120.0 / 1024.0), 1e-13);

  const ProbDist p73{0.7, 0.3};
  const auto pure = type_log_probability(p73, SequenceType({5, 0}));
  EXPECT_NEAR(pure.exact, 5.0 * std::log(0.7), 1e-13);
  EXPECT_NEAR(pure.upper_bound, pure.exact, 1e-13);

  EXPECT_THROW(type_log_probability(ProbDist{1.0, 0.0}, SequenceType({1, 1})), SupportMismatch);
}

TEST(LogMultinomial, MatchesExactIntegers) {
  for (Count n = 1; n <= 30; ++n) {
    for (const SequenceType& t : enumerate_types(3, n)) {
      const double want = std::log(static_cast<double>(exact_multinomial(t.counts())));
      EXPECT_NEAR(log_multinomial(t.counts()), want, 1e-12 * (1.0 + want));
    }
  }
}

TEST(TypeLogProbability, NeverExceedsTheExponentialBound) {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 20; ++trial) {
    const ProbDist p2 = random_dist(rng, 2, 1e-3);
    for (Count n : {1, 7, 40, 100}) {
      for (const SequenceType& t : enumerate_types(2, n)) {
        const auto lp = type_log_probability(p2, t);
        EXPECT_LE(lp.exact, lp.upper_bound + 1e-12);
      }
    }
    const ProbDist p3 = random_dist(rng, 3, 1e-3);
    for (const SequenceType& t : enumerate_types(3, 25)) {
      const auto lp = type_log_probability(p3, t);
      EXPECT_LE(lp.exact, lp.upper_bound + 1e-12);
    }
  }
}

TEST(EnumerateTypes, CountsAndOrder) {
  const auto types = enumerate_types(2, 4);
  ASSERT_EQ(types.size(), 5u);
  EXPECT_EQ(types.front().counts(), (std::vector<Count>{0, 4}));
  EXPECT_EQ(types.back().counts(), (std::vector<Count>{4, 0}));
  EXPECT_EQ(enumerate_types(3, 10).size(), 66u);
  EXPECT_EQ(type_count(4, 10), 286u);
  EXPECT_EQ(type_count(50, 1'000'000), std::numeric_limits<std::uint64_t>::max());
  EXPECT_THROW(enumerate_types(6, 1000), TooLarge);
}

TEST(EnumerateTypes, ProbabilitiesSumToOne) {
  const ProbDist p{0.2, 0.5, 0.3};
  double total = 0.0;
  for (const SequenceType& t : enumerate_types(3, 30)) total += std::exp(type_log_probability(p, t).exact);
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(OptimalBet, Endpoints) {
  EXPECT_EQ(optimal_bet(spec73, 1.0), spec73.prior());
  EXPECT_EQ(optimal_bet(spec73, 0.0), spec73.bob());
  EXPECT_NEAR(optimal_bet(spec73, 0.5)[0], kTilt0, 1e-15);
  EXPECT_THROW(optimal_bet(spec73, 1.5), DomainError);
}

TEST(OptimalBet, AgreesWithTheCaraTilt) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 500; ++trial) {
    const Index k = 2 + trial % 5;
    const EngineSpec spec(random_dist(rng, k, 1e-3), random_dist(rng, k, 1e-3));
    const RiskProfile profile(uniform(rng, 0.0, 20.0));
    const ProbDist bet = optimal_bet(spec, profile.alpha());
    const ProbDist tilt = optimal_strategy(spec, profile).weights;
    EXPECT_LE(szilard::testing::linf(bet, tilt), 1e-12);
  }
}

TEST(SolveMu, Examples) {
  const RiskBudget b50 = solve_mu(spec73, 50, 0.1);
  EXPECT_NEAR(b50.mu, kMu50, 1e-9);
  EXPECT_LE(bet_constraint(spec73, b50.mu), std::log(10.0) / 50.0 + 1e-12);

  // epsilon = 1 leaves no room to deviate from the prior.
  EXPECT_EQ(solve_mu(spec73, 50, 1.0).mu, 1.0);
  // Betting Bob's placement already meets a loose budget.
  EXPECT_EQ(solve_mu(spec73, 20, 0.03).mu, 0.0);
  // Long games force the bet onto the prior.
  EXPECT_GT(solve_mu(spec73, 100'000'000, 0.1).mu, 0.99);
}

TEST(SolveMu, SmallestFeasibleMu) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 200; ++trial) {
    const EngineSpec spec(random_dist(rng, 3, 1e-3), random_dist(rng, 3, 1e-3));
    const Count n = 5 + trial;
    const double eps = uniform(rng, 0.01, 0.9);
    const double budget = std::log(1.0 / eps) / static_cast<double>(n);
    const double mu = solve_mu(spec, n, eps).mu;
    EXPECT_LE(bet_constraint(spec, mu), budget + 1e-12);
    if (mu > 1e-9) EXPECT_GT(bet_constraint(spec, mu - 1e-9), budget - 1e-12);
  }
}

TEST(WorkBound, Examples) {
  EXPECT_EQ(work_bound(spec73, 20, RiskBudget(0.03, 0.0)), 0.0);
  EXPECT_NEAR(work_bound(spec73, 10, RiskBudget(1.0, 1.0)), 10.0 * kl_divergence(spec73.prior(), spec73.bob()), 1e-14);
  EXPECT_THROW(work_bound(spec73, 10, RiskBudget(0.5, 1.0)), DomainError);
}

TEST(WorkBound, EqualsTypeDivergenceAtTheSolvedMu) {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 300; ++trial) {
    const Index k = 2 + trial % 4;
    const EngineSpec spec(random_dist(rng, k, 1e-3), random_dist(rng, k, 1e-3), uniform(rng, 0.5, 2.0));
    const Count n = 10 + 3 * trial;
    const double eps = uniform(rng, 0.001, 0.5);
    const TradeoffPoint pt = tradeoff_point(spec, n, eps);
    if (pt.budget.mu == 0.0) continue;
    const double direct = spec.kT() * static_cast<double>(n) * kl_divergence(pt.strategy, spec.bob());
    // Equality holds with the constraint active; the bisection leaves it
    // satisfied to within the mu tolerance.
    EXPECT_NEAR(pt.work_bound, direct, 1e-7 * static_cast<double>(n) * spec.kT());
  }
}

TEST(WorkBound, DivergenceDecomposition) {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 500; ++trial) {
    const Index k = 2 + trial % 5;
    const EngineSpec spec(random_dist(rng, k, 1e-3), random_dist(rng, k, 1e-3));
    const double mu = uniform(rng, 0.01, 0.99);
    const ProbDist bet = optimal_bet(spec, mu);
    const double lhs = kl_divergence(bet, spec.bob());
    const double rhs = renyi_divergence(spec.prior(), spec.bob(), mu) - mu / (1.0 - mu) * kl_divergence(bet, spec.prior());
    EXPECT_NEAR(lhs, rhs, 1e-12);
  }
}

TEST(WorkBound, MatchedTypeMeetingTheBudgetClearsTheBound) {
  std::mt19937_64 rng(59);
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const EngineSpec spec(random_dist(rng, 2, 0.02), random_dist(rng, 2, 0.02));
    for (Count n : {20, 50, 100}) {
      for (double eps : {0.3, 0.1, 0.03, 0.01}) {
        const TradeoffPoint pt = tradeoff_point(spec, n, eps);
        const SequenceType t = nearest_type(pt.strategy, n);
        if (std::exp(type_log_probability(spec.prior(), t).exact) < eps) continue;
        ++checked;
        const double work = spec.kT() * static_cast<double>(n) * kl_divergence(t.lambda(), spec.bob());
        EXPECT_GE(work, pt.work_bound - 1e-10);
      }
    }
  }
  EXPECT_GT(checked, 50);
}

TEST(NearestType, RoundingError) {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 500; ++trial) {
    const Index k = 2 + trial % 5;
    const ProbDist d = random_dist(rng, k);
    const Count n = 1 + trial;
    const SequenceType t = nearest_type(d, n);
    EXPECT_EQ(t.n(), n);
    const double l1 = (t.lambda().weights() - d.weights()).cwiseAbs().sum();
    EXPECT_LE(l1, static_cast<double>(k) / (2.0 * static_cast<double>(n)) + 1e-12);
  }
}

TEST(NearestType, IsTheL1Minimizer) {
  std::mt19937_64 rng(67);
  for (int trial = 0; trial < 100; ++trial) {
    const ProbDist d = random_dist(rng, 3);
    const Count n = 3 + trial % 15;
    const SequenceType t = nearest_type(d, n);
    const double got = (t.lambda().weights() - d.weights()).cwiseAbs().sum();
    for (const SequenceType& other : enumerate_types(3, n)) {
      EXPECT_LE(got, (other.lambda().weights() - d.weights()).cwiseAbs().sum() + 1e-12);
    }
  }
  EXPECT_EQ(nearest_type(ProbDist{0.5, 0.5}, 3).counts(), (std::vector<Count>{2, 1}));
}

TEST(BruteForceFrontier, DeterministicPrior) {
  const EngineSpec spec(ProbDist{1.0, 0.0}, ProbDist{0.5, 0.5});
  const FrontierOracle o = brute_force_frontier(spec, 12, 1.0);
  EXPECT_EQ(o.type.counts(), (std::vector<Count>{12, 0}));
  EXPECT_NEAR(o.success_probability, 1.0, 1e-15);
  EXPECT_NEAR(o.work, 12.0 * std::log(2.0), 1e-13);
}

TEST(BruteForceFrontier, InfeasibleAndTieBreak) {
  EXPECT_THROW(brute_force_frontier(spec73, 20, 1.0), NoFeasibleType);
  EXPECT_THROW(brute_force_frontier(spec73, 20, 0.3), NoFeasibleType);
  // Every type is feasible; (20, 0) and (0, 20) tie on D(lambda||Q^B).
  const FrontierOracle o = brute_force_frontier(spec73, 20, 1e-300);
  EXPECT_EQ(o.type.counts(), (std::vector<Count>{20, 0}));
}

TEST(BruteForceFrontier, Examples) {
  const FrontierOracle o = brute_force_frontier(spec73, 50, 0.1);
  EXPECT_GE(o.success_probability, 0.1);
  EXPECT_NEAR(o.success_probability, std::exp(type_log_probability(spec73.prior(), o.type).exact), 1e-15);
  EXPECT_NEAR(o.probability_bound, std::exp(-50.0 * o.constraint_value), 1e-15);
  EXPECT_GE(o.probability_bound, o.success_probability);
  EXPECT_NEAR(o.work, 50.0 * kl_divergence(o.type.lambda(), spec73.bob()), 1e-12);
}

TEST(BruteForceFrontier, WorkDecreasesAsTheRiskBudgetTightens) {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 20; ++trial) {
    const EngineSpec spec(random_dist(rng, 2, 0.05), random_dist(rng, 2, 0.05));
    const Count n = 10 + 5 * trial;
    double prev = std::numeric_limits<double>::infinity();
    for (double eps : {1e-6, 1e-4, 1e-3, 0.01, 0.03, 0.06, 0.1}) {
      double work;
      try {
        work = brute_force_frontier(spec, n, eps).work;
      } catch (const NoFeasibleType&) {
        break;
      }
      EXPECT_LE(work, prev + 1e-12);
      prev = work;
    }
  }
}

TEST(BruteForceFrontier, DominatesTheContinuousBound) {
  std::mt19937_64 rng(73);
  for (int trial = 0; trial < 30; ++trial) {
    const EngineSpec spec(random_dist(rng, 2, 0.05), random_dist(rng, 2, 0.05));
    for (Count n : {20, 50, 100}) {
      for (double eps : {0.1, 0.03, 0.01}) {
        FrontierOracle o{SequenceType({0, 1}), 0, 0, 0, 0};
        try {
          o = brute_force_frontier(spec, n, eps);
        } catch (const NoFeasibleType&) {
          continue;
        }
        const TradeoffPoint pt = tradeoff_point(spec, n, eps);
        EXPECT_LE(pt.work_bound, o.work + lattice_slack(spec, n));
      }
    }
  }
}

TEST(WorkDistribution, SumsToOneAndAveragesToTheMeanWork) {
  std::mt19937_64 rng(79);
  for (int trial = 0; trial < 30; ++trial) {
    const Index k = 2 + trial % 3;
    const EngineSpec spec(random_dist(rng, k), random_dist(rng, k, 1e-3));
    const ProbDist alice = random_dist(rng, k, 1e-3);
    const Count n = 5 + trial;
    double total = 0.0;
    double mean = 0.0;
    for (const WorkOutcome& w : work_distribution(spec, alice, n)) {
      total += w.probability;
      mean += w.probability * w.work;
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
    EXPECT_NEAR(mean, static_cast<double>(n) * average_work(spec, alice), 1e-10 * static_cast<double>(n));
  }
}
