#include "rwm/ensemble.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "oracles.hpp"

namespace rwm {
namespace {

using testing::naive_rwm;

TEST(EnsembleInit, UniformStart) {
  Ensemble e(3, 0.5, LossMode::ZeroOne);
  EXPECT_EQ(e.round(), 1u);
  for (double p : e.distribution()) EXPECT_DOUBLE_EQ(p, 1.0 / 3.0);
  for (double w : e.weights()) EXPECT_EQ(w, 1.0);
  for (double l : e.cum_expert_losses()) EXPECT_EQ(l, 0.0);
  EXPECT_EQ(e.cum_algo_loss(), 0.0);
}

TEST(EnsembleInit, SingleExpert) {
  Ensemble e(1, 0.9, LossMode::Continuous);
  ASSERT_EQ(e.distribution().size(), 1u);
  EXPECT_EQ(e.distribution()[0], 1.0);
}

TEST(EnsembleInit, RejectsBadArguments) {
  EXPECT_THROW(Ensemble(2, 1.0, LossMode::ZeroOne), std::invalid_argument);
  EXPECT_THROW(Ensemble(2, 0.0, LossMode::ZeroOne), std::invalid_argument);
  EXPECT_THROW(Ensemble(0, 0.5, LossMode::ZeroOne), std::invalid_argument);
}

TEST(OptimalBeta, Examples) {
  EXPECT_EQ(optimal_beta(2, 1), 0.5);
  EXPECT_NEAR(optimal_beta(10, 10000), 0.9848257287061485, 1e-6);
  EXPECT_EQ(optimal_beta(1, 100), 1.0 - 1e-9);
  EXPECT_THROW(optimal_beta(0, 10), std::invalid_argument);
  EXPECT_THROW(optimal_beta(3, 0), std::invalid_argument);
}

TEST(OptimalBeta, AlwaysInHalfOpenRange) {
  for (std::size_t n : {1, 2, 3, 10, 100, 100000}) {
    for (std::size_t t : {1, 2, 10, 1000, 1000000}) {
      const double b = optimal_beta(n, t);
      EXPECT_GE(b, 0.5);
      EXPECT_LT(b, 1.0);
    }
  }
}

TEST(Bounds, GeneralExamples) {
  EXPECT_DOUBLE_EQ(theoretical_bound_general(1, 0.5, 7.0), 10.5);
  EXPECT_NEAR(theoretical_bound_general(10, 0.9, 0.0), 23.0259, 1e-4);
  EXPECT_NEAR(theoretical_bound_general(10, 0.984826, 100.0), 253.26, 0.1);
  EXPECT_THROW(theoretical_bound_general(10, 1.0, 0.0), std::invalid_argument);
  EXPECT_THROW(theoretical_bound_general(10, -0.1, 0.0), std::invalid_argument);
}

TEST(Bounds, SqrtExamples) {
  EXPECT_NEAR(theoretical_bound_sqrt(10, 10000, 0.0), 303.49, 0.01);
  EXPECT_EQ(theoretical_bound_sqrt(1, 12345, 5.0), 5.0);
  EXPECT_NEAR(theoretical_bound_sqrt(3, 100, 0.0), 20.963, 0.01);
}

TEST(EnsembleUpdate, HandExecutedStep) {
  Ensemble e(2, 0.5, LossMode::ZeroOne);
  const double expected = e.update(std::vector<double>{1.0, 0.0});
  EXPECT_DOUBLE_EQ(expected, 0.5);
  EXPECT_NEAR(e.distribution()[0], 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(e.distribution()[1], 2.0 / 3.0, 1e-15);
  EXPECT_EQ(e.round(), 2u);

  const RegretReport r = e.regret();
  EXPECT_EQ(r.horizon, 1u);
  EXPECT_DOUBLE_EQ(r.cum_algo_loss, 0.5);
  EXPECT_EQ(r.min_expert_loss, 0.0);
  EXPECT_EQ(r.best_expert_index, 1u);
  EXPECT_DOUBLE_EQ(r.regret, 0.5);
}

TEST(EnsembleUpdate, AllZeroAndAllOneLeaveDistributionUnchanged) {
  for (double value : {0.0, 1.0}) {
    Ensemble e(4, 0.7, LossMode::ZeroOne);
    e.update(std::vector<double>{1, 0, 0, 1});
    const std::vector<double> before(e.distribution().begin(), e.distribution().end());
    const double expected = e.update(std::vector<double>(4, value));
    EXPECT_DOUBLE_EQ(expected, value);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(e.distribution()[i], before[i], 1e-12);
  }
}

TEST(EnsembleUpdate, RejectsInvalidLosses) {
  Ensemble zo(3, 0.5, LossMode::ZeroOne);
  EXPECT_THROW(zo.update(std::vector<double>{1, 0}), std::invalid_argument);
  EXPECT_THROW(zo.update(std::vector<double>{0.5, 0, 0}), std::invalid_argument);
  EXPECT_THROW(zo.update(std::vector<double>{1.5, 0, 0}), std::invalid_argument);
  Ensemble c(3, 0.5, LossMode::Continuous);
  EXPECT_NO_THROW(c.update(std::vector<double>{0.5, 0, 1}));
  EXPECT_THROW(c.update(std::vector<double>{-0.1, 0, 0}), std::invalid_argument);
  EXPECT_THROW(c.update(std::vector<double>{NAN, 0, 0}), std::invalid_argument);
  // A rejected vector leaves the state untouched.
  EXPECT_EQ(c.round(), 2u);
}

TEST(EnsembleRegret, SingleExpertHasZeroRegret) {
  Ensemble e(1, 0.6, LossMode::Continuous);
  for (const auto& row : testing::random_continuous(1, 200, 3)) e.update(row);
  EXPECT_EQ(e.regret().regret, 0.0);
}

TEST(EnsembleRegret, IdenticalColumnsHaveZeroRegret) {
  Ensemble e(5, 0.8, LossMode::ZeroOne);
  for (const auto& row : testing::random_zero_one(1, 300, 9)) {
    e.update(std::vector<double>(5, row[0]));
  }
  EXPECT_NEAR(e.regret().regret, 0.0, 1e-12);
}

// Property sweeps over seeded random sequences.

class EnsembleProperty : public ::testing::TestWithParam<unsigned> {};

TEST_P(EnsembleProperty, MatchesClosedFormReplay) {
  const unsigned seed = GetParam();
  for (LossMode mode : {LossMode::ZeroOne, LossMode::Continuous}) {
    const std::size_t n = 2 + seed % 7;
    const auto rows = mode == LossMode::ZeroOne ? testing::random_zero_one(n, 150, seed)
                                                : testing::random_continuous(n, 150, seed);
    const double beta = 0.55 + 0.4 * ((seed * 37) % 10) / 10.0;
    const auto oracle = naive_rwm(rows, n, beta);
    Ensemble e(n, beta, mode);
    for (std::size_t t = 0; t < rows.size(); ++t) {
      const double expected = e.update(rows[t]);
      EXPECT_NEAR(expected, oracle.expected_losses[t], 1e-12);
      const auto p = e.distribution();
      double total = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        EXPECT_GE(p[i], 0.0);
        EXPECT_NEAR(p[i], oracle.distributions[t + 1][i], 1e-12);
        total += p[i];
      }
      EXPECT_NEAR(total, 1.0, 1e-12);
      // Weight closed form w = beta^(cumulative loss).
      const auto w = e.weights();
      for (std::size_t i = 0; i < n; ++i) {
        const double closed = std::pow(beta, e.cum_expert_losses()[i]);
        EXPECT_NEAR(w[i] / closed, 1.0, 1e-9);
      }
    }
    EXPECT_NEAR(e.cum_algo_loss(), oracle.cum_algo_loss, 1e-9);
  }
}

TEST_P(EnsembleProperty, PotentialIdentityAndLowerBound) {
  const unsigned seed = GetParam();
  const std::size_t n = 3 + seed % 11;
  const double beta = 0.5 + 0.05 * (seed % 9);
  Ensemble e(n, beta, LossMode::ZeroOne);
  double min_loss = 0.0;
  for (const auto& row : testing::random_zero_one(n, 400, seed, 0.4)) {
    const double before = e.potential();
    const double expected = e.update(row);
    EXPECT_NEAR(e.potential() / before, 1.0 - (1.0 - beta) * expected, 1e-12);
    EXPECT_NEAR(e.last_potential_ratio(), 1.0 - (1.0 - beta) * expected, 1e-12);
    const auto losses = e.cum_expert_losses();
    min_loss = *std::min_element(losses.begin(), losses.end());
    EXPECT_GE(e.log_potential(), min_loss * std::log(beta) - 1e-12);
  }
  const RegretReport r = e.regret();
  EXPECT_LE(r.cum_algo_loss, theoretical_bound_general(n, beta, min_loss));
}

TEST_P(EnsembleProperty, ConstantShiftInvariance) {
  const unsigned seed = GetParam();
  const std::size_t n = 4;
  auto rows = testing::random_continuous(n, 60, seed);
  for (auto& row : rows) {
    for (auto& l : row) l *= 0.5;  // leave headroom for the shift
  }
  const std::size_t shifted_round = 20;
  auto shifted = rows;
  const double max_entry =
      *std::max_element(shifted[shifted_round].begin(), shifted[shifted_round].end());
  const double c = 0.7 * (1.0 - max_entry);
  for (auto& l : shifted[shifted_round]) l += c;

  Ensemble a(n, 0.8, LossMode::Continuous);
  Ensemble b(n, 0.8, LossMode::Continuous);
  for (std::size_t t = 0; t < rows.size(); ++t) {
    a.update(rows[t]);
    b.update(shifted[t]);
    if (t >= shifted_round) {
      for (std::size_t i = 0; i < n; ++i) {
        EXPECT_NEAR(a.distribution()[i], b.distribution()[i], 1e-9);
      }
    }
  }
}

TEST_P(EnsembleProperty, PermutationEquivariance) {
  const unsigned seed = GetParam();
  const std::size_t n = 6;
  const auto rows = testing::random_zero_one(n, 80, seed, 0.35);
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937 gen(seed);
  std::shuffle(perm.begin(), perm.end(), gen);

  Ensemble plain(n, 0.75, LossMode::ZeroOne);
  Ensemble permuted(n, 0.75, LossMode::ZeroOne);
  for (const auto& row : rows) {
    std::vector<double> moved(n);
    for (std::size_t i = 0; i < n; ++i) moved[perm[i]] = row[i];
    plain.update(row);
    permuted.update(moved);
  }
  for (std::size_t i = 0; i < n; ++i) {
    EXPECT_NEAR(permuted.distribution()[perm[i]], plain.distribution()[i], 1e-15);
    EXPECT_EQ(permuted.cum_expert_losses()[perm[i]], plain.cum_expert_losses()[i]);
  }
  const auto best = plain.regret().best_expert_index;
  const auto losses = plain.cum_expert_losses();
  if (std::count(losses.begin(), losses.end(), losses[best]) == 1) {
    EXPECT_EQ(permuted.regret().best_expert_index, perm[best]);
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, EnsembleProperty, ::testing::Range(1u, 21u));

TEST(EnsembleLongHorizon, NoUnderflowInDistribution) {
  // beta = 1/2 over 5000 mistakes would underflow raw weights.
  Ensemble e(3, 0.5, LossMode::ZeroOne);
  for (int t = 0; t < 5000; ++t) e.update(std::vector<double>{1, 1, t % 2 == 0 ? 1.0 : 0.0});
  const auto p = e.distribution();
  EXPECT_NEAR(p[0] + p[1] + p[2], 1.0, 1e-12);
  EXPECT_NEAR(p[0], p[1], 1e-15);
  EXPECT_GT(p[2], 0.99);
  EXPECT_NEAR(e.log_weight(2), 2500 * std::log(0.5), 1e-9 * 2500);
  EXPECT_NEAR(e.log_potential(), 2500 * std::log(0.5), 1e-9 * 2500);
}

TEST(SampleExpert, DegenerateDistributions) {
  Rng rng(42);
  Ensemble single(1, 0.5, LossMode::ZeroOne);
  for (int k = 0; k < 100; ++k) EXPECT_EQ(single.sample_expert(rng), 0u);

  // Drive expert 0 to numerically zero probability.
  Ensemble pair(2, 0.5, LossMode::ZeroOne);
  for (int k = 0; k < 1200; ++k) pair.update(std::vector<double>{1, 0});
  ASSERT_EQ(pair.distribution()[0], 0.0);
  for (int k = 0; k < 1000; ++k) EXPECT_EQ(pair.sample_expert(rng), 1u);
}

TEST(SampleExpert, EmpiricalFrequency) {
  Ensemble e(2, 0.5, LossMode::ZeroOne);
  e.update(std::vector<double>{1, 0});  // p = [1/3, 2/3]
  Rng rng(2024);
  int ones = 0;
  for (int k = 0; k < 30000; ++k) ones += e.sample_expert(rng) == 1 ? 1 : 0;
  const double freq = ones / 30000.0;
  EXPECT_GE(freq, 0.655);
  EXPECT_LE(freq, 0.678);
}

TEST(SampleExpert, DeterministicGivenSeed) {
  Ensemble e(5, 0.7, LossMode::Continuous);
  e.update(std::vector<double>{0.1, 0.9, 0.3, 0.5, 0.0});
  Rng a(5), b(5);
  for (int k = 0; k < 200; ++k) EXPECT_EQ(e.sample_expert(a), e.sample_expert(b));
}

}  // namespace
}  // namespace rwm
