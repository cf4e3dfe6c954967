#include "rwm/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "rwm/random.hpp"

namespace rwm {

void LossMatrix::validate() const {
  if (n_experts == 0) throw std::invalid_argument("loss matrix has no experts");
  if (rows.empty()) throw std::invalid_argument("loss matrix has no rows");
  for (const auto& row : rows) validate_losses(row, n_experts, mode);
}

BestExpert brute_force_best(const LossMatrix& matrix) {
  matrix.validate();
  BestExpert best{0, 0.0};
  for (std::size_t i = 0; i < matrix.n_experts; ++i) {
    double column = 0.0;
    for (const auto& row : matrix.rows) column += row[i];
    if (i == 0 || column < best.min_loss) best = {i, column};
  }
  return best;
}

BoundCertificate certify(const LossMatrix& matrix, std::optional<double> beta) {
  matrix.validate();
  if (matrix.mode != LossMode::ZeroOne) {
    throw std::invalid_argument("certification requires a zero-one loss matrix");
  }
  const std::size_t n = matrix.n_experts;
  const std::size_t horizon = matrix.horizon();
  const double tuned = optimal_beta(n, horizon);
  const double b = beta.value_or(tuned);
  if (!(b >= 0.5 && b < 1.0)) {
    throw std::invalid_argument("certified beta must lie in [1/2, 1), got " + std::to_string(b));
  }

  BoundCertificate cert;
  cert.horizon = horizon;
  cert.n_experts = n;
  cert.beta = b;
  cert.sqrt_bound_applies = b == tuned;
  cert.min_lower_bound_slack = std::numeric_limits<double>::infinity();

  const double log_beta = std::log(b);
  Ensemble learner(n, b, LossMode::ZeroOne);
  for (const auto& row : matrix.rows) {
    const double expected = learner.update(row);
    const double predicted = 1.0 - (1.0 - b) * expected;
    cert.max_identity_residual = std::max(
        cert.max_identity_residual, std::abs(learner.last_potential_ratio() - predicted));

    const auto losses = learner.cum_expert_losses();
    const double floor_log = *std::min_element(losses.begin(), losses.end()) * log_beta;
    const double slack =
        (learner.log_potential() - floor_log) / std::max(1.0, std::abs(floor_log));
    cert.min_lower_bound_slack = std::min(cert.min_lower_bound_slack, slack);
  }

  const RegretReport report = learner.regret();
  cert.cum_algo_loss = report.cum_algo_loss;
  cert.min_expert_loss = report.min_expert_loss;
  cert.best_expert_index = report.best_expert_index;
  cert.bound_general = report.bound_general;
  cert.bound_sqrt = report.bound_sqrt;
  cert.general_satisfied = cert.cum_algo_loss <= cert.bound_general;
  cert.sqrt_satisfied = cert.cum_algo_loss <= cert.bound_sqrt;
  cert.general_margin = cert.bound_general - cert.cum_algo_loss;
  cert.sqrt_margin = cert.bound_sqrt - cert.cum_algo_loss;

  const BestExpert oracle = brute_force_best(matrix);
  for (std::size_t i = 0; i < n; ++i) {
    double column = 0.0;
    for (const auto& row : matrix.rows) column += row[i];
    cert.oracle_discrepancy =
        std::max(cert.oracle_discrepancy, std::abs(column - learner.cum_expert_losses()[i]));
  }
  cert.oracle_agrees = cert.oracle_discrepancy <= 1e-9 &&
                       oracle.index == report.best_expert_index &&
                       std::abs(oracle.min_loss - report.min_expert_loss) <= 1e-9;
  return cert;
}

std::string certificate_json(const BoundCertificate& c) {
  const nlohmann::json j{{"horizon", c.horizon},
                         {"n_experts", c.n_experts},
                         {"beta", c.beta},
                         {"cum_algo_loss", c.cum_algo_loss},
                         {"min_expert_loss", c.min_expert_loss},
                         {"best_expert_index", c.best_expert_index},
                         {"regret", c.cum_algo_loss - c.min_expert_loss},
                         {"bound_general", c.bound_general},
                         {"bound_sqrt", c.bound_sqrt},
                         {"general_satisfied", c.general_satisfied},
                         {"sqrt_satisfied", c.sqrt_satisfied},
                         {"sqrt_bound_applies", c.sqrt_bound_applies},
                         {"max_identity_residual", c.max_identity_residual},
                         {"min_lower_bound_slack", c.min_lower_bound_slack},
                         {"oracle_discrepancy", c.oracle_discrepancy},
                         {"satisfied", c.all_satisfied()}};
  return j.dump();
}

namespace {

void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument(std::string(name) + " must lie in [0, 1], got " +
                                std::to_string(p));
  }
}

}  // namespace

LossMatrix generate_losses(const LossGenerator& kind, std::size_t n, std::size_t horizon,
                           std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("need at least one expert");
  std::visit(
      [](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, IidBernoulli>) {
          check_probability(k.p, "p");
        } else if constexpr (std::is_same_v<K, SingleGoodExpert>) {
          check_probability(k.p_good, "p_good");
          check_probability(k.p_bad, "p_bad");
        }
      },
      kind);

  LossMatrix matrix{n, LossMode::ZeroOne, {}};
  matrix.rows.assign(horizon, std::vector<double>(n, 0.0));
  Rng rng(seed);
  for (std::size_t t = 0; t < horizon; ++t) {
    auto& row = matrix.rows[t];
    std::visit(
        [&](const auto& k) {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, IidBernoulli>) {
            for (auto& l : row) l = rng.bernoulli(k.p) ? 1.0 : 0.0;
          } else if constexpr (std::is_same_v<K, SingleGoodExpert>) {
            for (std::size_t i = 0; i < n; ++i) {
              row[i] = rng.bernoulli(i == 0 ? k.p_good : k.p_bad) ? 1.0 : 0.0;
            }
          } else {
            row[t % n] = 1.0;
          }
        },
        kind);
  }
  return matrix;
}

}  // namespace rwm
