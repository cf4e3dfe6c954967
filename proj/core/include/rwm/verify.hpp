#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rwm/ensemble.hpp"

namespace rwm {

struct LossMatrix {
  std::size_t n_experts = 0;
  LossMode mode = LossMode::ZeroOne;
  std::vector<std::vector<double>> rows;  // rows[t][i] = l_{t+1,i}

  std::size_t horizon() const { return rows.size(); }
  /// Rectangular, non-empty, entries valid for the mode.
  void validate() const;
};

struct BestExpert {
  std::size_t index = 0;
  double min_loss = 0.0;
};

/// Column sums by direct summation; ties go to the lowest index.
BestExpert brute_force_best(const LossMatrix& matrix);

inline constexpr double kPotentialIdentityTolerance = 1e-12;
inline constexpr double kLowerBoundRelativeTolerance = 1e-9;

struct BoundCertificate {
  std::size_t horizon = 0;
  std::size_t n_experts = 0;
  double beta = 0.0;
  double cum_algo_loss = 0.0;
  double min_expert_loss = 0.0;
  std::size_t best_expert_index = 0;
  double bound_general = 0.0;
  double bound_sqrt = 0.0;
  // Exact comparisons cum_algo_loss <= bound.
  bool general_satisfied = false;
  bool sqrt_satisfied = false;
  // The square-root bound is only a theorem for beta = optimal_beta(N, T).
  bool sqrt_bound_applies = false;
  double general_margin = 0.0;  // bound_general - cum_algo_loss
  double sqrt_margin = 0.0;
  // max_t |W_{t+1}/W_t - (1 - (1 - beta) L_t)|
  double max_identity_residual = 0.0;
  // min_t (ln W_{t+1} - Lmin_t ln beta) / max(1, |Lmin_t ln beta|)
  double min_lower_bound_slack = 0.0;
  // max_i |incremental L_{T,i} - brute-force column sum|
  double oracle_discrepancy = 0.0;
  bool oracle_agrees = false;

  bool identity_holds() const { return max_identity_residual <= kPotentialIdentityTolerance; }
  bool lower_bound_holds() const {
    return min_lower_bound_slack >= -kLowerBoundRelativeTolerance;
  }
  bool all_satisfied() const {
    return general_satisfied && (!sqrt_bound_applies || sqrt_satisfied) && identity_holds() &&
           lower_bound_holds() && oracle_agrees;
  }
};

/// Replays RWM over a zero-one matrix and checks the potential identity,
/// the potential lower bound and both loss bounds. beta defaults to
/// optimal_beta(N, T) and must lie in [1/2, 1). Continuous matrices are
/// rejected with std::invalid_argument.
BoundCertificate certify(const LossMatrix& matrix, std::optional<double> beta = std::nullopt);

std::string certificate_json(const BoundCertificate& certificate);

struct IidBernoulli {
  double p = 0.5;
};
/// Expert 0 errs with p_good, all others with p_bad.
struct SingleGoodExpert {
  double p_good = 0.1;
  double p_bad = 0.5;
};
/// Expert (t mod N) errs at 0-based round t, everyone else is right.
struct AdversarialAlternating {};

using LossGenerator = std::variant<IidBernoulli, SingleGoodExpert, AdversarialAlternating>;

/// Zero-one matrix drawn row-major, one Rng::uniform() per entry.
LossMatrix generate_losses(const LossGenerator& kind, std::size_t n, std::size_t horizon,
                           std::uint64_t seed);

}  // namespace rwm
