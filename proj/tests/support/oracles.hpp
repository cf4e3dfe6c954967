#pragma once

// Test-only reference computations. None of these touch the library's
// incremental accounting; they recompute everything from the raw losses.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

namespace rwm::testing {

using Matrix = std::vector<std::vector<double>>;

struct NaiveReplay {
  std::vector<std::vector<double>> distributions;  // p_t before round t, t = 1..T+1
  std::vector<double> expected_losses;             // L_t
  std::vector<double> potentials;                  // W_t, t = 1..T+1
  double cum_algo_loss = 0.0;
};

// RWM from its closed form: w_{t,i} = beta^(sum of earlier losses of i).
inline NaiveReplay naive_rwm(const Matrix& rows, std::size_t n, double beta) {
  NaiveReplay out;
  std::vector<double> cum(n, 0.0);
  auto snapshot = [&] {
    std::vector<double> w(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += (w[i] = std::pow(beta, cum[i]));
    for (auto& x : w) x /= total;
    out.distributions.push_back(w);
    out.potentials.push_back(total);
  };
  snapshot();
  for (const auto& row : rows) {
    const auto& p = out.distributions.back();
    double expected = 0.0;
    for (std::size_t i = 0; i < n; ++i) expected += p[i] * row[i];
    out.expected_losses.push_back(expected);
    out.cum_algo_loss += expected;
    for (std::size_t i = 0; i < n; ++i) cum[i] += row[i];
    snapshot();
  }
  return out;
}

inline std::vector<double> column_sums(const Matrix& rows, std::size_t n) {
  std::vector<double> sums(n, 0.0);
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < n; ++i) sums[i] += row[i];
  }
  return sums;
}

inline Matrix random_zero_one(std::size_t n, std::size_t t, unsigned seed, double p = 0.5) {
  std::mt19937 gen(seed);
  std::bernoulli_distribution coin(p);
  Matrix rows(t, std::vector<double>(n));
  for (auto& row : rows) {
    for (auto& l : row) l = coin(gen) ? 1.0 : 0.0;
  }
  return rows;
}

inline Matrix random_continuous(std::size_t n, std::size_t t, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Matrix rows(t, std::vector<double>(n));
  for (auto& row : rows) {
    for (auto& l : row) l = unit(gen);
  }
  return rows;
}

struct SeriesMoments {
  double mean = 0.0;
  double lag1_autocorrelation = 0.0;
};

inline SeriesMoments sample_moments(const std::vector<double>& x) {
  const double n = static_cast<double>(x.size());
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= n;
  double var = 0.0, cov = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    var += (x[k] - mean) * (x[k] - mean);
    if (k > 0) cov += (x[k] - mean) * (x[k - 1] - mean);
  }
  return {mean, cov / var};
}

// Seeds committed for the OU mean-reversion checks.
inline constexpr unsigned kOuCheckSeeds[] = {20240101u, 7u, 1234567u};

inline std::filesystem::path fresh_temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("rwm_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace rwm::testing
