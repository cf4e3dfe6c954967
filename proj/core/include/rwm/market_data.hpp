#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace rwm {

struct PriceSeries {
  std::string symbol;
  std::vector<std::int64_t> timestamps;  // epoch seconds, strictly increasing
  std::vector<double> prices;            // strictly positive

  std::size_t size() const { return prices.size(); }

  /// Throws std::invalid_argument on any invariant violation.
  void validate() const;

  bool operator==(const PriceSeries&) const = default;
};

/// Reads `timestamp,<price_column>[,...]`. Extra columns are ignored, LF and
/// CRLF are both accepted. Throws IoError for a missing/unreadable file and
/// CsvError (with the 1-based data row) for malformed content.
PriceSeries load_csv(const std::filesystem::path& path, std::string_view price_column = "price",
                     std::string symbol = {});

/// Writes `timestamp,price` with prices at 17 significant digits.
void save_csv(const PriceSeries& series, const std::filesystem::path& path);

/// Log-space Ornstein-Uhlenbeck parameters for synthetic series.
struct OuParams {
  double theta = 0.5;
  double mu_level = 0.0;
  double sigma_noise = 0.1;
  double x0 = 0.0;
  double dt = 0.01;
  std::size_t n_steps = 1000;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Euler-Maruyama path X_0 = x0, X_{k+1} = X_k + theta (mu - X_k) dt + sigma sqrt(dt) eps_k
/// with eps_k from Rng(seed).normal(); returns n_steps prices exp(X_k) at timestamps 0..n-1.
PriceSeries generate_ou(const OuParams& params, std::string symbol = "OU");

/// The underlying log path (no exponential), same recursion and stream as generate_ou.
std::vector<double> generate_ou_path(const OuParams& params);

}  // namespace rwm
