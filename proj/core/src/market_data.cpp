#include "rwm/market_data.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <stdexcept>

#include "rwm/errors.hpp"
#include "rwm/random.hpp"

namespace rwm {
namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

template <typename T>
std::optional<T> parse_number(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  T value{};
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size() || text.empty()) return std::nullopt;
  return value;
}

std::string format_double(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

}  // namespace

void PriceSeries::validate() const {
  if (prices.empty()) throw std::invalid_argument("price series is empty");
  if (timestamps.size() != prices.size()) {
    throw std::invalid_argument("timestamps and prices differ in length");
  }
  for (std::size_t k = 0; k < prices.size(); ++k) {
    if (!(prices[k] > 0.0) || !std::isfinite(prices[k])) {
      throw std::invalid_argument("price at index " + std::to_string(k) + " is not positive");
    }
    if (k > 0 && timestamps[k] <= timestamps[k - 1]) {
      throw std::invalid_argument("timestamps not strictly increasing at index " +
                                  std::to_string(k));
    }
  }
}

PriceSeries load_csv(const std::filesystem::path& path, std::string_view price_column,
                     std::string symbol) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");

  std::string line;
  if (!std::getline(in, line)) throw CsvError(0, "'" + path.string() + "' has no header");
  if (line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);

  const auto header = split_fields(line);
  std::optional<std::size_t> ts_col;
  std::optional<std::size_t> px_col;
  for (std::size_t c = 0; c < header.size(); ++c) {
    const auto name = trim(header[c]);
    if (name == "timestamp") ts_col = c;
    if (name == price_column) px_col = c;
  }
  if (!ts_col) throw CsvError(0, "header lacks a 'timestamp' column");
  if (!px_col) throw CsvError(0, "header lacks a '" + std::string(price_column) + "' column");
  const std::size_t needed = std::max(*ts_col, *px_col) + 1;

  PriceSeries series;
  series.symbol = symbol.empty() ? path.stem().string() : std::move(symbol);
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ++row;
    const auto fields = split_fields(line);
    if (fields.size() < needed) {
      throw CsvError(row, "expected at least " + std::to_string(needed) + " fields");
    }
    const auto ts = parse_number<std::int64_t>(fields[*ts_col]);
    if (!ts) throw CsvError(row, "bad timestamp '" + std::string(trim(fields[*ts_col])) + "'");
    const auto px = parse_number<double>(fields[*px_col]);
    if (!px) throw CsvError(row, "bad price '" + std::string(trim(fields[*px_col])) + "'");
    if (!(*px > 0.0) || !std::isfinite(*px)) {
      throw CsvError(row, "price must be positive, got '" +
                              std::string(trim(fields[*px_col])) + "'");
    }
    if (!series.timestamps.empty() && *ts <= series.timestamps.back()) {
      throw CsvError(row, "timestamp " + std::to_string(*ts) + " does not increase");
    }
    series.timestamps.push_back(*ts);
    series.prices.push_back(*px);
  }
  if (series.prices.empty()) throw CsvError(0, "'" + path.string() + "' has no data rows");
  return series;
}

void save_csv(const PriceSeries& series, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << "timestamp,price\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    out << series.timestamps[k] << ',' << format_double(series.prices[k]) << '\n';
  }
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

void OuParams::validate() const {
  if (!(theta >= 0.0)) throw std::invalid_argument("theta must be nonnegative");
  if (!(sigma_noise >= 0.0)) throw std::invalid_argument("sigma must be nonnegative");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (!(theta * dt < 1.0)) throw std::invalid_argument("theta * dt must be < 1 for stability");
  if (n_steps < 1) throw std::invalid_argument("n_steps must be >= 1");
  if (!std::isfinite(mu_level) || !std::isfinite(x0)) {
    throw std::invalid_argument("mu and x0 must be finite");
  }
}

std::vector<double> generate_ou_path(const OuParams& params) {
  params.validate();
  Rng rng(params.seed);
  const double diffusion = params.sigma_noise * std::sqrt(params.dt);
  std::vector<double> path(params.n_steps);
  path[0] = params.x0;
  for (std::size_t k = 1; k < params.n_steps; ++k) {
    const double x = path[k - 1];
    path[k] = x + params.theta * (params.mu_level - x) * params.dt + diffusion * rng.normal();
  }
  return path;
}

PriceSeries generate_ou(const OuParams& params, std::string symbol) {
  const auto path = generate_ou_path(params);
  PriceSeries series;
  series.symbol = std::move(symbol);
  series.timestamps.resize(path.size());
  series.prices.resize(path.size());
  for (std::size_t k = 0; k < path.size(); ++k) {
    series.timestamps[k] = static_cast<std::int64_t>(k);
    series.prices[k] = std::exp(path[k]);
  }
  series.validate();
  return series;
}

}  // namespace rwm
