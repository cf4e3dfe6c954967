#include "rwm/report_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string_view>
#include <system_error>

#include "json.hpp"
#include "rwm/errors.hpp"

namespace rwm {

using nlohmann::json;

namespace {

constexpr std::string_view kReportFile = "report.json";
constexpr std::string_view kCurveFile = "regret_curve.csv";
constexpr std::string_view kTradesFile = "trades.csv";

std::string g17(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << contents;
  out.close();
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

void to_json(json& j, const ExpertSpec& spec) {
  j = json{{"gamma1", spec.gamma1}, {"gamma2", spec.gamma2}, {"window", spec.stats_window}};
}

void from_json(const json& j, ExpertSpec& spec) {
  j.at("gamma1").get_to(spec.gamma1);
  j.at("gamma2").get_to(spec.gamma2);
  j.at("window").get_to(spec.stats_window);
}

void to_json(json& j, const TradeEvent& e) {
  j = json{{"index", e.index},       {"timestamp", e.timestamp}, {"action", to_string(e.action)},
           {"price", e.price},       {"s_score", e.s_score}};
}

void from_json(const json& j, TradeEvent& e) {
  j.at("index").get_to(e.index);
  j.at("timestamp").get_to(e.timestamp);
  e.action = trade_action_from_string(j.at("action").get<std::string>());
  j.at("price").get_to(e.price);
  j.at("s_score").get_to(e.s_score);
}

void to_json(json& j, const RegretReport& r) {
  j = json{{"horizon", r.horizon},
           {"cum_algo_loss", r.cum_algo_loss},
           {"min_expert_loss", r.min_expert_loss},
           {"best_expert_index", r.best_expert_index},
           {"regret", r.regret},
           {"bound_general", r.bound_general},
           {"bound_sqrt", r.bound_sqrt}};
}

void from_json(const json& j, RegretReport& r) {
  j.at("horizon").get_to(r.horizon);
  j.at("cum_algo_loss").get_to(r.cum_algo_loss);
  j.at("min_expert_loss").get_to(r.min_expert_loss);
  j.at("best_expert_index").get_to(r.best_expert_index);
  j.at("regret").get_to(r.regret);
  j.at("bound_general").get_to(r.bound_general);
  j.at("bound_sqrt").get_to(r.bound_sqrt);
}

void to_json(json& j, const EpochRecord& e) {
  j = json{{"epoch", e.epoch},
           {"first_round", e.first_round},
           {"planned_length", e.planned_length},
           {"length", e.length},
           {"beta", e.beta},
           {"algo_loss", e.algo_loss},
           {"min_expert_loss", e.min_expert_loss}};
}

void from_json(const json& j, EpochRecord& e) {
  j.at("epoch").get_to(e.epoch);
  j.at("first_round").get_to(e.first_round);
  j.at("planned_length").get_to(e.planned_length);
  j.at("length").get_to(e.length);
  j.at("beta").get_to(e.beta);
  j.at("algo_loss").get_to(e.algo_loss);
  j.at("min_expert_loss").get_to(e.min_expert_loss);
}

void to_json(json& j, const ExpertSummary& e) {
  j = json{{"spec", e.spec},
           {"cum_loss", e.cum_loss},
           {"cum_return", e.cum_return},
           {"final_probability", e.final_probability},
           {"trades", e.trades}};
}

void from_json(const json& j, ExpertSummary& e) {
  j.at("spec").get_to(e.spec);
  j.at("cum_loss").get_to(e.cum_loss);
  j.at("cum_return").get_to(e.cum_return);
  j.at("final_probability").get_to(e.final_probability);
  j.at("trades").get_to(e.trades);
}

void to_json(json& j, const EnsembleSummary& e) {
  j = json{{"cum_return", e.cum_return},
           {"beta", e.beta},
           {"final_distribution", e.final_distribution},
           {"epochs", e.epochs},
           {"sample_counts", e.sample_counts}};
}

void from_json(const json& j, EnsembleSummary& e) {
  j.at("cum_return").get_to(e.cum_return);
  j.at("beta").get_to(e.beta);
  j.at("final_distribution").get_to(e.final_distribution);
  j.at("epochs").get_to(e.epochs);
  j.at("sample_counts").get_to(e.sample_counts);
}

namespace {

json config_json(const BacktestReport& report) {
  const BacktestConfig& c = report.config;
  return json{{"gamma1", c.gamma1_values},
              {"gamma2", c.gamma2_values},
              {"window", c.window},
              {"loss_mode", to_string(c.loss_mode)},
              {"return_cap", c.return_cap},
              {"beta_override", c.beta_override ? json(*c.beta_override) : json(nullptr)},
              {"horizon_policy", to_string(c.horizon_policy)},
              {"allocation", to_string(c.allocation)},
              {"seed", c.seed},
              {"series", {{"symbol", report.symbol}, {"length", report.series_length}}}};
}

void read_config(const json& j, BacktestReport& report) {
  BacktestConfig& c = report.config;
  j.at("gamma1").get_to(c.gamma1_values);
  j.at("gamma2").get_to(c.gamma2_values);
  j.at("window").get_to(c.window);
  c.loss_mode = loss_mode_from_string(j.at("loss_mode").get<std::string>());
  j.at("return_cap").get_to(c.return_cap);
  const auto& beta = j.at("beta_override");
  c.beta_override = beta.is_null() ? std::nullopt : std::optional<double>(beta.get<double>());
  c.horizon_policy = horizon_policy_from_string(j.at("horizon_policy").get<std::string>());
  c.allocation = allocation_from_string(j.at("allocation").get<std::string>());
  j.at("seed").get_to(c.seed);
  j.at("series").at("symbol").get_to(report.symbol);
  j.at("series").at("length").get_to(report.series_length);
}

std::string curve_csv(const BacktestReport& report) {
  std::string out = "t,algo_loss,min_loss,regret,sqrt_bound\n";
  for (const auto& p : report.curve) {
    out += std::to_string(p.t) + ',' + g17(p.algo_loss) + ',' + g17(p.min_loss) + ',' +
           g17(p.regret) + ',' + g17(p.sqrt_bound) + '\n';
  }
  return out;
}

std::string trades_csv(const BacktestReport& report) {
  std::string out = "expert,gamma1,gamma2,index,timestamp,action,price,s_score\n";
  for (std::size_t i = 0; i < report.experts.size(); ++i) {
    const auto& e = report.experts[i];
    for (const auto& trade : e.trades) {
      out += std::to_string(i) + ',' + g17(e.spec.gamma1) + ',' + g17(e.spec.gamma2) + ',' +
             std::to_string(trade.index) + ',' + std::to_string(trade.timestamp) + ',' +
             to_string(trade.action) + ',' + g17(trade.price) + ',' + g17(trade.s_score) + '\n';
    }
  }
  return out;
}

std::vector<CurvePoint> parse_curve(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  std::string line;
  std::getline(in, line);
  std::vector<CurvePoint> curve;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ++row;
    CurvePoint p;
    unsigned long long t = 0;
    if (std::sscanf(line.c_str(), "%llu,%lf,%lf,%lf,%lf", &t, &p.algo_loss, &p.min_loss,
                    &p.regret, &p.sqrt_bound) != 5) {
      throw CsvError(row, "malformed regret curve line in '" + path.string() + "'");
    }
    p.t = static_cast<std::size_t>(t);
    curve.push_back(p);
  }
  return curve;
}

}  // namespace

std::string report_json_text(const BacktestReport& report) {
  json j;
  j["schema_version"] = report.schema_version;
  j["config"] = config_json(report);
  j["final"] = report.final;
  j["curve_path"] = kCurveFile;
  j["experts"] = report.experts;
  j["ensemble"] = report.ensemble;
  return j.dump(2) + '\n';
}

EmittedFiles emit_report(const BacktestReport& report, const std::filesystem::path& directory) {
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec || !std::filesystem::is_directory(directory)) {
    throw IoError("cannot create output directory '" + directory.string() + "'" +
                  (ec ? ": " + ec.message() : std::string{}));
  }
  EmittedFiles files{directory / kReportFile, directory / kCurveFile, directory / kTradesFile};
  write_file(files.report_json, report_json_text(report));
  write_file(files.regret_curve_csv, curve_csv(report));
  write_file(files.trades_csv, trades_csv(report));
  return files;
}

BacktestReport read_report(const std::filesystem::path& directory) {
  const auto path = directory / kReportFile;
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw IoError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
  BacktestReport report;
  j.at("schema_version").get_to(report.schema_version);
  if (report.schema_version != kReportSchemaVersion) {
    throw std::invalid_argument("unsupported report schema '" + report.schema_version + "'");
  }
  read_config(j.at("config"), report);
  j.at("final").get_to(report.final);
  j.at("experts").get_to(report.experts);
  j.at("ensemble").get_to(report.ensemble);
  report.curve = parse_curve(directory / j.at("curve_path").get<std::string>());
  return report;
}

}  // namespace rwm
