#include "rwm/market_data.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <numeric>

#include "oracles.hpp"
#include "rwm/errors.hpp"
#include "rwm/random.hpp"

namespace rwm {
namespace {

std::filesystem::path write_text(const std::filesystem::path& dir, const std::string& name,
                                 const std::string& text) {
  const auto path = dir / name;
  std::ofstream(path, std::ios::binary) << text;
  return path;
}

class CsvTest : public ::testing::Test {
 protected:
  void SetUp() override { dir_ = testing::fresh_temp_dir("csv"); }
  std::filesystem::path dir_;
};

TEST_F(CsvTest, LoadsValidFile) {
  const auto path = write_text(dir_, "ok.csv", "timestamp,price\n1,10.5\n2,11\n3,9.25\n");
  const auto series = load_csv(path);
  ASSERT_EQ(series.size(), 3u);
  EXPECT_EQ(series.symbol, "ok");
  EXPECT_EQ(series.timestamps, (std::vector<std::int64_t>{1, 2, 3}));
  EXPECT_EQ(series.prices, (std::vector<double>{10.5, 11, 9.25}));
}

TEST_F(CsvTest, SelectsNamedColumnAndAcceptsCrlf) {
  const auto path =
      write_text(dir_, "wide.csv", "open,timestamp,close\r\n1,100,2.5\r\n1,200,2.75\r\n");
  const auto series = load_csv(path, "close");
  EXPECT_EQ(series.prices, (std::vector<double>{2.5, 2.75}));
  EXPECT_EQ(series.timestamps, (std::vector<std::int64_t>{100, 200}));
}

TEST_F(CsvTest, NonPositivePriceNamesRow) {
  const auto path = write_text(dir_, "neg.csv", "timestamp,price\n1,10\n2,-5\n3,4\n");
  try {
    load_csv(path);
    FAIL() << "expected CsvError";
  } catch (const CsvError& e) {
    EXPECT_EQ(e.row(), 2u);
    EXPECT_NE(std::string(e.what()).find("row 2"), std::string::npos);
  }
}

TEST_F(CsvTest, DuplicateTimestampNamesSecondRow) {
  const auto path =
      write_text(dir_, "dup.csv", "timestamp,price\n1,10\n2,10\n3,10\n4,10\n4,10\n");
  try {
    load_csv(path);
    FAIL() << "expected CsvError";
  } catch (const CsvError& e) {
    EXPECT_EQ(e.row(), 5u);
  }
}

TEST_F(CsvTest, Errors) {
  EXPECT_THROW(load_csv(dir_ / "missing.csv"), IoError);
  EXPECT_THROW(load_csv(write_text(dir_, "empty.csv", "timestamp,price\n")), CsvError);
  EXPECT_THROW(load_csv(write_text(dir_, "nohdr.csv", "")), CsvError);
  EXPECT_THROW(load_csv(write_text(dir_, "nocol.csv", "timestamp,close\n1,2\n")), CsvError);
  EXPECT_THROW(load_csv(write_text(dir_, "junk.csv", "timestamp,price\n1,abc\n")), CsvError);
  EXPECT_THROW(load_csv(write_text(dir_, "short.csv", "timestamp,price\n1\n")), CsvError);
  EXPECT_THROW(load_csv(write_text(dir_, "ts.csv", "timestamp,price\n1.5,2\n")), CsvError);
}

TEST_F(CsvTest, SaveLoadRoundTripIsBitExact) {
  OuParams params;
  params.n_steps = 500;
  params.sigma_noise = 0.3;
  params.seed = 99;
  const auto series = generate_ou(params);
  save_csv(series, dir_ / "rt.csv");
  auto loaded = load_csv(dir_ / "rt.csv", "price", series.symbol);
  EXPECT_EQ(loaded, series);
}

TEST(Ou, ConstantWithoutDynamics) {
  OuParams params{.theta = 0.0, .mu_level = 3.0, .sigma_noise = 0.0, .x0 = 1.0,
                  .dt = 0.1, .n_steps = 20, .seed = 1};
  const auto series = generate_ou(params);
  ASSERT_EQ(series.size(), 20u);
  for (double p : series.prices) EXPECT_EQ(p, std::exp(1.0));
}

TEST(Ou, DeterministicHalvingRecursion) {
  OuParams params{.theta = 0.5, .mu_level = 0.0, .sigma_noise = 0.0, .x0 = 1.0,
                  .dt = 1.0, .n_steps = 6, .seed = 7};
  const auto path = generate_ou_path(params);
  EXPECT_EQ(path, (std::vector<double>{1, 0.5, 0.25, 0.125, 0.0625, 0.03125}));
  const auto series = generate_ou(params);
  EXPECT_EQ(series.prices[3], std::exp(0.125));
  EXPECT_EQ(series.timestamps.back(), 5);
}

TEST(Ou, SameSeedSameSeries) {
  OuParams params;
  params.seed = 11;
  EXPECT_EQ(generate_ou(params), generate_ou(params));
  OuParams other = params;
  other.seed = 12;
  EXPECT_NE(generate_ou(params).prices, generate_ou(other).prices);
}

TEST(Ou, RejectsInvalidParams) {
  OuParams params;
  params.theta = 0.5;
  params.dt = 3.0;
  EXPECT_THROW(generate_ou(params), std::invalid_argument);
  params = OuParams{};
  params.sigma_noise = -1.0;
  EXPECT_THROW(generate_ou(params), std::invalid_argument);
  params = OuParams{};
  params.n_steps = 0;
  EXPECT_THROW(generate_ou(params), std::invalid_argument);
  params = OuParams{};
  params.dt = 0.0;
  EXPECT_THROW(generate_ou(params), std::invalid_argument);
}

TEST(Ou, NormalDrawsHaveUnitMoments) {
  Rng rng(3);
  double sum = 0.0, sq = 0.0;
  const int count = 200000;
  for (int k = 0; k < count; ++k) {
    const double z = rng.normal();
    sum += z;
    sq += z * z;
  }
  EXPECT_NEAR(sum / count, 0.0, 0.01);
  EXPECT_NEAR(sq / count, 1.0, 0.01);
}

TEST(Ou, MeanReversionStatistics) {
  for (unsigned seed : testing::kOuCheckSeeds) {
    OuParams params{.theta = 0.5, .mu_level = 0.0, .sigma_noise = 0.1, .x0 = 0.0,
                    .dt = 0.01, .n_steps = 100000, .seed = seed};
    const auto m = testing::sample_moments(generate_ou_path(params));
    const double ar = 1.0 - params.theta * params.dt;
    EXPECT_NEAR(m.mean, params.mu_level, 0.05) << "seed " << seed;
    EXPECT_GT(m.lag1_autocorrelation, 0.99 * ar - 0.01) << "seed " << seed;
    EXPECT_LT(m.lag1_autocorrelation, 0.99 * ar + 0.02) << "seed " << seed;
  }
}

TEST(PriceSeries, Validate) {
  PriceSeries s{"x", {1, 2}, {1.0, 2.0}};
  EXPECT_NO_THROW(s.validate());
  s.timestamps = {2, 2};
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = PriceSeries{"x", {1, 2}, {1.0, 0.0}};
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = PriceSeries{"x", {1}, {1.0, 2.0}};
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = PriceSeries{};
  EXPECT_THROW(s.validate(), std::invalid_argument);
}

}  // namespace
}  // namespace rwm
