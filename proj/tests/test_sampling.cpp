#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "mvote/geometry.hpp"
#include "mvote/rng.hpp"
#include "mvote/sampling.hpp"

using namespace mvote;

TEST(Rng, DeriveIsDeterministicAndKeySensitive) {
  EXPECT_EQ(rng::derive(1, std::string_view("a"), 0.15), rng::derive(1, std::string_view("a"), 0.15));
  EXPECT_NE(rng::derive(1, std::string_view("a"), 0.15), rng::derive(2, std::string_view("a"), 0.15));
  EXPECT_NE(rng::derive(1, std::string_view("a"), 0.15), rng::derive(1, std::string_view("b"), 0.15));
  EXPECT_NE(rng::derive(1, std::string_view("a"), 0.15), rng::derive(1, std::string_view("a"), 0.2));
}

TEST(Rng, PoissonMomentsMatch) {
  for (double mean : {0.5, 7.0, 600.0}) {
    rng::Engine eng(42);
    const int n = 20000;
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double k = static_cast<double>(rng::poisson(eng, mean));
      s += k, s2 += k * k;
    }
    const double m = s / n, var = s2 / n - m * m;
    EXPECT_NEAR(m, mean, 4.0 * std::sqrt(mean / n));
    EXPECT_NEAR(var / mean, 1.0, 0.05);
  }
}

TEST(Sampling, CountIsPoisson) {
  const double lambda = 600.0;
  const int trials = 2000;
  double s = 0.0, s2 = 0.0;
  for (int t = 0; t < trials; ++t) {
    const double n = static_cast<double>(sample_field(lambda, 1000 + t).size());
    s += n, s2 += n * n;
  }
  const double m = s / trials, var = s2 / trials - m * m;
  EXPECT_NEAR(m, lambda, 4.0 * std::sqrt(lambda / trials));
  EXPECT_NEAR(var / lambda, 1.0, 0.1);
}

TEST(Sampling, Deterministic) {
  const auto a = sample_field(2500, 99);
  const auto b = sample_field(2500, 99);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a.sensors[i].pos.x, b.sensors[i].pos.x);
    EXPECT_EQ(a.sensors[i].pos.y, b.sensors[i].pos.y);
    EXPECT_EQ(a.sensors[i].id, i);
  }
  EXPECT_NE(sample_field(2500, 100).sensors[0].pos.x, a.sensors[0].pos.x);
}

TEST(Sampling, PositionsUniformChiSquare) {
  const auto f = sample_field(40000, 5);
  const int bins = 10;
  std::vector<int> counts(bins * bins, 0);
  for (const auto& s : f.sensors) {
    ASSERT_GE(s.pos.x, 0.0);
    ASSERT_LT(s.pos.x, 1.0);
    ASSERT_GE(s.pos.y, 0.0);
    ASSERT_LT(s.pos.y, 1.0);
    ++counts[static_cast<int>(s.pos.x * bins) * bins + static_cast<int>(s.pos.y * bins)];
  }
  const double expected = static_cast<double>(f.size()) / (bins * bins);
  double chi2 = 0.0;
  for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
  // 99 degrees of freedom, 0.999 quantile is about 148
  EXPECT_LT(chi2, 148.0);
}

TEST(Sampling, CoordinatesUncorrelated) {
  const auto f = sample_field(20000, 6);
  double sx = 0, sy = 0, sxy = 0, sxx = 0, syy = 0;
  for (const auto& s : f.sensors) {
    sx += s.pos.x, sy += s.pos.y, sxy += s.pos.x * s.pos.y, sxx += s.pos.x * s.pos.x, syy += s.pos.y * s.pos.y;
  }
  const double n = static_cast<double>(f.size());
  const double cov = sxy / n - sx / n * sy / n;
  const double corr = cov / std::sqrt((sxx / n - sx * sx / n / n) * (syy / n - sy * sy / n / n));
  EXPECT_LT(std::abs(corr), 4.0 / std::sqrt(n));
}

TEST(Measurements, TruthAndFlipRate) {
  const auto region = square_region();
  const double p = 0.15;
  const auto f = assign_measurements(sample_field(20000, 8), region, p, 77);
  std::size_t flips = 0;
  for (const auto& s : f.sensors) {
    EXPECT_EQ(s.truth, region.contains(s.pos));
    flips += s.measured != s.truth;
  }
  const double n = static_cast<double>(f.size());
  EXPECT_NEAR(flips / n, p, 4.0 * std::sqrt(p * (1 - p) / n));
  EXPECT_DOUBLE_EQ(f.p, p);
}

TEST(Measurements, ZeroNoiseIsExact) {
  const auto region = square_region();
  const auto f = assign_measurements(sample_field(1000, 9), region, 0.0, 1);
  for (const auto& s : f.sensors) EXPECT_EQ(s.measured, s.truth);
}

TEST(Measurements, RejectsOutOfRangeP) {
  EXPECT_THROW(assign_measurements(sample_field(100, 1), square_region(), 0.6, 1), std::invalid_argument);
  EXPECT_THROW(assign_measurements(sample_field(100, 1), square_region(), -0.1, 1), std::invalid_argument);
  EXPECT_THROW(sample_field(0.0, 1), std::invalid_argument);
}

TEST(Measurements, FieldCsv) {
  const auto f = assign_measurements(sample_field(50, 2), square_region(), 0.1, 3);
  std::ostringstream os;
  write_field_csv(os, f);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "id,x,y,truth,measured");
  std::size_t rows = 0;
  while (std::getline(is, line)) ++rows;
  EXPECT_EQ(rows, f.size());
}
