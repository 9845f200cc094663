#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mvote/bounds.hpp"
#include "mvote/geometry.hpp"

using namespace mvote;
using std::numbers::pi;

namespace {

// Distance from pt to a dense polyline sampling of the boundary.
double sampled_distance(const BoundaryPath& bd, Point pt, int samples = 20000) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) best = std::min(best, dist(bd.point_at(bd.length() * i / samples), pt));
  return best;
}

double raster_area(const EventRegion& region, int n = 800) {
  int hits = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) hits += region.contains({(i + 0.5) / n, (j + 0.5) / n});
  return static_cast<double>(hits) / (static_cast<double>(n) * n);
}

}  // namespace

TEST(RoundedRect, PresetAreasAndPerimeters) {
  const auto xs = square_region();
  const auto xl = long_region();
  const double corner_loss = (4.0 - pi) * 0.01;
  EXPECT_NEAR(xs.area(), 0.16 - corner_loss, 1e-12);
  EXPECT_NEAR(xl.area(), 0.16 - corner_loss, 1e-12);
  EXPECT_NEAR(xs.perimeter(), 0.2 * pi + 0.8, 1e-12);
  EXPECT_NEAR(xl.perimeter(), 0.2 * pi + 1.2, 1e-12);
  EXPECT_NEAR(xs.boundary().area(), xs.area(), 1e-12);
  EXPECT_NEAR(xs.boundary().closure_gap(), 0.0, 1e-12);
  EXPECT_TRUE(xs.convex());
  EXPECT_EQ(xs.components(), 1);
  EXPECT_DOUBLE_EQ(xs.min_curvature_radius(), 0.1);
}

TEST(RoundedRect, ContainmentAndDistanceExamples) {
  const auto xs = square_region();
  EXPECT_TRUE(xs.contains({0.5, 0.5}));
  EXPECT_NEAR(xs.signed_distance({0.5, 0.5}), 0.2, 1e-12);
  EXPECT_FALSE(xs.contains({0.05, 0.05}));
  EXPECT_TRUE(xs.contains({0.3, 0.5}));  // on the left edge
  EXPECT_NEAR(xs.signed_distance({0.3, 0.5}), 0.0, 1e-15);
  // the square corner (0.3, 0.3) is cut off by the rounded corner
  EXPECT_FALSE(xs.contains({0.3, 0.3}));
  EXPECT_NEAR(xs.signed_distance({0.3, 0.3}), -(0.1 * std::sqrt(2.0) - 0.1), 1e-12);
}

TEST(RoundedRect, FreeFunctionExamples) {
  const auto xs = square_region();
  EXPECT_TRUE(contains(xs, {0.5, 0.5}));
  EXPECT_FALSE(contains(xs, {0.95, 0.95}));
  EXPECT_FALSE(contains(xs, {0.32, 0.32}));  // |(-0.08, -0.08)| > 0.1 from the corner center
  EXPECT_TRUE(contains(xs, {0.33, 0.33}));
  EXPECT_NEAR(distance_to_boundary(xs, {0.5, 0.5}), 0.2, 1e-12);
  EXPECT_NEAR(distance_to_boundary(xs, {0.5, 0.75}), -0.05, 1e-12);
  EXPECT_NEAR(distance_to_boundary(xs, {0.7, 0.5}), 0.0, 1e-15);
}

TEST(RoundedRect, RejectsOversizedCorner) {
  EXPECT_THROW(make_rounded_rect({{0.5, 0.5}, 0.4, 0.2, 0.11}), std::invalid_argument);
}

TEST(RoundedRect, AreaMatchesRasterization) {
  EXPECT_NEAR(raster_area(square_region()), square_region().area(), 2e-3);
  EXPECT_NEAR(raster_area(long_region()), long_region().area(), 2e-3);
}

TEST(RoundedRect, AnalyticDistanceAgreesWithBoundaryPath) {
  std::mt19937_64 eng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto& region : {square_region(), long_region()}) {
    for (int i = 0; i < 2000; ++i) {
      const Point pt{u(eng), u(eng)};
      EXPECT_NEAR(region.signed_distance(pt), region.boundary().signed_distance(pt), 1e-12);
      EXPECT_EQ(region.contains(pt), region.boundary().contains(pt));
    }
  }
}

TEST(RoundedRect, DistanceMatchesDenseSampling) {
  std::mt19937_64 eng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto xs = square_region();
  for (int i = 0; i < 200; ++i) {
    const Point pt{u(eng), u(eng)};
    // chord error of the sampling is below 1e-6 at this density
    EXPECT_NEAR(std::abs(xs.signed_distance(pt)), sampled_distance(xs.boundary(), pt), 1e-6);
  }
}

TEST(Zone, LabelsAndTieRule) {
  const auto xs = square_region();
  const double r = 0.05;
  EXPECT_EQ(zone_of(xs, {0.5, 0.5}, r), ZoneLabel::OutsideZr_InX);
  EXPECT_EQ(zone_of(xs, {0.05, 0.5}, r), ZoneLabel::OutsideZr_OutX);
  EXPECT_EQ(zone_of(xs, {0.32, 0.5}, r), ZoneLabel::InZr_InX);
  EXPECT_EQ(zone_of(xs, {0.28, 0.5}, r), ZoneLabel::InZr_OutX);
  EXPECT_TRUE(in_dubious_zone(0.05, 0.05));
  EXPECT_TRUE(in_dubious_zone(-0.05, 0.05));
  EXPECT_FALSE(in_dubious_zone(0.0500001, 0.05));
}

TEST(Zone, ClosedFormExamples) {
  const auto xs = square_region();
  const double peri = xs.perimeter();
  // corner radius >= r: band area is exactly 2 r peri
  const ZoneArea a = dubious_zone_area(xs, 0.05);
  EXPECT_FALSE(a.estimated);
  EXPECT_NEAR(a.area, 2.0 * 0.05 * peri, 1e-12);
  // r > corner radius: inner parallel body becomes a sharp rectangle
  const double r = 0.12;
  const double outer = peri * r + pi * r * r;
  const double inner = xs.area() - 0.16 * 0.16;
  EXPECT_NEAR(dubious_zone_area(xs, r).area, outer + inner, 1e-12);
}

TEST(Zone, ClosedFormMatchesMonteCarlo) {
  for (const auto& region : {square_region(), long_region()}) {
    for (double r : {0.01, 0.05, 0.1, 0.12}) {
      const ZoneArea exact = dubious_zone_area(region, r);
      const ZoneArea mc = dubious_zone_area_mc(region, r);
      EXPECT_LE(std::abs(exact.area - mc.area), 3.0 * mc.std_error + 1e-12) << "r=" << r;
      EXPECT_LE(exact.area, 2.0 * r * region.perimeter() + pi * r * r + 1e-12);
    }
  }
}

TEST(Zone, ClippedBandFallsBackToEstimate) {
  const ZoneArea a = dubious_zone_area(long_region(), 0.15);
  EXPECT_TRUE(a.estimated);
  EXPECT_TRUE(a.clipped);
  EXPECT_LE(a.area, 1.0);
}

TEST(ThinRect, Dimensions) {
  const auto t = build_thin_rectangle(0.05);
  EXPECT_NEAR(t.perimeter(), 0.45, 1e-12);
  EXPECT_NEAR(t.area(), 0.2 * 0.025, 1e-12);
  const auto t2 = build_thin_rectangle(0.1);
  EXPECT_NEAR(t2.perimeter(), 0.9, 1e-12);
  EXPECT_THROW(build_thin_rectangle(0.3), std::invalid_argument);
}

TEST(ThinRect, WhollyInsideDubiousZone) {
  const double r = 0.05;
  const auto t = build_thin_rectangle(r);
  std::mt19937_64 eng(3);
  std::uniform_real_distribution<double> ux(0.4, 0.6), uy(0.4875, 0.5125);
  for (int i = 0; i < 1000; ++i) {
    const Point pt{ux(eng), uy(eng)};
    if (!t.contains(pt)) continue;
    EXPECT_TRUE(in_dubious_zone(t.signed_distance(pt), r));
  }
  EXPECT_NEAR(t.signed_distance({0.5, 0.5}), 0.0125, 1e-12);
}

TEST(Comb, Construction) {
  const double r = 0.05, len = 0.4;
  const auto comb = build_comb(r, len);
  const auto& shape = std::get<Comb>(comb.shape());
  EXPECT_EQ(shape.strip_count, 2);
  EXPECT_GE(comb_strip_area(shape), len * len / 16.0 - 1e-12);
  EXPECT_LE(comb.perimeter(), 1.68 * len * len / r);
  EXPECT_NEAR(comb.boundary().closure_gap(), 0.0, 1e-12);
  EXPECT_GE(comb.min_curvature_radius(), r);
  EXPECT_FALSE(comb.convex());
  EXPECT_EQ(comb.components(), 1);
  EXPECT_NEAR(comb.boundary().area(), comb.area(), 1e-12);
  EXPECT_NEAR(raster_area(comb, 1000), comb.area(), 2e-3);
}

TEST(Comb, RejectsBadLength) {
  EXPECT_THROW(build_comb(0.05, 0.45), std::invalid_argument);
  EXPECT_THROW(build_comb(0.05, 0.1), std::invalid_argument);
}

TEST(Comb, PiecesHaveCurvatureRadiusAtLeastR) {
  for (double r : {0.02, 0.05}) {
    const auto comb = build_comb(r, 0.4);
    for (const auto& piece : comb.boundary().pieces())
      if (const auto* a = std::get_if<Arc>(&piece)) EXPECT_GE(a->radius, r - 1e-12);
  }
}

TEST(Comb, StripInteriorsLieInDubiousZone) {
  const double r = 0.05;
  const auto comb = build_comb(r, 0.4);
  std::mt19937_64 eng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int inside = 0;
  for (int i = 0; i < 20000; ++i) {
    const Point pt{u(eng), u(eng)};
    if (!comb.contains(pt)) continue;
    ++inside;
    // the band is r/2 thick except at the bulbs, so interior depth never exceeds r
    EXPECT_LE(comb.signed_distance(pt), r + 1e-12);
  }
  EXPECT_GT(inside, 0);
}

TEST(Comb, DistanceMatchesDenseSampling) {
  const auto comb = build_comb(0.05, 0.4);
  std::mt19937_64 eng(13);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const Point pt{u(eng), u(eng)};
    EXPECT_NEAR(std::abs(comb.signed_distance(pt)), sampled_distance(comb.boundary(), pt, 40000), 1e-5);
  }
}

TEST(GoodBad, RequiresRoundConvexRegion) {
  EXPECT_THROW(classify_good_bad(build_comb(0.05, 0.4), {0.5, 0.5}, 0.05), std::invalid_argument);
  EXPECT_THROW(classify_good_bad(square_region(), {0.5, 0.5}, 0.2), std::invalid_argument);
}

TEST(GoodBad, Examples) {
  const auto xs = square_region();
  const double r = 0.05;
  EXPECT_EQ(classify_good_bad(xs, {0.5, 0.5}, r), Goodness::NotInZr);
  EXPECT_EQ(classify_good_bad(xs, {0.28, 0.5}, r), Goodness::Good);  // outside X
  EXPECT_EQ(classify_good_bad(xs, {0.32, 0.5}, r), Goodness::Good);  // next to a straight edge
  EXPECT_EQ(classify_good_bad(xs, {0.5, 0.31}, r), Goodness::Good);
}

// A point at distance a from the center of a corner arc of radius rho is bad
// exactly when a > sqrt(rho^2 - r^2), provided the relevant boundary is that arc.
TEST(GoodBad, CornerArcThreshold) {
  const auto xs = square_region();
  const double r = 0.05, rho = 0.1;
  const Point c{0.6, 0.6};  // upper-right corner arc center
  const double threshold = std::sqrt(rho * rho - r * r);
  const Point dir{std::sqrt(0.5), std::sqrt(0.5)};
  EXPECT_EQ(classify_good_bad(xs, c + (threshold + 0.005) * dir, r), Goodness::Bad);
  EXPECT_EQ(classify_good_bad(xs, c + (threshold - 0.005) * dir, r), Goodness::Good);
  EXPECT_EQ(classify_good_bad(xs, c + (rho - 0.0025) * dir, r), Goodness::Bad);
}

TEST(GoodBad, MatchesDenseAntipodeOracle) {
  const auto xs = square_region();
  const double r = 0.05;
  const auto& bd = xs.boundary();
  std::mt19937_64 eng(17);
  std::uniform_real_distribution<double> u(0.27, 0.73);
  int checked = 0;
  for (int i = 0; i < 4000 && checked < 300; ++i) {
    const Point pt{u(eng), u(eng)};
    const double d = xs.signed_distance(pt);
    if (!(d > 1e-3 && d < r - 1e-3)) continue;
    // oracle: walk the boundary counterclockwise in fine steps and take the
    // first sample that enters the disk after one that is outside
    const int n = 200000;
    Point entry{};
    bool found = false;
    bool prev_in = dist(bd.point_at(0.0), pt) <= r;
    for (int k = 1; k <= 2 * n && !found; ++k) {
      const Point q = bd.point_at(bd.length() * k / n);
      const bool in = dist(q, pt) <= r;
      if (in && !prev_in) entry = q, found = true;
      prev_in = in;
    }
    ASSERT_TRUE(found);
    const Point antipode = 2.0 * pt - entry;
    const double margin = xs.signed_distance(antipode);
    if (std::abs(margin) < 1e-4) continue;  // too close to call with the sampled entry
    const Goodness expect = margin >= 0.0 ? Goodness::Good : Goodness::Bad;
    EXPECT_EQ(classify_good_bad(xs, pt, r), expect) << pt.x << "," << pt.y;
    ++checked;
  }
  EXPECT_GT(checked, 100);
}

// Bad points on the inner parallel curve at depth delta r have total length at
// most min(3 pi r / delta, peri - 2 pi delta r).
TEST(GoodBad, BadLengthOnInnerParallelCurve) {
  const auto xs = square_region();
  const double r = 0.05;
  for (double delta : {0.1, 0.25, 0.5, 1.0}) {
    const double depth = delta * r;
    // inner parallel curve of the rounded square: same shape shrunk by depth
    const auto inner = make_rounded_rect({{0.5, 0.5}, 0.4 - 2 * depth, 0.4 - 2 * depth, 0.1 - depth});
    const auto& c = inner.boundary();
    const int n = 20000;
    double bad = 0.0;
    for (int k = 0; k < n; ++k) {
      const Point pt = c.point_at(c.length() * (k + 0.5) / n);
      if (classify_good_bad(xs, pt, r) == Goodness::Bad) bad += c.length() / n;
    }
    EXPECT_LE(bad, bounds::bad_segment_length_upper(r, delta, xs.perimeter()) + 1e-9) << "delta=" << delta;
  }
}
