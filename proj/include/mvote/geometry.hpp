#pragma once

// Event regions inside the unit square, signed distances, the dubious zone
// (points within r of the region boundary) and good/bad sensor classification.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <variant>

#include "mvote/boundary.hpp"
#include "mvote/rng.hpp"

namespace mvote {

/// Rectangle centered at `center` with quarter-circle corners of radius `corner_radius`.
struct RoundedRect {
  Point center{0.5, 0.5};
  double width = 0.4;
  double height = 0.4;
  double corner_radius = 0.1;
};

/// Axis-aligned rectangle of height r/2 and width 4r built for radius r.
struct ThinRect {
  Point center{0.5, 0.5};
  double height = 0.0;
  double width = 0.0;
  double r = 0.0;
};

/// Serpentine band of thin strips (see build_comb).
struct Comb {
  double strip_height = 0.0;
  int strip_count = 0;
  double length = 0.0;
  double cap_radius = 0.0;
  double r = 0.0;
};

using Shape = std::variant<RoundedRect, ThinRect, Comb>;

struct BoundingBox {
  double xmin, ymin, xmax, ymax;
};

class EventRegion {
 public:
  EventRegion(Shape shape, BoundaryPath boundary, BoundingBox bbox, double area, int components,
              bool convex, double min_curvature_radius)
      : shape_(std::move(shape)),
        boundary_(std::move(boundary)),
        bbox_(bbox),
        area_(area),
        perimeter_(boundary_.length()),
        components_(components),
        convex_(convex),
        min_curvature_radius_(min_curvature_radius) {}

  const Shape& shape() const { return shape_; }
  const BoundaryPath& boundary() const { return boundary_; }
  const BoundingBox& bbox() const { return bbox_; }
  double area() const { return area_; }
  double perimeter() const { return perimeter_; }
  int components() const { return components_; }
  bool convex() const { return convex_; }
  double min_curvature_radius() const { return min_curvature_radius_; }

  std::string kind() const {
    switch (shape_.index()) {
      case 0: return "rounded_rect";
      case 1: return "thin_rect";
      default: return "comb";
    }
  }

  /// Signed Euclidean distance to the boundary, positive inside.
  double signed_distance(Point pt) const {
    if (const auto* rr = std::get_if<RoundedRect>(&shape_)) {
      return rounded_box_distance(pt, rr->center, 0.5 * rr->width, 0.5 * rr->height,
                                  rr->corner_radius);
    }
    if (const auto* tr = std::get_if<ThinRect>(&shape_)) {
      return rounded_box_distance(pt, tr->center, 0.5 * tr->width, 0.5 * tr->height, 0.0);
    }
    return boundary_.signed_distance(pt);
  }

  /// Closed-region membership: boundary points are inside.
  bool contains(Point pt) const { return signed_distance(pt) >= 0.0; }

  // Exact signed distance of a box with rounded corners, positive inside.
  static double rounded_box_distance(Point pt, Point c, double hx, double hy, double rho) {
    const double qx = std::abs(pt.x - c.x) - (hx - rho);
    const double qy = std::abs(pt.y - c.y) - (hy - rho);
    const double outside = std::hypot(std::max(qx, 0.0), std::max(qy, 0.0));
    const double inside = std::min(std::max(qx, qy), 0.0);
    return -(outside + inside - rho);
  }

 private:
  Shape shape_;
  BoundaryPath boundary_;
  BoundingBox bbox_;
  double area_;
  double perimeter_;
  int components_;
  bool convex_;
  double min_curvature_radius_;
};

// Counterclockwise boundary of an axis-aligned box with rounded corners.
inline BoundaryPath rounded_box_boundary(Point c, double hx, double hy, double rho) {
  constexpr double pi = std::numbers::pi;
  const double x0 = c.x - hx, x1 = c.x + hx, y0 = c.y - hy, y1 = c.y + hy;
  BoundaryPath path;
  path.add(Segment{{x0 + rho, y0}, {x1 - rho, y0}});
  path.add(Arc{{x1 - rho, y0 + rho}, rho, -pi / 2, pi / 2});
  path.add(Segment{{x1, y0 + rho}, {x1, y1 - rho}});
  path.add(Arc{{x1 - rho, y1 - rho}, rho, 0.0, pi / 2});
  path.add(Segment{{x1 - rho, y1}, {x0 + rho, y1}});
  path.add(Arc{{x0 + rho, y1 - rho}, rho, pi / 2, pi / 2});
  path.add(Segment{{x0, y1 - rho}, {x0, y0 + rho}});
  path.add(Arc{{x0 + rho, y0 + rho}, rho, pi, pi / 2});
  return path;
}

inline EventRegion make_rounded_rect(const RoundedRect& rr) {
  if (!(rr.width > 0.0 && rr.height > 0.0))
    throw std::invalid_argument("rounded_rect: width and height must be positive");
  if (rr.corner_radius < 0.0 || rr.corner_radius > 0.5 * std::min(rr.width, rr.height))
    throw std::invalid_argument("rounded_rect: corner radius must lie in [0, min(width, height)/2]");
  const double hx = 0.5 * rr.width, hy = 0.5 * rr.height;
  const double area = rr.width * rr.height - (4.0 - std::numbers::pi) * rr.corner_radius * rr.corner_radius;
  return EventRegion(rr, rounded_box_boundary(rr.center, hx, hy, rr.corner_radius),
                     {rr.center.x - hx, rr.center.y - hy, rr.center.x + hx, rr.center.y + hy}, area, 1,
                     true, rr.corner_radius);
}

/// The 0.4 x 0.4 square with corner radius 0.1 centered in the unit square.
inline EventRegion square_region() { return make_rounded_rect({{0.5, 0.5}, 0.4, 0.4, 0.1}); }

/// The 0.8 x 0.2 rectangle with corner radius 0.1 centered in the unit square.
inline EventRegion long_region() { return make_rounded_rect({{0.5, 0.5}, 0.8, 0.2, 0.1}); }

/// Rectangle of height r/2 and width 4r centered in the unit square. Every
/// point of it lies within r of its boundary.
inline EventRegion build_thin_rectangle(double r) {
  if (!(r > 0.0)) throw std::invalid_argument("thin rectangle: r must be positive");
  if (4.0 * r >= 1.0) throw std::invalid_argument("thin rectangle: width 4r does not fit in the unit square");
  ThinRect tr{{0.5, 0.5}, 0.5 * r, 4.0 * r, r};
  const double hx = 0.5 * tr.width, hy = 0.5 * tr.height;
  return EventRegion(tr, rounded_box_boundary(tr.center, hx, hy, 0.0),
                     {0.5 - hx, 0.5 - hy, 0.5 + hx, 0.5 + hy}, tr.width * tr.height, 1, true, 0.0);
}

namespace detail {

// Rounded free end of a band of thickness `thickness`: a concave fillet, a
// disk-shaped bulb and a second fillet, all of radius `radius`. Goes from
// end - n*thickness/2 to end + n*thickness/2 where n is the left normal of `out`.
inline void add_bulb_cap(BoundaryPath& path, Point end, Point out, double thickness, double radius) {
  const Point left{-out.y, out.x};
  const double half = 0.5 * thickness;
  const double rise = half + radius;                           // fillet center offset across the band
  const double reach = std::sqrt(4.0 * radius * radius - rise * rise);  // bulb center offset along the band
  const double phi = std::atan2(rise, reach);
  const double heading = std::atan2(out.y, out.x);
  const Point bulb = end + reach * out;
  const Point right_fillet = end - rise * left;
  const Point left_fillet = end + rise * left;
  // angles below are relative to `heading`
  const double turn = std::numbers::pi / 2 - phi;
  path.add(Arc{right_fillet, radius, heading + std::numbers::pi / 2, -turn});
  path.add(Arc{bulb, radius, heading - (std::numbers::pi - phi), 2.0 * (std::numbers::pi - phi)});
  path.add(Arc{left_fillet, radius, heading - phi, -turn});
}

}  // namespace detail

/// Non-convex serpentine region whose boundary has radius of curvature >= r
/// everywhere. Strips of height r/2 have lengths l, l-4r, ..., 4r; consecutive
/// strips are joined alternately on the right and left by half-annuli of inner
/// radius r, so any two strips are 2r apart, and the two free ends carry bulbs
/// of radius r attached through concave fillets of radius r.
inline EventRegion build_comb(double r, double length) {
  constexpr double pi = std::numbers::pi;
  if (!(r > 0.0) || !(length > 0.0)) throw std::invalid_argument("comb: r and length must be positive");
  const double ratio = length / (4.0 * r);
  const double count_d = std::round(ratio);
  if (count_d < 1.0 || std::abs(ratio - count_d) > 1e-9 * std::max(1.0, ratio))
    throw std::invalid_argument("comb: length must be a positive multiple of 4r");
  const int n = static_cast<int>(count_d);
  const double h = 0.5 * r;
  const double pitch = h + 2.0 * r;
  const double turn_mid = 0.5 * pitch;  // centerline radius of the U-turns
  const double cap_reach = std::sqrt(4.0 * r * r - (0.5 * h + r) * (0.5 * h + r));

  // strip extents in a local frame with strip 0 starting at x = 0, y = 0
  std::vector<double> left(n), right(n), yc(n);
  left[0] = 0.0;
  right[0] = length;
  for (int i = 0; i < n; ++i) {
    yc[i] = pitch * i;
    if (i == 0) continue;
    left[i] = left[i - 1];
    right[i] = right[i - 1];
    if (i % 2 == 1) left[i] += 4.0 * r;
    else right[i] -= 4.0 * r;
  }
  // local bounding box
  double xmin = -cap_reach - r, xmax = length + turn_mid + 0.5 * h;
  const int last = n - 1;
  if (last % 2 == 0) xmax = std::max(xmax, right[last] + cap_reach + r);
  const double ymin = -r, ymax = yc[last] + r;
  if (n == 1) xmax = length + cap_reach + r;
  const double ox = 0.5 - 0.5 * (xmin + xmax), oy = 0.5 - 0.5 * (ymin + ymax);
  if (xmax - xmin > 1.0 || ymax - ymin > 1.0)
    throw std::invalid_argument("comb: region does not fit in the unit square");

  auto P = [&](double x, double y) { return Point{x + ox, y + oy}; };
  auto heading = [](int i) { return i % 2 == 0 ? 1.0 : -1.0; };
  auto start_x = [&](int i) { return i % 2 == 0 ? left[i] : right[i]; };
  auto end_x = [&](int i) { return i % 2 == 0 ? right[i] : left[i]; };

  BoundaryPath path;
  // right-hand side of the centerline, walking forward
  for (int i = 0; i < n; ++i) {
    const double side = -heading(i) * 0.5 * h;  // right normal is -y when heading +x
    path.add(Segment{P(start_x(i), yc[i] + side), P(end_x(i), yc[i] + side)});
    if (i == last) break;
    const double cx = end_x(i), cy = yc[i] + turn_mid;
    if (i % 2 == 0) path.add(Arc{P(cx, cy), turn_mid + 0.5 * h, -pi / 2, pi});  // left turn, outer side
    else path.add(Arc{P(cx, cy), turn_mid - 0.5 * h, -pi / 2, -pi});            // right turn, inner side
  }
  detail::add_bulb_cap(path, P(end_x(last), yc[last]), {heading(last), 0.0}, h, r);
  // left-hand side, walking backward
  for (int i = last; i >= 0; --i) {
    const double side = heading(i) * 0.5 * h;
    path.add(Segment{P(end_x(i), yc[i] + side), P(start_x(i), yc[i] + side)});
    if (i == 0) break;
    const int j = i - 1;  // U-turn joining strip j to strip i, traversed in reverse
    const double cx = end_x(j), cy = yc[j] + turn_mid;
    if (j % 2 == 0) path.add(Arc{P(cx, cy), turn_mid - 0.5 * h, pi / 2, -pi});
    else path.add(Arc{P(cx, cy), turn_mid + 0.5 * h, pi / 2, pi});
  }
  detail::add_bulb_cap(path, P(start_x(0), yc[0]), {-1.0, 0.0}, h, r);

  Comb comb{h, n, length, r, r};
  const double area = path.area();
  return EventRegion(comb, std::move(path), {xmin + ox, ymin + oy, xmax + ox, ymax + oy}, area, 1, false, r);
}

/// Total area of the straight strips of a comb.
inline double comb_strip_area(const Comb& comb) {
  double total = 0.0;
  for (int i = 0; i < comb.strip_count; ++i) total += comb.strip_height * (comb.length - 4.0 * comb.r * i);
  return total;
}

// ---------------------------------------------------------------------------
// Dubious zone

inline bool contains(const EventRegion& region, Point pt) { return region.contains(pt); }

/// Signed Euclidean distance to the boundary, positive inside.
inline double distance_to_boundary(const EventRegion& region, Point pt) { return region.signed_distance(pt); }

enum class ZoneLabel { OutsideZr_InX, OutsideZr_OutX, InZr_InX, InZr_OutX };

inline bool in_dubious_zone(double signed_dist, double r) { return std::abs(signed_dist) <= r; }

inline ZoneLabel zone_of(const EventRegion& region, Point pt, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("zone_of: r must be positive");
  const double d = region.signed_distance(pt);
  const bool inside = d >= 0.0;
  if (in_dubious_zone(d, r)) return inside ? ZoneLabel::InZr_InX : ZoneLabel::InZr_OutX;
  return inside ? ZoneLabel::OutsideZr_InX : ZoneLabel::OutsideZr_OutX;
}

struct ZoneArea {
  double area = 0.0;
  bool estimated = false;  // Monte Carlo estimate instead of the closed form
  bool clipped = false;    // the band reaches the boundary of the unit square
  double std_error = 0.0;
};

/// Monte Carlo estimate of area(Z_r ∩ Y) using one jittered sample per cell of
/// a grid x grid stratification of the unit square.
inline ZoneArea dubious_zone_area_mc(const EventRegion& region, double r, int grid = 1000,
                                     std::uint64_t seed = 0x5eed) {
  rng::Engine eng(rng::derive(seed, std::string_view("dubious-zone"), r));
  const double cell = 1.0 / grid;
  std::uint64_t hits = 0;
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      const Point pt{(i + rng::uniform01(eng)) * cell, (j + rng::uniform01(eng)) * cell};
      if (in_dubious_zone(region.signed_distance(pt), r)) ++hits;
    }
  }
  const double n = static_cast<double>(grid) * grid;
  const double a = hits / n;
  return {a, true, false, std::sqrt(a * (1.0 - a) / n)};
}

/// Area of Z_r. Closed form for rounded rectangles whose band stays inside the
/// unit square; Monte Carlo otherwise.
inline ZoneArea dubious_zone_area(const EventRegion& region, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("dubious_zone_area: r must be positive");
  const auto& bb = region.bbox();
  const bool clipped = bb.xmin - r < 0.0 || bb.ymin - r < 0.0 || bb.xmax + r > 1.0 || bb.ymax + r > 1.0;
  double w = 0.0, h = 0.0, rho = 0.0;
  bool closed_form = false;
  if (const auto* rr = std::get_if<RoundedRect>(&region.shape())) {
    w = rr->width, h = rr->height, rho = rr->corner_radius, closed_form = true;
  } else if (const auto* tr = std::get_if<ThinRect>(&region.shape())) {
    w = tr->width, h = tr->height, closed_form = true;
  }
  if (!closed_form || clipped) {
    ZoneArea est = dubious_zone_area_mc(region, r);
    est.clipped = clipped;
    return est;
  }
  constexpr double pi = std::numbers::pi;
  // outer band by Steiner's formula; inner band is the region minus its inner parallel body
  const double outer = region.perimeter() * r + pi * r * r;
  double inner_body = 0.0;
  const double wi = w - 2.0 * r, hi = h - 2.0 * r;
  if (wi > 0.0 && hi > 0.0) {
    const double rho_i = std::max(rho - r, 0.0);
    inner_body = wi * hi - (4.0 - pi) * rho_i * rho_i;
  }
  return {outer + region.area() - inner_body, false, false, 0.0};
}

// ---------------------------------------------------------------------------
// Good / bad classification

enum class Goodness { Good, Bad, NotInZr };

/// Arc-length position where the boundary enters the closed disk of radius r
/// around `pt` when traversed counterclockwise. Requires the nearest boundary
/// point to lie within r.
inline double boundary_entry(const BoundaryPath& bd, Point pt, double r) {
  const Projection near = bd.nearest(pt);
  const double step = r / 16.0;
  double inside_s = near.offset;
  double outside_s = inside_s;
  const double limit = bd.length();
  for (double walked = 0.0;; walked += step) {
    if (walked > limit) throw std::domain_error("boundary_entry: disk contains the whole boundary");
    outside_s = inside_s - step;
    if (dist(bd.point_at(outside_s), pt) > r) break;
    inside_s = outside_s;
  }
  // bisection: outside_s < inside_s
  while (inside_s - outside_s > 1e-12) {
    const double mid = 0.5 * (inside_s + outside_s);
    if (mid == inside_s || mid == outside_s) break;
    if (dist(bd.point_at(mid), pt) > r) outside_s = mid;
    else inside_s = mid;
  }
  return inside_s;
}

/// A sensor in Z_r is good when the antipode, in its radius-r disk, of the
/// boundary's entry point into that disk lies on the sensor's side of the
/// boundary. Defined for convex regions with radius of curvature >= r.
inline Goodness classify_good_bad(const EventRegion& region, Point pt, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("classify_good_bad: r must be positive");
  if (!region.convex() || region.min_curvature_radius() < r)
    throw std::invalid_argument("classify_good_bad: region must be convex with curvature radius >= r");
  const double d = region.signed_distance(pt);
  if (!in_dubious_zone(d, r)) return Goodness::NotInZr;
  if (d < 0.0) return Goodness::Good;
  const Point entry = region.boundary().point_at(boundary_entry(region.boundary(), pt, r));
  const Point antipode = 2.0 * pt - entry;
  return region.contains(antipode) ? Goodness::Good : Goodness::Bad;
}

}  // namespace mvote
