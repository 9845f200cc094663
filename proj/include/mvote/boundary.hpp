#pragma once

// Closed boundary curves made of line segments and circular arcs, traversed
// counterclockwise, with an arc-length parameterization.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <variant>
#include <vector>

namespace mvote {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Point, Point) = default;
};

inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }
inline double dist(Point a, Point b) { return norm(a - b); }
inline double dist2(Point a, Point b) {
  const double dx = a.x - b.x, dy = a.y - b.y;
  return dx * dx + dy * dy;
}
inline Point polar(double radius, double angle) {
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

struct Segment {
  Point a;
  Point b;

  double length() const { return dist(a, b); }
  Point start() const { return a; }
  Point end() const { return b; }
  Point at(double s) const {
    const double len = length();
    if (len == 0.0) return a;
    return a + (s / len) * (b - a);
  }
};

/// Circular arc starting at `start_angle`; positive sweep is counterclockwise.
struct Arc {
  Point center;
  double radius = 0.0;
  double start_angle = 0.0;
  double sweep = 0.0;

  double length() const { return radius * std::abs(sweep); }
  double end_angle() const { return start_angle + sweep; }
  Point start() const { return center + polar(radius, start_angle); }
  Point end() const { return center + polar(radius, end_angle()); }
  Point at(double s) const {
    const double dir = sweep >= 0.0 ? 1.0 : -1.0;
    return center + polar(radius, start_angle + dir * s / radius);
  }
  /// Offset (in radians, >= 0) of `angle` from the start, measured along the sweep direction.
  double angular_offset(double angle) const {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double t = sweep >= 0.0 ? angle - start_angle : start_angle - angle;
    t = std::fmod(t, two_pi);
    if (t < 0.0) t += two_pi;
    return t;
  }
};

using Piece = std::variant<Segment, Arc>;

inline double piece_length(const Piece& p) {
  return std::visit([](const auto& q) { return q.length(); }, p);
}
inline Point piece_start(const Piece& p) {
  return std::visit([](const auto& q) { return q.start(); }, p);
}
inline Point piece_end(const Piece& p) {
  return std::visit([](const auto& q) { return q.end(); }, p);
}
inline Point piece_at(const Piece& p, double s) {
  return std::visit([s](const auto& q) { return q.at(s); }, p);
}

/// Nearest point on a piece: distance and arc-length offset within the piece.
struct Projection {
  double distance = std::numeric_limits<double>::infinity();
  double offset = 0.0;
};

inline Projection project(const Segment& seg, Point pt) {
  const Point d = seg.b - seg.a;
  const double len2 = dot(d, d);
  double t = len2 > 0.0 ? dot(pt - seg.a, d) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  const Point foot = seg.a + t * d;
  return {dist(pt, foot), t * std::sqrt(len2)};
}

inline Projection project(const Arc& arc, Point pt) {
  const Point rel = pt - arc.center;
  const double rho = norm(rel);
  if (rho > 0.0) {
    const double off = arc.angular_offset(std::atan2(rel.y, rel.x));
    if (off <= std::abs(arc.sweep)) return {std::abs(rho - arc.radius), off * arc.radius};
  } else {
    return {arc.radius, 0.0};
  }
  const double d0 = dist(pt, arc.start());
  const double d1 = dist(pt, arc.end());
  if (d0 <= d1) return {d0, 0.0};
  return {d1, arc.length()};
}

/// A closed piecewise curve. Pieces must be chained end to start and the whole
/// curve oriented counterclockwise (interior on the left).
class BoundaryPath {
 public:
  BoundaryPath() = default;

  void add(const Piece& piece) {
    if (piece_length(piece) <= 0.0) return;
    cumulative_.push_back(length_);
    length_ += piece_length(piece);
    pieces_.push_back(piece);
    rebuild_crossing();
  }

  const std::vector<Piece>& pieces() const { return pieces_; }
  double length() const { return length_; }
  bool empty() const { return pieces_.empty(); }

  /// Largest gap between consecutive piece endpoints; ~0 for a well-formed loop.
  double closure_gap() const {
    double gap = 0.0;
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
      const auto& next = pieces_[(i + 1) % pieces_.size()];
      gap = std::max(gap, dist(piece_end(pieces_[i]), piece_start(next)));
    }
    return gap;
  }

  /// Point at arc length `s` from the start; wraps around.
  Point point_at(double s) const {
    if (pieces_.empty()) throw std::logic_error("empty boundary");
    s = std::fmod(s, length_);
    if (s < 0.0) s += length_;
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), s);
    const std::size_t i = static_cast<std::size_t>(std::distance(cumulative_.begin(), it)) - 1;
    return piece_at(pieces_[i], s - cumulative_[i]);
  }

  /// Unsigned distance to the curve and arc-length position of the nearest point.
  Projection nearest(Point pt) const {
    Projection best;
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
      const Projection pr = std::visit([pt](const auto& q) { return project(q, pt); }, pieces_[i]);
      if (pr.distance < best.distance) best = {pr.distance, cumulative_[i] + pr.offset};
    }
    return best;
  }

  double unsigned_distance(Point pt) const { return nearest(pt).distance; }

  /// Closed-region membership by ray crossing; points on the curve count as inside.
  bool contains(Point pt) const {
    if (unsigned_distance(pt) <= kOnCurve) return true;
    return crossing_parity(pt);
  }

  double signed_distance(Point pt) const {
    const double d = unsigned_distance(pt);
    if (d <= kOnCurve) return 0.0;
    return crossing_parity(pt) ? d : -d;
  }

  /// Enclosed area by Green's theorem (positive for counterclockwise curves).
  double area() const {
    double twice = 0.0;
    for (const auto& p : pieces_) {
      if (const auto* s = std::get_if<Segment>(&p)) {
        twice += s->a.x * s->b.y - s->b.x * s->a.y;
      } else {
        const auto& a = std::get<Arc>(p);
        const double t0 = a.start_angle, t1 = a.end_angle();
        twice += a.radius * (a.center.x * (std::sin(t1) - std::sin(t0)) -
                             a.center.y * (std::cos(t1) - std::cos(t0))) +
                 a.radius * a.radius * a.sweep;
      }
    }
    return 0.5 * twice;
  }

  static constexpr double kOnCurve = 1e-14;

 private:
  // y-monotone sub-piece used by the crossing test
  struct Monotone {
    double y0, y1;
    bool is_arc;
    Point a, b;        // segment endpoints
    Point center;      // arc data
    double radius;
    double side;       // +1: right half of the circle, -1: left half
  };

  void rebuild_crossing() {
    monotone_.clear();
    constexpr double pi = std::numbers::pi;
    for (const auto& p : pieces_) {
      if (const auto* s = std::get_if<Segment>(&p)) {
        monotone_.push_back({s->a.y, s->b.y, false, s->a, s->b, {}, 0.0, 0.0});
        continue;
      }
      const auto& arc = std::get<Arc>(p);
      // split at the top and bottom of the circle
      std::vector<double> cuts{arc.start_angle};
      const double lo = std::min(arc.start_angle, arc.end_angle());
      const double hi = std::max(arc.start_angle, arc.end_angle());
      std::vector<double> inner;
      for (double k = std::ceil((lo - pi / 2) / pi); pi / 2 + k * pi < hi; k += 1.0) {
        const double a = pi / 2 + k * pi;
        if (a > lo) inner.push_back(a);
      }
      if (arc.sweep < 0.0) std::reverse(inner.begin(), inner.end());
      cuts.insert(cuts.end(), inner.begin(), inner.end());
      cuts.push_back(arc.end_angle());
      for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
        const Point s0 = arc.center + polar(arc.radius, cuts[i]);
        const Point s1 = arc.center + polar(arc.radius, cuts[i + 1]);
        monotone_.push_back({s0.y, s1.y, true, s0, s1, arc.center, arc.radius,
                             std::cos(mid) >= 0.0 ? 1.0 : -1.0});
      }
    }
    // snap shared endpoints so the half-open rule counts every vertex exactly once
    for (std::size_t i = 0; i < monotone_.size(); ++i) {
      auto& next = monotone_[(i + 1) % monotone_.size()];
      next.y0 = monotone_[i].y1;
    }
  }

  bool crossing_parity(Point pt) const {
    bool inside = false;
    for (const auto& m : monotone_) {
      if ((m.y0 > pt.y) == (m.y1 > pt.y)) continue;
      double x;
      if (!m.is_arc) {
        x = m.a.x + (pt.y - m.y0) / (m.y1 - m.y0) * (m.b.x - m.a.x);
      } else {
        const double dy = pt.y - m.center.y;
        x = m.center.x + m.side * std::sqrt(std::max(0.0, m.radius * m.radius - dy * dy));
      }
      if (x > pt.x) inside = !inside;
    }
    return inside;
  }

  std::vector<Piece> pieces_;
  std::vector<double> cumulative_;
  double length_ = 0.0;
  std::vector<Monotone> monotone_;
};

}  // namespace mvote
