#pragma once

// SVG scatter plot of a trial: the unit square, the shaded event region and
// one glyph per sensor according to how its classification changed.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "mvote/config.hpp"
#include "mvote/geometry.hpp"
#include "mvote/sampling.hpp"
#include "mvote/vote.hpp"

namespace mvote {

enum class GlyphClass { Correct, Corrected, StillWrong, NewlyWrong };

inline GlyphClass glyph_class(bool truth, bool measured, bool decided) {
  const bool initially_right = measured == truth;
  const bool finally_right = decided == truth;
  if (initially_right) return finally_right ? GlyphClass::Correct : GlyphClass::NewlyWrong;
  return finally_right ? GlyphClass::Corrected : GlyphClass::StillWrong;
}

struct GlyphCounts {
  std::size_t correct = 0, corrected = 0, still_wrong = 0, newly_wrong = 0;
};

namespace detail {

struct Canvas {
  double size = 600.0;
  double margin = 20.0;
  double x(double ux) const { return margin + ux * size; }
  double y(double uy) const { return margin + (1.0 - uy) * size; }
};

inline std::string fmt2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string region_path_data(const EventRegion& region, const Canvas& cv) {
  std::ostringstream d;
  const auto& pieces = region.boundary().pieces();
  if (pieces.empty()) return {};
  const Point s = piece_start(pieces.front());
  d << "M" << fmt2(cv.x(s.x)) << ' ' << fmt2(cv.y(s.y));
  for (const auto& p : pieces) {
    if (const auto* seg = std::get_if<Segment>(&p)) {
      d << " L" << fmt2(cv.x(seg->b.x)) << ' ' << fmt2(cv.y(seg->b.y));
    } else {
      const auto& a = std::get<Arc>(p);
      const Point e = a.end();
      const double rad = a.radius * cv.size;
      // the y flip turns counterclockwise arcs into SVG's positive sweep
      d << " A" << fmt2(rad) << ' ' << fmt2(rad) << " 0 " << (std::abs(a.sweep) > std::numbers::pi ? 1 : 0) << ' '
        << (a.sweep > 0.0 ? 1 : 0) << ' ' << fmt2(cv.x(e.x)) << ' ' << fmt2(cv.y(e.y));
    }
  }
  d << " Z";
  return d.str();
}

}  // namespace detail

/// Renders `field` (with decisions filled in) over `region`. Glyphs: correct
/// sensors as small light dots, corrected as gray discs, still-wrong as black
/// boxes and newly-wrong as black discs.
inline std::string render_svg(const SensorField& field, const EventRegion& region, GlyphCounts* counts = nullptr) {
  const detail::Canvas cv;
  const double total = cv.size + 2.0 * cv.margin;
  const double legend_h = 90.0;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << total << "\" height=\"" << total + legend_h
     << "\" viewBox=\"0 0 " << total << ' ' << total + legend_h << "\">\n";
  os << "<rect x=\"" << cv.margin << "\" y=\"" << cv.margin << "\" width=\"" << cv.size << "\" height=\"" << cv.size
     << "\" fill=\"white\" stroke=\"black\"/>\n";
  os << "<path class=\"region\" d=\"" << detail::region_path_data(region, cv)
     << "\" fill=\"#d0d0d0\" stroke=\"#808080\"/>\n";
  GlyphCounts gc;
  os << "<g class=\"sensors\">\n";
  for (const auto& s : field.sensors) {
    const double x = cv.x(s.pos.x), y = cv.y(s.pos.y);
    switch (glyph_class(s.truth, s.measured, s.decided)) {
      case GlyphClass::Correct:
        ++gc.correct;
        os << "<circle class=\"correct\" cx=\"" << detail::fmt2(x) << "\" cy=\"" << detail::fmt2(y)
           << "\" r=\"1.2\" fill=\"#a0a0a0\"/>\n";
        break;
      case GlyphClass::Corrected:
        ++gc.corrected;
        os << "<circle class=\"corrected\" cx=\"" << detail::fmt2(x) << "\" cy=\"" << detail::fmt2(y)
           << "\" r=\"3.5\" fill=\"#707070\"/>\n";
        break;
      case GlyphClass::StillWrong:
        ++gc.still_wrong;
        os << "<rect class=\"still-wrong\" x=\"" << detail::fmt2(x - 3.5) << "\" y=\"" << detail::fmt2(y - 3.5)
           << "\" width=\"7\" height=\"7\" fill=\"black\"/>\n";
        break;
      case GlyphClass::NewlyWrong:
        ++gc.newly_wrong;
        os << "<circle class=\"newly-wrong\" cx=\"" << detail::fmt2(x) << "\" cy=\"" << detail::fmt2(y)
           << "\" r=\"3.5\" fill=\"black\"/>\n";
        break;
    }
  }
  os << "</g>\n";
  const double ly = total + 15.0;
  os << "<g class=\"legend\" font-family=\"sans-serif\" font-size=\"13\">\n"
     << "<circle cx=\"30\" cy=\"" << ly << "\" r=\"1.2\" fill=\"#a0a0a0\"/><text x=\"42\" y=\"" << ly + 4
     << "\">correct (" << gc.correct << ")</text>\n"
     << "<circle cx=\"30\" cy=\"" << ly + 20 << "\" r=\"3.5\" fill=\"#707070\"/><text x=\"42\" y=\"" << ly + 24
     << "\">corrected (" << gc.corrected << ")</text>\n"
     << "<rect x=\"26.5\" y=\"" << ly + 36.5 << "\" width=\"7\" height=\"7\" fill=\"black\"/><text x=\"42\" y=\""
     << ly + 44 << "\">still wrong (" << gc.still_wrong << ")</text>\n"
     << "<circle cx=\"30\" cy=\"" << ly + 60 << "\" r=\"3.5\" fill=\"black\"/><text x=\"42\" y=\"" << ly + 64
     << "\">newly wrong (" << gc.newly_wrong << ")</text>\n"
     << "</g>\n</svg>\n";
  if (counts) *counts = gc;
  return os.str();
}

inline GlyphCounts render_field(const SensorField& field, const VoteOutcome& outcome, const EventRegion& region,
                                const std::string& path) {
  GlyphCounts gc;
  const std::string svg = render_svg(apply_outcome(field, outcome), region, &gc);
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << svg;
  if (!out) throw IoError("write failed for '" + path + "'");
  return gc;
}

}  // namespace mvote
