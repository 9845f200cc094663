#pragma once

// Simulation configuration: region descriptors, the flat key-value config
// format, and validation.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "mvote/geometry.hpp"
#include "mvote/vote.hpp"

namespace mvote {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Serializable description of an event region. Thin rectangles and combs are
/// sized from the neighborhood radius, so the concrete region depends on r.
struct RegionSpec {
  enum class Type { RoundedRect, ThinRect, Comb };
  Type type = Type::RoundedRect;
  std::string name = "xs";
  double cx = 0.5, cy = 0.5;
  double width = 0.4, height = 0.4;
  double corner_radius = 0.1;
  double length = 0.4;  // comb only

  static RegionSpec xs() { return {}; }
  static RegionSpec xl() {
    RegionSpec s;
    s.name = "xl";
    s.width = 0.8;
    s.height = 0.2;
    return s;
  }
  static RegionSpec thin() {
    RegionSpec s;
    s.type = Type::ThinRect;
    s.name = "thin";
    return s;
  }
  static RegionSpec comb(double length) {
    RegionSpec s;
    s.type = Type::Comb;
    s.name = "comb";
    s.length = length;
    return s;
  }

  /// Preset by name: xs, xl, thin, comb (comb uses length 0.4).
  static RegionSpec preset(std::string_view name) {
    if (name == "xs") return xs();
    if (name == "xl") return xl();
    if (name == "thin" || name == "thin_rect") return thin();
    if (name == "comb") return comb(0.4);
    throw ConfigError("unknown region preset '" + std::string(name) + "'");
  }

  const char* type_name() const {
    switch (type) {
      case Type::RoundedRect: return "rounded_rect";
      case Type::ThinRect: return "thin_rect";
      default: return "comb";
    }
  }
};

inline EventRegion make_region(const RegionSpec& spec, double r) {
  switch (spec.type) {
    case RegionSpec::Type::RoundedRect:
      return make_rounded_rect({{spec.cx, spec.cy}, spec.width, spec.height, spec.corner_radius});
    case RegionSpec::Type::ThinRect:
      return build_thin_rectangle(r);
    default:
      return build_comb(r, spec.length);
  }
}

struct SimConfig {
  double lambda = 2500.0;
  double p = 0.15;
  double r = 0.05;
  RegionSpec region = RegionSpec::xs();
  VoteMode mode = VoteMode::single();
  std::uint64_t seed = 1;
  int trials = 1;
  int threads = 1;

  void validate() const {
    if (!(lambda > 0.0)) throw ConfigError("lambda must be positive");
    if (!(p >= 0.0 && p <= 0.5)) throw ConfigError("p must lie in [0, 0.5]");
    if (!(r > 0.0)) throw ConfigError("r must be positive");
    if (trials < 1) throw ConfigError("trials must be >= 1");
    if (threads < 1) throw ConfigError("threads must be >= 1");
    if (mode.is_multi() && !(mode.c > 0.0)) throw ConfigError("c must be positive");
    try {
      (void)make_region(region, r);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("region: ") + e.what());
    }
  }
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': not a number: '" + v + "'");
  }
}

inline std::uint64_t to_u64(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size())
    throw ConfigError("key '" + key + "': not a non-negative integer: '" + v + "'");
  return out;
}

}  // namespace detail

using KeyValues = std::map<std::string, std::string>;

/// Parses `key = value` lines; `#` starts a comment, blank lines are ignored.
inline KeyValues parse_key_values(std::istream& in) {
  KeyValues kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const std::string t = detail::trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = detail::trim(std::string_view(t).substr(0, eq));
    const std::string val = detail::trim(std::string_view(t).substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    kv[key] = val;
  }
  return kv;
}

inline KeyValues load_key_values(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  return parse_key_values(in);
}

/// Applies key-value settings on top of `cfg`. Unknown keys are rejected.
/// `region.type` is applied first so geometry keys refine the chosen preset.
inline void apply_key_values(SimConfig& cfg, const KeyValues& kv) {
  if (auto it = kv.find("region.type"); it != kv.end()) {
    const std::string& t = it->second;
    if (t == "rounded_rect") {
      cfg.region.type = RegionSpec::Type::RoundedRect;
      cfg.region.name = "rounded_rect";
    } else if (t == "thin_rect") {
      cfg.region = RegionSpec::thin();
    } else {
      cfg.region = RegionSpec::preset(t);
    }
  }
  for (const auto& [key, val] : kv) {
    if (key == "region.type") continue;
    if (key == "lambda") cfg.lambda = detail::to_double(key, val);
    else if (key == "p") cfg.p = detail::to_double(key, val);
    else if (key == "r") cfg.r = detail::to_double(key, val);
    else if (key == "seed") cfg.seed = detail::to_u64(key, val);
    else if (key == "trials") cfg.trials = static_cast<int>(detail::to_u64(key, val));
    else if (key == "threads") cfg.threads = static_cast<int>(detail::to_u64(key, val));
    else if (key == "c") cfg.mode.c = detail::to_double(key, val);
    else if (key == "mode") {
      if (val == "single") cfg.mode.kind = VoteMode::Kind::SingleRound;
      else if (val == "multi") cfg.mode.kind = VoteMode::Kind::MultiRound;
      else throw ConfigError("mode must be 'single' or 'multi'");
    } else if (key == "region.cx") cfg.region.cx = detail::to_double(key, val);
    else if (key == "region.cy") cfg.region.cy = detail::to_double(key, val);
    else if (key == "region.width") cfg.region.width = detail::to_double(key, val);
    else if (key == "region.height") cfg.region.height = detail::to_double(key, val);
    else if (key == "region.corner_radius") cfg.region.corner_radius = detail::to_double(key, val);
    else if (key == "region.length") cfg.region.length = detail::to_double(key, val);
    else throw ConfigError("unknown config key '" + key + "'");
  }
}

/// Writes `cfg` back in the key-value format.
inline std::string to_key_values(const SimConfig& cfg) {
  std::ostringstream os;
  os.precision(17);
  os << "lambda = " << cfg.lambda << "\n"
     << "p = " << cfg.p << "\n"
     << "r = " << cfg.r << "\n"
     << "seed = " << cfg.seed << "\n"
     << "trials = " << cfg.trials << "\n"
     << "mode = " << cfg.mode.name() << "\n"
     << "c = " << cfg.mode.c << "\n"
     << "region.type = " << cfg.region.type_name() << "\n"
     << "region.cx = " << cfg.region.cx << "\n"
     << "region.cy = " << cfg.region.cy << "\n"
     << "region.width = " << cfg.region.width << "\n"
     << "region.height = " << cfg.region.height << "\n"
     << "region.corner_radius = " << cfg.region.corner_radius << "\n"
     << "region.length = " << cfg.region.length << "\n";
  return os.str();
}

}  // namespace mvote
