// Command-line front end: simulate, sweep, bounds, worstcase, render.
//
// Exit codes: 0 success, 2 configuration error, 3 I/O error.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mvote/mvote.hpp"

namespace {

using namespace mvote;

constexpr int kConfigError = 2;
constexpr int kIoError = 3;

struct CommonOptions {
  std::string config_path;
  std::optional<double> lambda, p, r, c;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials, threads;
  std::optional<std::string> mode, region;

  void attach(CLI::App* app) {
    app->add_option("--config", config_path, "key = value config file");
    app->add_option("--lambda", lambda, "sensor intensity (expected sensors per unit area)");
    app->add_option("--p", p, "measurement error probability");
    app->add_option("--r", r, "neighborhood radius");
    app->add_option("--c", c, "round constant for multi-round voting");
    app->add_option("--seed", seed, "master seed");
    app->add_option("--trials", trials, "trials per configuration");
    app->add_option("--threads", threads, "worker threads");
    app->add_option("--mode", mode, "single | multi");
    app->add_option("--region", region, "region preset: xs | xl | thin | comb");
  }

  SimConfig resolve() const {
    SimConfig cfg;
    if (!config_path.empty()) apply_key_values(cfg, load_key_values(config_path));
    KeyValues kv;
    auto put = [&kv](const char* key, const auto& opt) {
      if (!opt) return;
      std::ostringstream os;
      os.precision(17);
      os << *opt;
      kv[key] = os.str();
    };
    put("lambda", lambda);
    put("p", p);
    put("r", r);
    put("c", c);
    put("seed", seed);
    put("trials", trials);
    put("threads", threads);
    put("mode", mode);
    put("region.type", region);
    apply_key_values(cfg, kv);
    cfg.validate();
    return cfg;
  }
};

/// "a,b,c" or "start:stop:step" (inclusive, evaluated as start + k*step).
std::vector<double> parse_values(const std::string& text) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    double a = 0, b = 0, step = 0;
    char c1 = 0, c2 = 0;
    std::istringstream is(text);
    if (!(is >> a >> c1 >> b >> c2 >> step) || c1 != ':' || c2 != ':' || !(step > 0.0))
      throw ConfigError("bad range '" + text + "', expected start:stop:step");
    const long n = std::lround(std::floor((b - a) / step + 1e-9));
    for (long k = 0; k <= n; ++k) out.push_back(std::round((a + k * step) * 1e12) / 1e12);
    return out;
  }
  std::istringstream is(text);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    try {
      out.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw ConfigError("bad number '" + tok + "' in list");
    }
  }
  if (out.empty()) throw ConfigError("empty value list");
  return out;
}

struct GridOptions {
  std::string r_values, p_values, lambda_values, regions;

  void attach(CLI::App* app) {
    app->add_option("--r-values", r_values, "radii: list or start:stop:step (default 0.005:0.1:0.005)");
    app->add_option("--p-values", p_values, "error rates (default 0.05:0.35:0.05)");
    app->add_option("--lambda-values", lambda_values, "intensities (default 2500,5000,10000,20000)");
    app->add_option("--regions", regions, "comma-separated region presets (default xs,xl)");
  }

  SweepAxes resolve() const {
    SweepAxes axes = SweepAxes::default_grid();
    if (!r_values.empty()) axes.r_values = parse_values(r_values);
    if (!p_values.empty()) axes.p_values = parse_values(p_values);
    if (!lambda_values.empty()) axes.lambda_values = parse_values(lambda_values);
    if (!regions.empty()) {
      axes.regions.clear();
      std::istringstream is(regions);
      std::string tok;
      while (std::getline(is, tok, ',')) axes.regions.push_back(RegionSpec::preset(tok));
    }
    return axes;
  }
};

class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_.open(path);
    if (!file_) throw IoError("cannot open '" + path + "' for writing");
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }
  void finish() {
    stream().flush();
    if (!stream()) throw IoError("write failed");
  }

 private:
  std::ofstream file_;
};

void print_summary(std::ostream& os, const SimConfig& cfg, const CellSummary& s) {
  os << "# lambda=" << cfg.lambda << " p=" << cfg.p << " r=" << cfg.r << " region=" << cfg.region.name
     << " mode=" << cfg.mode.name() << " trials=" << s.trials << " seed=" << cfg.seed << "\n";
  os << "metric,mean,se\n";
  auto row = [&os](const char* name, const Summary& v) {
    os << name << ',' << fmt_num(v.mean) << ',' << fmt_num(v.se) << '\n';
  };
  row("n_sensors", s.n_sensors);
  row("initial_errors", s.initial_errors);
  row("final_errors", s.final_errors);
  row("corrected", s.corrected);
  row("new_errors", s.new_errors);
  row("errors_in_zr", s.errors_in_zr);
  row("errors_in_zr_and_x", s.errors_in_zr_and_x);
  row("errors_outside_zr", s.errors_outside_zr);
  row("correction_rate", s.correction_rate);
  row("gross_correction_rate", s.gross_correction_rate);
}

std::vector<TrialMetrics> run_trials(const SimConfig& cfg) {
  std::vector<TrialMetrics> out;
  for (int t = 0; t < cfg.trials; ++t) out.push_back(run_trial(cfg, static_cast<std::uint64_t>(t)));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Majority-vote event boundary detection: simulation and bounds"};
  app.require_subcommand(1);

  CommonOptions common;
  GridOptions grid;
  std::string out_path;
  std::string field_dump;
  std::uint64_t trial_index = 0;
  double comb_length = 0.4;

  auto* simulate = app.add_subcommand("simulate", "run trials of one configuration and print metrics");
  common.attach(simulate);
  simulate->add_option("--out", out_path, "output file (default stdout)");
  simulate->add_option("--dump-field", field_dump, "write trial 0's sensor field as CSV");

  auto* sweep_cmd = app.add_subcommand("sweep", "parameter sweep to CSV");
  common.attach(sweep_cmd);
  grid.attach(sweep_cmd);
  sweep_cmd->add_option("--out", out_path, "output CSV (default stdout)");

  auto* bounds_cmd = app.add_subcommand("bounds", "analytical bounds over a grid to CSV");
  common.attach(bounds_cmd);
  grid.attach(bounds_cmd);
  bounds_cmd->add_option("--out", out_path, "output CSV (default stdout)");

  auto* worst = app.add_subcommand("worstcase", "thin-rectangle and comb lower-bound experiments");
  common.attach(worst);
  worst->add_option("--length", comb_length, "comb length (multiple of 4r)");
  worst->add_option("--out", out_path, "output CSV (default stdout)");

  auto* render = app.add_subcommand("render", "render one trial as SVG");
  common.attach(render);
  render->add_option("--trial", trial_index, "trial index");
  render->add_option("--out", out_path, "SVG path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    if (*simulate) {
      const SimConfig cfg = common.resolve();
      Output out(out_path);
      const auto metrics = run_trials(cfg);
      print_summary(out.stream(), cfg, aggregate(metrics));
      out.finish();
      if (!field_dump.empty()) {
        std::ofstream f(field_dump);
        if (!f) throw IoError("cannot open '" + field_dump + "' for writing");
        write_field_csv(f, simulate_trial(cfg, 0).field);
      }
    } else if (*sweep_cmd) {
      const SimConfig cfg = common.resolve();
      const SweepAxes axes = grid.resolve();
      const SweepResult res = sweep(cfg, axes);
      Output out(out_path);
      write_sweep_csv(out.stream(), res);
      out.finish();
    } else if (*bounds_cmd) {
      const SweepAxes axes = grid.resolve();
      Output out(out_path);
      write_bounds_csv(out.stream(), axes);
      out.finish();
    } else if (*worst) {
      SimConfig cfg = common.resolve();
      Output out(out_path);
      auto& os = out.stream();
      os << "region,lambda,p,r,trials,errors_in_zr_mean,errors_in_zr_se,predicted_lower,thm2_upper\n";
      for (const RegionSpec& spec : {RegionSpec::thin(), RegionSpec::comb(comb_length)}) {
        cfg.region = spec;
        cfg.validate();
        const CellSummary s = aggregate(run_trials(cfg));
        const EventRegion region = make_region(spec, cfg.r);
        // thin rectangle: about lambda r^2 interior sensors; comb: strips of area >= l^2/16
        const double predicted = spec.type == RegionSpec::Type::ThinRect
                                     ? cfg.lambda * cfg.r * cfg.r
                                     : cfg.lambda * comb_length * comb_length / 16.0;
        os << spec.name << ',' << fmt_num(cfg.lambda) << ',' << fmt_num(cfg.p) << ',' << fmt_num(cfg.r) << ','
           << s.trials << ',' << fmt_num(s.errors_in_zr.mean) << ',' << fmt_num(s.errors_in_zr.se) << ','
           << fmt_num(predicted) << ','
           << fmt_num(bounds::thm2_upper(cfg.lambda, cfg.r, region.perimeter(), region.components())) << '\n';
      }
      out.finish();
    } else if (*render) {
      const SimConfig cfg = common.resolve();
      const TrialRun run = simulate_trial(cfg, trial_index);
      GlyphCounts gc;
      const std::string svg = render_svg(run.field, run.region, &gc);
      std::ofstream f(out_path);
      if (!f) throw IoError("cannot open '" + out_path + "' for writing");
      f << svg;
      if (!f) throw IoError("write failed for '" + out_path + "'");
      std::cout << "correct=" << gc.correct << " corrected=" << gc.corrected << " still_wrong=" << gc.still_wrong
                << " newly_wrong=" << gc.newly_wrong << "\n";
    }
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIoError;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  }
  return 0;
}
