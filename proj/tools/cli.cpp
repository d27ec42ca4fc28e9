#include "cli.hpp"

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "spin_atlas/catalog.hpp"
#include "spin_atlas/errors.hpp"
#include "spin_atlas/features.hpp"
#include "spin_atlas/report.hpp"
#include "spin_atlas/spec_io.hpp"
#include "spin_atlas/sweep.hpp"
#include "spin_atlas/thermal.hpp"
#include "spin_atlas/trace.hpp"

namespace spin_atlas::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

// Raised for flag combinations CLI11 cannot express; maps to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const std::set<std::string> kConfigKeys = {
    "system", "spec", "output", "format", "bmin", "bmax", "points", "temp", "thermal", "jump_threshold",
    "transfer_threshold", "gap_ceiling", "true_gap", "cluster_radius", "slopes", "feature", "tmin", "tmax",
    "tstep", "window", "seeds", "central", "prominence", "threads"};

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  if (!doc.is_object()) throw UsageError("config file '" + path + "' must hold a JSON object");
  for (const auto& [key, _] : doc.items()) {
    if (!kConfigKeys.count(key)) throw UsageError("unknown config key '" + key + "' in '" + path + "'");
  }
  return doc;
}

// Flag > config > default.
template <typename T>
T resolve(const CLI::Option* flag, const T& flag_value, const json& config, const char* key, const T& fallback) {
  if (flag && flag->count() > 0) return flag_value;
  if (config.contains(key)) {
    try {
      return config.at(key).get<T>();
    } catch (const json::exception& e) {
      throw UsageError(std::string("config key '") + key + "' has the wrong type: " + e.what());
    }
  }
  return fallback;
}

ThermalZfsModel thermal_from_config(const json& config) {
  ThermalZfsModel m;
  if (!config.contains("thermal")) return m;
  const json& t = config["thermal"];
  if (!t.is_object()) throw UsageError("config 'thermal' must be an object");
  for (const auto& [key, _] : t.items()) {
    static const std::set<std::string> keys = {"d0", "c1", "c2", "delta1", "delta2", "boltzmann"};
    if (!keys.count(key)) throw UsageError("unknown thermal key '" + key + "'");
  }
  m.d0 = t.value("d0", m.d0);
  m.c1 = t.value("c1", m.c1);
  m.c2 = t.value("c2", m.c2);
  m.delta1 = t.value("delta1", m.delta1);
  m.delta2 = t.value("delta2", m.delta2);
  m.boltzmann = t.value("boltzmann", m.boltzmann);
  if (!(m.d0 > 0.0) || !(m.delta1 > 0.0) || !(m.delta2 > 0.0) || !(m.boltzmann > 0.0)) {
    throw InvalidInput("thermal model needs d0, delta1, delta2 and boltzmann > 0");
  }
  return m;
}

void emit(const std::string& content, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << content;
    out.flush();
    return;
  }
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp-" + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw fs::filesystem_error("cannot open output for writing", tmp, std::make_error_code(std::errc::io_error));
    f << content;
    f.flush();
    if (!f) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw fs::filesystem_error("write failed", tmp, std::make_error_code(std::errc::io_error));
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw fs::filesystem_error("cannot move output into place", target, std::make_error_code(std::errc::io_error));
  }
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

// Options shared by the system-based subcommands.
struct SystemArgs {
  std::string system;
  std::string spec;
  CLI::Option* system_opt = nullptr;
  CLI::Option* spec_opt = nullptr;

  void add(CLI::App& app) {
    system_opt = app.add_option("--system", system, "Catalog system id (see `catalog`)");
    spec_opt = app.add_option("--spec", spec, "Spin-system JSON file")->check(CLI::ExistingFile);
  }
};

struct ResolvedSystem {
  SpinSystemSpec spec;
  const CatalogEntry* entry = nullptr;
};

ResolvedSystem resolve_system(const SystemArgs& a, const json& config) {
  const std::string system = resolve<std::string>(a.system_opt, a.system, config, "system", "");
  const std::string spec = resolve<std::string>(a.spec_opt, a.spec, config, "spec", "");
  if (system.empty() == spec.empty()) throw UsageError("give exactly one of --system or --spec");
  ResolvedSystem r;
  if (!system.empty()) {
    r.entry = &get_system(system);
    r.spec = r.entry->spec;
  } else {
    r.spec = load_spec_file(spec);
  }
  return r;
}

struct FieldArgs {
  double bmin = 0.0, bmax = 1100.0, temp = 300.0;
  std::size_t points = 2048;
  CLI::Option *bmin_opt = nullptr, *bmax_opt = nullptr, *points_opt = nullptr, *temp_opt = nullptr;

  void add(CLI::App& app) {
    bmin_opt = app.add_option("--bmin", bmin, "Lowest field, G");
    bmax_opt = app.add_option("--bmax", bmax, "Highest field, G");
    points_opt = app.add_option("--points", points, "Grid points");
    temp_opt = app.add_option("--temp", temp, "Temperature, K");
  }

  SweepOptions resolve_sweep(const json& config, const CatalogEntry* entry) const {
    SweepOptions o;
    const double def_min = entry ? entry->sweep_min : 0.0;
    const double def_max = entry ? entry->sweep_max : 1100.0;
    const std::size_t def_points = entry ? entry->sweep_points : 2048;
    o.field_min = resolve(bmin_opt, bmin, config, "bmin", def_min);
    o.field_max = resolve(bmax_opt, bmax, config, "bmax", def_max);
    o.points = resolve(points_opt, points, config, "points", def_points);
    o.temperature_k = resolve(temp_opt, temp, config, "temp", 300.0);
    o.thermal = thermal_from_config(config);
    o.threads = resolve<unsigned>(nullptr, 0u, config, "threads", 0u);
    if (!(o.field_min < o.field_max) || o.field_min < 0.0) throw UsageError("field range needs 0 <= bmin < bmax");
    if (o.points < 2) throw UsageError("--points must be at least 2");
    if (!(o.temperature_k >= 0.0)) throw UsageError("--temp must be >= 0 K");
    return o;
  }
};

struct ThresholdArgs {
  double jump = 0.4, transfer = 0.2, ceiling = 30.0, true_gap = 0.05, radius = 20.0;
  CLI::Option *jump_opt = nullptr, *transfer_opt = nullptr, *ceiling_opt = nullptr, *true_gap_opt = nullptr,
              *radius_opt = nullptr;

  void add(CLI::App& app) {
    jump_opt = app.add_option("--jump-threshold", jump, "Projection jump marking an event");
    transfer_opt = app.add_option("--transfer-threshold", transfer, "Projection transfer for gap minima");
    ceiling_opt = app.add_option("--gap-ceiling", ceiling, "Largest gap scanned for minima, MHz");
    true_gap_opt = app.add_option("--true-gap", true_gap, "Gap below which a crossing is true, MHz");
    radius_opt = app.add_option("--cluster-radius", radius, "Single-linkage radius, G");
  }
};

struct Output {
  std::string path;
  std::string format;
  CLI::Option* path_opt = nullptr;
  CLI::Option* format_opt = nullptr;

  void add(CLI::App& app, const std::vector<std::string>& formats) {
    path_opt = app.add_option("-o,--output", path, "Output file (default: stdout)");
    format_opt = app.add_option("--format", format, "Output format")->check(CLI::IsMember(formats));
  }

  std::pair<std::string, std::string> resolve_with(const json& config, const std::string& default_format,
                                                   const std::vector<std::string>& formats) const {
    const std::string f = resolve(format_opt, format, config, "format", default_format);
    if (std::find(formats.begin(), formats.end(), f) == formats.end()) {
      throw UsageError("unsupported format '" + f + "'");
    }
    return {resolve(path_opt, path, config, "output", std::string{}), f};
  }
};

int cmd_catalog(const std::string& format, const std::string& output, std::ostream& out) {
  std::string text;
  if (format == "json") {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& e : catalog()) {
      nlohmann::ordered_json j;
      j["id"] = e.id;
      j["description"] = e.description;
      j["anchor"] = e.anchor;
      j["aliases"] = e.aliases;
      j["dimension"] = e.spec.dimension();
      j["sweep_G"] = {round_to(e.sweep_min, kFieldDecimals), round_to(e.sweep_max, kFieldDecimals)};
      arr.push_back(std::move(j));
    }
    text = dump(arr);
  } else {
    std::ostringstream s;
    s << "id,dimension,description\n";
    for (const auto& e : catalog()) s << e.id << ',' << e.spec.dimension() << ',' << csv_quote(e.description) << '\n';
    text = s.str();
  }
  emit(text, output, out);
  return kExitOk;
}

std::vector<double> temperature_grid(double tmin, double tmax, double tstep) {
  if (!(tstep > 0.0)) throw UsageError("--tstep must be positive");
  if (!(tmin >= 0.0) || !(tmin <= tmax)) throw UsageError("temperature range needs 0 <= tmin <= tmax");
  std::vector<double> ts;
  const auto n = static_cast<std::size_t>(std::floor((tmax - tmin) / tstep + 1e-9));
  for (std::size_t k = 0; k <= n; ++k) ts.push_back(tmin + tstep * static_cast<double>(k));
  if (tmax - ts.back() > 1e-9 * std::max(1.0, tmax)) ts.push_back(tmax);
  return ts;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cross-relaxation feature simulator for NV spin systems"};
  app.name("spin_atlas");
  app.require_subcommand(1);

  // catalog
  auto* c_cat = app.add_subcommand("catalog", "List the shipped spin systems");
  std::string cat_config;
  Output cat_out;
  c_cat->add_option("--config", cat_config, "JSON config file")->check(CLI::ExistingFile);
  cat_out.add(*c_cat, {"csv", "json"});

  // sweep
  auto* c_sweep = app.add_subcommand("sweep", "Eigenvalues and m_S=0 projections over a field sweep");
  std::string sweep_config;
  SystemArgs sweep_sys;
  FieldArgs sweep_field;
  Output sweep_out;
  c_sweep->add_option("--config", sweep_config, "JSON config file")->check(CLI::ExistingFile);
  sweep_sys.add(*c_sweep);
  sweep_field.add(*c_sweep);
  sweep_out.add(*c_sweep, {"csv", "json"});

  // features
  auto* c_feat = app.add_subcommand("features", "Detect, refine and cluster crossing features");
  std::string feat_config;
  SystemArgs feat_sys;
  FieldArgs feat_field;
  ThresholdArgs feat_thr;
  Output feat_out;
  bool slopes = false;
  auto* slopes_opt = c_feat->add_flag("--slopes", slopes, "Add the 300 K slope of every feature");
  c_feat->add_option("--config", feat_config, "JSON config file")->check(CLI::ExistingFile);
  feat_sys.add(*c_feat);
  feat_field.add(*c_feat);
  feat_thr.add(*c_feat);
  feat_out.add(*c_feat, {"json", "csv"});

  // tshift
  auto* c_shift = app.add_subcommand("tshift", "Temperature shift of one crossing line");
  std::string shift_config;
  SystemArgs shift_sys;
  Output shift_out;
  double feature = 0.0, tmin = 0.0, tmax = 300.0, tstep = 10.0, window = 5.0;
  c_shift->add_option("--config", shift_config, "JSON config file")->check(CLI::ExistingFile);
  shift_sys.add(*c_shift);
  auto* feature_opt = c_shift->add_option("--feature", feature, "Field of the line to follow, G");
  auto* tmin_opt = c_shift->add_option("--tmin", tmin, "Lowest temperature, K");
  auto* tmax_opt = c_shift->add_option("--tmax", tmax, "Highest temperature, K");
  auto* tstep_opt = c_shift->add_option("--tstep", tstep, "Temperature step, K");
  auto* window_opt = c_shift->add_option("--window", window, "Search half-width per step, G");
  shift_out.add(*c_shift, {"csv", "json"});

  // fit-trace
  auto* c_fit = app.add_subcommand("fit-trace", "Fit Lorentzian dips to a PL-vs-field trace");
  std::string fit_config, trace_path;
  Output fit_out;
  std::vector<double> seeds;
  double central = 0.0, prominence = 3.0;
  c_fit->add_option("trace", trace_path, "CSV trace with header B_gauss,pl")->required();
  c_fit->add_option("--config", fit_config, "JSON config file")->check(CLI::ExistingFile);
  auto* seeds_opt = c_fit->add_option("--seeds", seeds, "Dip seeds, G (comma separated)")->delimiter(',');
  auto* central_opt = c_fit->add_option("--central", central, "Central line for separations, G");
  auto* prominence_opt = c_fit->add_option("--prominence", prominence, "Auto-seed prominence in MAD units");
  fit_out.add(*c_fit, {"json"});

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (c_cat->parsed()) {
      const json config = load_config(cat_config);
      const auto [path, format] = cat_out.resolve_with(config, "csv", {"csv", "json"});
      return cmd_catalog(format, path, out);
    }

    if (c_sweep->parsed()) {
      const json config = load_config(sweep_config);
      const auto [path, format] = sweep_out.resolve_with(config, "csv", {"csv", "json"});
      const ResolvedSystem sys = resolve_system(sweep_sys, config);
      const SweepOptions opts = sweep_field.resolve_sweep(config, sys.entry);
      const SweepResult sr = sweep(sys.spec, opts);
      emit(format == "json" ? dump(sweep_to_json(sr)) : sweep_to_csv(sr), path, out);
      return kExitOk;
    }

    if (c_feat->parsed()) {
      const json config = load_config(feat_config);
      const auto [path, format] = feat_out.resolve_with(config, "json", {"json", "csv"});
      const ResolvedSystem sys = resolve_system(feat_sys, config);
      FeatureSearchOptions fo;
      fo.sweep = feat_field.resolve_sweep(config, sys.entry);
      fo.detection.jump_threshold = resolve(feat_thr.jump_opt, feat_thr.jump, config, "jump_threshold", 0.4);
      fo.detection.transfer_threshold =
          resolve(feat_thr.transfer_opt, feat_thr.transfer, config, "transfer_threshold", 0.2);
      fo.detection.gap_ceiling = resolve(feat_thr.ceiling_opt, feat_thr.ceiling, config, "gap_ceiling", 30.0);
      fo.refine.true_gap = resolve(feat_thr.true_gap_opt, feat_thr.true_gap, config, "true_gap", 0.05);
      fo.cluster_radius = resolve(feat_thr.radius_opt, feat_thr.radius, config, "cluster_radius", 20.0);
      if (!(fo.detection.jump_threshold > 0.0) || !(fo.detection.gap_ceiling > 0.0) ||
          !(fo.refine.true_gap > 0.0) || !(fo.cluster_radius >= 0.0)) {
        throw UsageError("thresholds must be positive");
      }
      std::vector<CrossingFeature> features = find_features(sys.spec, fo);
      if (resolve(slopes_opt, slopes, config, "slopes", false)) {
        ShiftOptions so;
        so.detection = fo.detection;
        so.threads = fo.sweep.threads;
        for (auto& f : features) {
          try {
            f.slope = temperature_shift(sys.spec, f.center, {}, fo.sweep.thermal, so).slope;
          } catch (const NotFound&) {
            // Leave the slope out for features that cannot be followed.
          }
        }
      }
      std::string text;
      if (format == "json") {
        nlohmann::ordered_json doc;
        doc["system"] = sys.entry ? sys.entry->id : std::string("custom");
        doc["temperature_K"] = round_to(fo.sweep.temperature_k, 2);
        doc["zfs_MHz"] = round_to(zfs_at(fo.sweep.thermal, fo.sweep.temperature_k), kEnergyDecimals);
        doc["features"] = features_to_json(features);
        text = dump(doc);
      } else {
        std::ostringstream s;
        s << "center_G,span_lo_G,span_hi_G,kind,lines,min_gap_MHz,slope_G_per_K\n";
        for (const auto& f : features) {
          s << format_fixed(f.center, kFieldDecimals) << ',' << format_fixed(f.span_lo, kFieldDecimals) << ','
            << format_fixed(f.span_hi, kFieldDecimals) << ',' << f.kind() << ',' << f.lines.size() << ','
            << format_fixed(f.min_gap(), kEnergyDecimals) << ','
            << (f.slope ? format_fixed(*f.slope, kSlopeDecimals) : "") << '\n';
        }
        text = s.str();
      }
      emit(text, path, out);
      return kExitOk;
    }

    if (c_shift->parsed()) {
      const json config = load_config(shift_config);
      const auto [path, format] = shift_out.resolve_with(config, "csv", {"csv", "json"});
      const ResolvedSystem sys = resolve_system(shift_sys, config);
      if (!(feature_opt->count() > 0 || config.contains("feature"))) throw UsageError("tshift needs --feature");
      const double f = resolve(feature_opt, feature, config, "feature", 0.0);
      const auto temps = temperature_grid(resolve(tmin_opt, tmin, config, "tmin", 0.0),
                                          resolve(tmax_opt, tmax, config, "tmax", 300.0),
                                          resolve(tstep_opt, tstep, config, "tstep", 10.0));
      ShiftOptions so;
      so.window = resolve(window_opt, window, config, "window", 5.0);
      so.threads = resolve<unsigned>(nullptr, 0u, config, "threads", 0u);
      if (!(so.window > 0.0)) throw UsageError("--window must be positive");
      const TemperatureShift shift = temperature_shift(sys.spec, f, temps, thermal_from_config(config), so);
      emit(format == "json" ? dump(temperature_shift_to_json(shift)) : temperature_shift_to_csv(shift), path, out);
      if (shift.lost) err << "warning: the line was lost during continuation; partial results written\n";
      return kExitOk;
    }

    if (c_fit->parsed()) {
      const json config = load_config(fit_config);
      const auto [path, format] = fit_out.resolve_with(config, "json", {"json"});
      const Trace trace = load_trace(trace_path);
      const double factor = resolve(prominence_opt, prominence, config, "prominence", 3.0);
      std::vector<double> user = resolve(seeds_opt, seeds, config, "seeds", std::vector<double>{});
      // User seeds win over automatic ones that sit within two grid spacings.
      const double spacing = (trace.field.back() - trace.field.front()) / static_cast<double>(trace.size() - 1);
      std::vector<double> all = user;
      if (user.empty()) {
        for (double s : auto_seeds(trace, factor)) {
          const bool clash = std::any_of(all.begin(), all.end(), [&](double u) { return std::abs(u - s) < 2 * spacing; });
          if (!clash) all.push_back(s);
        }
      }
      if (all.empty()) throw InvalidInput("no dips found; pass --seeds");
      const DipFit fit = fit_dips(trace, all, {});
      double c = 0.0;
      if (central_opt->count() > 0 || config.contains("central")) {
        c = resolve(central_opt, central, config, "central", 0.0);
      } else {
        const auto deepest = std::max_element(fit.dips.begin(), fit.dips.end(),
                                              [](const Dip& a, const Dip& b) { return a.depth < b.depth; });
        c = deepest->center;
      }
      emit(dump(dip_fit_to_json(fit, side_peak_separations(fit, c))), path, out);
      if (!fit.converged) err << "warning: fit did not converge; last iterate reported\n";
      return kExitOk;
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NotFound& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomainError;
  } catch (const fs::filesystem_error& e) {
    err << "error: cannot write output: " << e.what() << "\n";
    return kExitDomainError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomainError;
  }
  return kExitUsage;
}

}  // namespace spin_atlas::cli
