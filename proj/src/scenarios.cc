#include "chronosqueeze/scenarios.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "chronosqueeze/errors.h"
#include "chronosqueeze/io.h"
#include "chronosqueeze/perturbation.h"
#include "chronosqueeze/units.h"

namespace chronosqueeze {
namespace {

using nlohmann::json;

void check_keys(const json& obj, std::initializer_list<std::string_view> allowed,
                std::string_view where) {
  if (!obj.is_object()) throw InvalidArgumentError(std::string(where) + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw InvalidArgumentError("unknown key '" + std::string(where) + "." + key + "'");
    }
  }
}

// Value of a dimensioned entry expressed in default_unit.
double quantity(const json& v, Dimension dim, std::string_view default_unit,
                std::string_view where) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    return parse_quantity_in(v.get<std::string>(), dim, default_unit, default_unit);
  }
  throw InvalidArgumentError(std::string(where) + " must be a number or a quantity string");
}

double number(const json& v, std::string_view where) {
  if (!v.is_number()) throw InvalidArgumentError(std::string(where) + " must be a number");
  return v.get<double>();
}

std::size_t count(const json& v, std::string_view where) {
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw InvalidArgumentError(std::string(where) + " must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

Polarity polarity_of(const json& v) {
  if (v.is_number()) {
    const double s = v.get<double>();
    if (s == 1.0) return Polarity::Positive;
    if (s == -1.0) return Polarity::Negative;
  } else if (v.is_string()) {
    return parse_polarity(v.get<std::string>());
  }
  throw InvalidArgumentError("polarity must be +1 or -1");
}

std::string polarity_key(Polarity s) { return s == Polarity::Positive ? "+1" : "-1"; }

UniformGrid grid_of(const json& v, std::string_view where) {
  check_keys(v, {"start", "stop", "step"}, where);
  UniformGrid g;
  g.start = quantity(v.at("start"), Dimension::Time, "fs", where);
  g.stop = quantity(v.at("stop"), Dimension::Time, "fs", where);
  g.step = quantity(v.at("step"), Dimension::Time, "fs", where);
  return g;
}

json grid_json(const UniformGrid& g) {
  return {{"start", g.start}, {"stop", g.stop}, {"step", g.step}};
}

std::string label(double r, Polarity s, double t_p_fs) {
  return "r" + format_number(r) + (s == Polarity::Positive ? "_sp" : "_sm") + "_tp" +
         format_number(t_p_fs) + "fs";
}

double theta_of_fs(double t_fs, double gamma0) { return t_fs * 1e-15 * gamma0; }
double fs_of_theta(double theta, double gamma0) { return theta / gamma0 * 1e15; }

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return out;
}

json validity_json(const ValidityReport& v, Polarity s) {
  return {{"r", v.r},          {"polarity", polarity_key(s)}, {"r_max", v.r_max},
          {"budget", v.budget}, {"g", v.g},                   {"within_svaa", v.within_svaa},
          {"causal", v.causal}, {"ok", v.ok()},               {"warnings", v.warnings}};
}

json fit_json(const FitResult& fit) {
  return {{"A1", fit.A1},
          {"A2", fit.A2},
          {"residual_rms", fit.residual_rms},
          {"branch", to_string(fit.branch)},
          {"r_values", fit.r_values}};
}

struct DriveKey {
  double r;
  int s;
  bool operator<(const DriveKey& o) const { return r < o.r || (r == o.r && s < o.s); }
};

// Unique drives a scenario touches, in first-seen order.
std::vector<std::pair<double, Polarity>> scenario_drives(const ScenarioConfig& c) {
  std::vector<std::pair<double, Polarity>> out;
  auto add = [&](double r, Polarity s) {
    const auto same = [&](const auto& d) { return d.first == r && d.second == s; };
    if (std::none_of(out.begin(), out.end(), same)) out.emplace_back(r, s);
  };
  if (c.map_stride || c.worldlines || c.lab_frame_fs) add(c.r, c.polarity);
  for (const auto& t : c.traces) add(t.r, t.polarity);
  if (c.fit && !c.fit->r_values.empty()) {
    const double r_top = c.fit->r_values.back();
    add(r_top, c.fit->squeezing_polarity);
    add(r_top, flipped(c.fit->squeezing_polarity));
  }
  return out;
}

}  // namespace

std::vector<double> UniformGrid::values() const {
  if (!(step > 0.0) || !(stop >= start)) {
    throw InvalidArgumentError("grid needs step > 0 and stop >= start");
  }
  const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> out(n);
  // Steps like 0.1 or 0.25 divide a unit evenly; k / inv then rounds exactly.
  const double inv = std::round(1.0 / step);
  const double k0 = std::round(start * inv);
  const bool exact = std::abs(inv * step - 1.0) < 1e-12 && std::abs(k0 - start * inv) < 1e-9;
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = exact ? (k0 + static_cast<double>(i)) / inv : start + step * static_cast<double>(i);
  }
  return out;
}

CrystalConfig ScenarioConfig::crystal() const {
  CrystalConfig c;
  c.n = n;
  c.length = length_um * 1e-6;
  c.gamma0 = 2.0 * std::numbers::pi * gamma0_over_2pi_thz * 1e12;
  return c;
}

DrivingPulse ScenarioConfig::pulse(double r_value, Polarity s) const {
  if (shape == PulseShape::Sampled) return load_sampled_pulse_csv(pulse_file, r_value, s);
  return DrivingPulse::of_shape(shape, r_value, s);
}

void ScenarioConfig::validate() const {
  crystal().validate();
  if (shape == PulseShape::Sampled && pulse_file.empty()) {
    throw InvalidArgumentError("sampled pulse shape needs pulse.file");
  }
  if (!(r >= 0.0)) throw InvalidArgumentError("pulse.r must be >= 0");
  for (const auto& t : traces) {
    if (!(t.r >= 0.0)) throw InvalidArgumentError("trace r must be >= 0");
    if (!(t.t_p_fs > 0.0)) throw InvalidArgumentError("invalid probe: t_p must be positive");
  }
  if (!traces.empty() && t_d_fs.values().empty()) throw InvalidArgumentError("empty t_d grid");
  if (map_grid.points < 3 || !(map_grid.theta_max > map_grid.theta_min)) {
    throw InvalidArgumentError("map grid needs at least 3 points on a non-empty interval");
  }
  if (lab_frame_fs) lab_frame_fs->values();
  if (worldlines && (worldlines->count == 0 || worldlines->z_points < 2)) {
    throw InvalidArgumentError("world lines need count >= 1 and z_points >= 2");
  }
  if (causality && (causality->points < 2 || !(causality->r_max > 0.0))) {
    throw InvalidArgumentError("causality sweep needs r_max > 0 and at least 2 points");
  }
  if (fit) {
    if (fit->r_values.size() < 3) throw InvalidArgumentError("fit needs at least 3 r values");
    if (!(fit->t_p_fs > 0.0)) throw InvalidArgumentError("invalid probe: fit t_p must be positive");
  }
}

ScenarioConfig config_from_json(const json& doc) {
  check_keys(doc, {"name", "pulse", "crystal", "traces", "t_d", "numerics", "products", "output"},
             "config");
  ScenarioConfig c;
  if (doc.contains("name")) c.name = doc.at("name").get<std::string>();

  if (doc.contains("pulse")) {
    const json& p = doc.at("pulse");
    check_keys(p, {"shape", "r", "polarity", "file"}, "pulse");
    if (p.contains("shape")) c.shape = parse_pulse_shape(p.at("shape").get<std::string>());
    if (p.contains("r")) c.r = number(p.at("r"), "pulse.r");
    if (p.contains("polarity")) c.polarity = polarity_of(p.at("polarity"));
    if (p.contains("file")) c.pulse_file = p.at("file").get<std::string>();
  }
  if (doc.contains("crystal")) {
    const json& k = doc.at("crystal");
    check_keys(k, {"n", "length", "gamma0_over_2pi"}, "crystal");
    if (k.contains("n")) c.n = number(k.at("n"), "crystal.n");
    if (k.contains("length")) {
      c.length_um = quantity(k.at("length"), Dimension::Length, "um", "crystal.length");
    }
    if (k.contains("gamma0_over_2pi")) {
      c.gamma0_over_2pi_thz =
          quantity(k.at("gamma0_over_2pi"), Dimension::Frequency, "THz", "crystal.gamma0_over_2pi");
    }
  }
  if (doc.contains("traces")) {
    for (const json& t : doc.at("traces")) {
      check_keys(t, {"r", "polarity", "t_p"}, "traces[]");
      TraceSpec spec;
      spec.r = number(t.at("r"), "traces[].r");
      if (t.contains("polarity")) spec.polarity = polarity_of(t.at("polarity"));
      if (t.contains("t_p")) spec.t_p_fs = quantity(t.at("t_p"), Dimension::Time, "fs", "traces[].t_p");
      c.traces.push_back(spec);
    }
  }
  if (doc.contains("t_d")) c.t_d_fs = grid_of(doc.at("t_d"), "t_d");

  if (doc.contains("numerics")) {
    const json& n = doc.at("numerics");
    check_keys(n, {"map_theta_min", "map_theta_max", "map_points", "rel_tol", "abs_tol",
                   "omega_points", "omega_cutoff", "window", "time_step"},
               "numerics");
    if (n.contains("map_theta_min")) c.map_grid.theta_min = number(n.at("map_theta_min"), "numerics.map_theta_min");
    if (n.contains("map_theta_max")) c.map_grid.theta_max = number(n.at("map_theta_max"), "numerics.map_theta_max");
    if (n.contains("map_points")) c.map_grid.points = count(n.at("map_points"), "numerics.map_points");
    if (n.contains("rel_tol")) c.map_grid.step.rel_tol = number(n.at("rel_tol"), "numerics.rel_tol");
    if (n.contains("abs_tol")) c.map_grid.step.abs_tol = number(n.at("abs_tol"), "numerics.abs_tol");
    if (n.contains("omega_points")) c.detection.omega_points = count(n.at("omega_points"), "numerics.omega_points");
    if (n.contains("omega_cutoff")) c.detection.omega_cutoff = number(n.at("omega_cutoff"), "numerics.omega_cutoff");
    if (n.contains("window")) c.detection.window = number(n.at("window"), "numerics.window");
    if (n.contains("time_step")) c.detection.time_step = number(n.at("time_step"), "numerics.time_step");
  }

  if (doc.contains("products")) {
    const json& p = doc.at("products");
    check_keys(p, {"map", "worldlines", "lab_frame", "pt_reference", "causality", "fit"}, "products");
    if (p.contains("map") && !p.at("map").is_null()) {
      check_keys(p.at("map"), {"stride"}, "products.map");
      c.map_stride = p.at("map").value("stride", std::size_t{1});
    }
    if (p.contains("worldlines") && !p.at("worldlines").is_null()) {
      const json& w = p.at("worldlines");
      check_keys(w, {"count", "span", "z_points"}, "products.worldlines");
      WorldlineSpec spec;
      if (w.contains("count")) spec.count = count(w.at("count"), "products.worldlines.count");
      if (w.contains("span")) spec.span = number(w.at("span"), "products.worldlines.span");
      if (w.contains("z_points")) spec.z_points = count(w.at("z_points"), "products.worldlines.z_points");
      c.worldlines = spec;
    }
    if (p.contains("lab_frame") && !p.at("lab_frame").is_null()) {
      c.lab_frame_fs = grid_of(p.at("lab_frame"), "products.lab_frame");
    }
    if (p.contains("pt_reference")) c.pt_reference = p.at("pt_reference").get<bool>();
    if (p.contains("causality") && !p.at("causality").is_null()) {
      const json& k = p.at("causality");
      check_keys(k, {"shapes", "r_max", "points"}, "products.causality");
      CausalitySpec spec;
      if (k.contains("shapes")) {
        spec.shapes.clear();
        for (const json& s : k.at("shapes")) spec.shapes.push_back(parse_pulse_shape(s.get<std::string>()));
      }
      if (k.contains("r_max")) spec.r_max = number(k.at("r_max"), "products.causality.r_max");
      if (k.contains("points")) spec.points = count(k.at("points"), "products.causality.points");
      c.causality = spec;
    }
    if (p.contains("fit") && !p.at("fit").is_null()) {
      const json& f = p.at("fit");
      check_keys(f, {"r_values", "t_p", "branch", "squeezing_polarity"}, "products.fit");
      FitSpec spec;
      if (f.contains("r_values")) spec.r_values = f.at("r_values").get<std::vector<double>>();
      if (f.contains("t_p")) spec.t_p_fs = quantity(f.at("t_p"), Dimension::Time, "fs", "products.fit.t_p");
      if (f.contains("branch")) spec.branch = parse_branch(f.at("branch").get<std::string>());
      if (f.contains("squeezing_polarity")) spec.squeezing_polarity = polarity_of(f.at("squeezing_polarity"));
      c.fit = spec;
    }
  }
  if (doc.contains("output")) {
    check_keys(doc.at("output"), {"dir"}, "output");
    c.output_dir = doc.at("output").value("dir", c.output_dir);
  }
  return c;
}

json config_to_json(const ScenarioConfig& c) {
  json doc;
  doc["name"] = c.name;
  doc["pulse"] = {{"shape", to_string(c.shape)}, {"r", c.r}, {"polarity", polarity_key(c.polarity)}};
  if (!c.pulse_file.empty()) doc["pulse"]["file"] = c.pulse_file;
  doc["crystal"] = {{"n", c.n}, {"length", c.length_um}, {"gamma0_over_2pi", c.gamma0_over_2pi_thz}};
  doc["traces"] = json::array();
  for (const auto& t : c.traces) {
    doc["traces"].push_back({{"r", t.r}, {"polarity", polarity_key(t.polarity)}, {"t_p", t.t_p_fs}});
  }
  doc["t_d"] = grid_json(c.t_d_fs);
  doc["numerics"] = {{"map_theta_min", c.map_grid.theta_min},
                     {"map_theta_max", c.map_grid.theta_max},
                     {"map_points", c.map_grid.points},
                     {"rel_tol", c.map_grid.step.rel_tol},
                     {"abs_tol", c.map_grid.step.abs_tol},
                     {"omega_points", c.detection.omega_points},
                     {"omega_cutoff", c.detection.omega_cutoff},
                     {"window", c.detection.window},
                     {"time_step", c.detection.time_step}};
  json products = json::object();
  if (c.map_stride) products["map"] = {{"stride", *c.map_stride}};
  if (c.worldlines) {
    products["worldlines"] = {{"count", c.worldlines->count},
                              {"span", c.worldlines->span},
                              {"z_points", c.worldlines->z_points}};
  }
  if (c.lab_frame_fs) products["lab_frame"] = grid_json(*c.lab_frame_fs);
  products["pt_reference"] = c.pt_reference;
  if (c.causality) {
    json shapes = json::array();
    for (PulseShape s : c.causality->shapes) shapes.push_back(to_string(s));
    products["causality"] = {{"shapes", shapes}, {"r_max", c.causality->r_max}, {"points", c.causality->points}};
  }
  if (c.fit) {
    products["fit"] = {{"r_values", c.fit->r_values},
                       {"t_p", c.fit->t_p_fs},
                       {"branch", to_string(c.fit->branch)},
                       {"squeezing_polarity", polarity_key(c.fit->squeezing_polarity)}};
  }
  doc["products"] = products;
  doc["output"] = {{"dir", c.output_dir}};
  return doc;
}

std::string config_hash(const ScenarioConfig& config) {
  json doc = config_to_json(config);
  // The output location does not change any result.
  doc.erase("output");
  return hex_digest(fnv1a64(doc.dump()));
}

void apply_override(json& doc, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw InvalidArgumentError("override must look like key.path=value");
  }
  const std::string path(assignment.substr(0, eq));
  const std::string text(assignment.substr(eq + 1));
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;

  json* node = &doc;
  std::istringstream parts(path);
  std::string key;
  std::vector<std::string> keys;
  while (std::getline(parts, key, '.')) {
    if (key.empty()) throw InvalidArgumentError("empty component in override key '" + path + "'");
    keys.push_back(key);
  }
  for (std::size_t i = 0; i < keys.size(); ++i) {
    const std::string& k = keys[i];
    const bool last = i + 1 == keys.size();
    if (node->is_array()) {
      std::size_t idx = 0;
      try {
        std::size_t used = 0;
        idx = std::stoul(k, &used);
        if (used != k.size()) throw std::invalid_argument(k);
      } catch (const std::exception&) {
        throw InvalidArgumentError("override key '" + path + "': '" + k + "' is not an index");
      }
      if (idx >= node->size()) throw InvalidArgumentError("override index out of range in '" + path + "'");
      node = &(*node)[idx];
    } else {
      if (node->is_null()) *node = json::object();
      if (!node->is_object()) throw InvalidArgumentError("override key '" + path + "' crosses a value");
      node = &(*node)[k];
    }
    if (last) *node = value;
  }
}

ScenarioConfig resolve_config(const std::string& preset_or_path,
                              const std::vector<std::string>& overrides) {
  json doc;
  if (is_preset(preset_or_path)) {
    doc = preset_document(preset_or_path);
  } else {
    std::ifstream in(preset_or_path);
    if (!in) {
      throw InvalidArgumentError("'" + preset_or_path + "' is neither a preset nor a readable file");
    }
    doc = json::parse(in, nullptr, false, true);
    if (doc.is_discarded()) throw InvalidArgumentError("cannot parse config " + preset_or_path);
  }
  for (const auto& o : overrides) apply_override(doc, o);
  ScenarioConfig config = config_from_json(doc);
  config.validate();
  return config;
}

std::vector<ValidityReport> check_scenario(const ScenarioConfig& config) {
  config.validate();
  const CrystalConfig crystal = config.crystal();
  std::vector<ValidityReport> reports;
  for (const auto& [r, s] : scenario_drives(config)) {
    reports.push_back(check_validity(config.pulse(r, s), crystal));
  }
  return reports;
}

ScenarioResult run_scenario(const ScenarioConfig& config, const std::filesystem::path& out_dir) {
  config.validate();
  const CrystalConfig crystal = config.crystal();
  const double gamma0 = crystal.gamma0;
  const std::string hash = config_hash(config);
  const std::string stamp = "config_hash=" + hash + " scenario=" + config.name;

  ScenarioResult result;
  json& summary = result.summary;
  summary["scenario"] = config.name;
  summary["config_hash"] = hash;
  summary["config"] = config_to_json(config);
  summary["config"].erase("output");

  // Validity gate before any output.
  const auto drives = scenario_drives(config);
  summary["validity"] = json::array();
  std::vector<std::string> failures;
  for (const auto& [r, s] : drives) {
    const ValidityReport report = check_validity(config.pulse(r, s), crystal);
    summary["validity"].push_back(validity_json(report, s));
    if (!report.ok()) {
      try {
        enforce_validity(report);
      } catch (const ValidityError& e) {
        failures.push_back(e.what());
      }
    }
  }
  if (!failures.empty()) {
    std::string msg = "validity gate failed";
    for (const auto& f : failures) msg += "; " + f;
    throw ValidityError(msg);
  }

  std::filesystem::create_directories(out_dir);
  auto emit = [&](const std::string& name, const CsvTable& table, const std::string& extra) {
    const auto path = out_dir / name;
    table.write(path, extra.empty() ? stamp : stamp + " " + extra);
    result.files.push_back(path);
    return name;
  };

  std::map<DriveKey, ConformalMap> maps;
  auto map_for = [&](double r, Polarity s) -> const ConformalMap& {
    const DriveKey key{r, sign_of(s)};
    auto it = maps.find(key);
    if (it == maps.end()) {
      it = maps.emplace(key, build_conformal_map(config.pulse(r, s), crystal, config.map_grid)).first;
    }
    return it->second;
  };

  // Fit first so that traces can carry the degree of squeezing.
  std::optional<FitResult> fit;
  if (config.fit) {
    const FitSpec& spec = *config.fit;
    const ProbeKernel probe = ProbeKernel::from_fs(spec.t_p_fs, gamma0);
    ExtremaOptions options;
    options.map_grid = config.map_grid;
    options.detection = config.detection;
    const DrivingPulse base = config.pulse(0.0, Polarity::Positive);
    const auto squeeze = extrema_vs_r(base, crystal, probe, spec.r_values, spec.squeezing_polarity,
                                      Branch::Squeezing, options);
    const auto anti = extrema_vs_r(base, crystal, probe, spec.r_values,
                                   flipped(spec.squeezing_polarity), Branch::AntiSqueezing, options);
    CsvTable table({"r", "rdv_squeezing", "t_d_fs_squeezing", "rdv_anti_squeezing",
                    "t_d_fs_anti_squeezing"});
    for (std::size_t i = 0; i < squeeze.size(); ++i) {
      const double row[] = {squeeze[i].r, squeeze[i].rdv, fs_of_theta(squeeze[i].t_d, gamma0),
                            anti[i].rdv, fs_of_theta(anti[i].t_d, gamma0)};
      table.add_row(row);
    }
    json fit_summary;
    fit_summary["extrema_file"] = emit("extrema.csv", table, "t_p_fs=" + format_number(spec.t_p_fs));
    fit = fit_exponential(spec.branch == Branch::Squeezing ? squeeze : anti, spec.branch);
    json report = fit_json(*fit);
    report["config_hash"] = hash;
    const auto report_path = out_dir / "fit_report.json";
    write_text(report_path, report.dump(2) + "\n");
    result.files.push_back(report_path);
    fit_summary["report_file"] = "fit_report.json";
    fit_summary["fit"] = fit_json(*fit);
    fit_summary["iterations"] = fit->iterations;
    const Branch other = spec.branch == Branch::Squeezing ? Branch::AntiSqueezing : Branch::Squeezing;
    try {
      const FitResult o = fit_exponential(other == Branch::Squeezing ? squeeze : anti, other);
      fit_summary["other_branch"] = fit_json(o);
    } catch (const FitError& e) {
      fit_summary["other_branch"] = {{"error", e.what()}};
    }
    summary["fit"] = fit_summary;
  }

  if (!config.traces.empty()) {
    const std::vector<double> t_fs = config.t_d_fs.values();
    std::vector<double> theta(t_fs.size());
    for (std::size_t i = 0; i < t_fs.size(); ++i) theta[i] = theta_of_fs(t_fs[i], gamma0);

    summary["traces"] = json::array();
    std::vector<std::string> norm_columns{"t_d_fs"};
    std::vector<std::vector<double>> norm_data{t_fs};
    if (config.pt_reference && config.shape != PulseShape::Sampled) {
      const DrivingPulse unit = config.pulse(1.0, Polarity::Positive);
      std::vector<double> shape(theta.size());
      for (std::size_t i = 0; i < theta.size(); ++i) shape[i] = pt_rdv_shape(unit, theta[i]);
      norm_columns.push_back("pt_shape");
      norm_data.push_back(std::move(shape));
    }

    for (const auto& spec : config.traces) {
      const ConformalMap& map = map_for(spec.r, spec.polarity);
      const ProbeKernel probe = ProbeKernel::from_fs(spec.t_p_fs, gamma0);
      VarianceTrace trace = rdv_trace(map, probe, theta, config.detection);
      if (fit) apply_degree(trace, *fit);
      const std::string name = label(spec.r, spec.polarity, spec.t_p_fs);
      const std::string file = emit("trace_" + name + ".csv", trace_table(trace, t_fs),
                                    "r=" + format_number(spec.r) + " polarity=" +
                                        polarity_key(spec.polarity) +
                                        " t_p_fs=" + format_number(spec.t_p_fs));
      const auto [lo, hi] = std::minmax_element(trace.rdv.begin(), trace.rdv.end());
      json entry = {{"label", name},
                    {"file", file},
                    {"r", spec.r},
                    {"polarity", polarity_key(spec.polarity)},
                    {"t_p_fs", spec.t_p_fs},
                    {"V_vac", trace.V_vac},
                    {"rdv_max", *hi},
                    {"t_d_fs_at_max", t_fs[static_cast<std::size_t>(hi - trace.rdv.begin())]},
                    {"rdv_min", *lo},
                    {"t_d_fs_at_min", t_fs[static_cast<std::size_t>(lo - trace.rdv.begin())]}};
      if (*lo < 0.0) entry["asymmetry"] = *hi / -*lo;
      if (fit) {
        entry["degree_max_pct"] = 100.0 * degree_from_fit(*lo, *fit);
        entry["degree_min_pct"] = 100.0 * degree_from_fit(*hi, *fit);
      }
      summary["traces"].push_back(entry);

      if (config.pt_reference && spec.r > 0.0) {
        std::vector<double> scaled(trace.rdv);
        for (double& v : scaled) v /= spec.r;
        norm_columns.push_back("rdv_over_r_" + name);
        norm_data.push_back(std::move(scaled));
      }
    }
    if (config.pt_reference) {
      CsvTable table(norm_columns);
      std::vector<double> row(norm_columns.size());
      for (std::size_t i = 0; i < t_fs.size(); ++i) {
        for (std::size_t c = 0; c < norm_data.size(); ++c) row[c] = norm_data[c][i];
        table.add_row(row);
      }
      summary["normalized_file"] = emit("normalized.csv", table, "");
    }
  }

  if (config.map_stride) {
    const std::string name = "r" + format_number(config.r) +
                             (config.polarity == Polarity::Positive ? "_sp" : "_sm");
    summary["map_file"] = emit("map_" + name + ".csv", map_table(map_for(config.r, config.polarity), *config.map_stride),
                               "r=" + format_number(config.r) + " polarity=" + polarity_key(config.polarity));
    summary["g"] = causality_g(map_for(config.r, config.polarity));
  }

  if (config.worldlines) {
    const WorldlineSpec& w = *config.worldlines;
    const auto entrance = linspace(-w.span, w.span, w.count);
    const auto z = linspace(0.0, 1.0, w.z_points);
    const auto lines = worldline_bundle(config.pulse(config.r, config.polarity), crystal, entrance, z,
                                        config.map_grid.step);
    summary["worldlines_file"] = emit("worldlines.csv", worldline_table(lines),
                                      "r=" + format_number(config.r) + " polarity=" + polarity_key(config.polarity));
  }

  if (config.lab_frame_fs) {
    const ConformalMap& map = map_for(config.r, config.polarity);
    const double transit_fs = crystal.length / crystal.c0 * 1e15;
    CsvTable table({"t_fs", "tau_out_fs", "undriven_fs", "causal_limit_fs"});
    for (double t : config.lab_frame_fs->values()) {
      const double row[] = {t, lab_tau_out(map, t * 1e-15) * 1e15, t - crystal.n * transit_fs,
                            t - transit_fs};
      table.add_row(row);
    }
    summary["lab_frame_file"] = emit("lab_frame.csv", table, "r=" + format_number(config.r));
  }

  if (config.causality) {
    const CausalitySpec& spec = *config.causality;
    const auto r_grid = linspace(0.0, spec.r_max, spec.points);
    std::vector<std::string> columns{"r"};
    std::vector<std::vector<double>> g(spec.shapes.size(), std::vector<double>(r_grid.size()));
    json slopes = json::object();
    for (std::size_t k = 0; k < spec.shapes.size(); ++k) {
      const DrivingPulse base = DrivingPulse::of_shape(spec.shapes[k]);
      columns.push_back("g_" + to_string(spec.shapes[k]));
      for (std::size_t i = 0; i < r_grid.size(); ++i) {
        g[k][i] = r_grid[i] == 0.0 ? 0.0 : causality_g(build_conformal_map(
                                               base.with_strength(r_grid[i]), crystal,
                                               {-30.0, 30.0, 4097, config.map_grid.step}));
      }
      constexpr double kSmallR = 1e-3;
      slopes[to_string(spec.shapes[k])] =
          causality_g(build_conformal_map(base.with_strength(kSmallR), crystal,
                                          {-30.0, 30.0, 4097, config.map_grid.step})) / kSmallR;
    }
    CsvTable table(columns);
    std::vector<double> row(columns.size());
    for (std::size_t i = 0; i < r_grid.size(); ++i) {
      row[0] = r_grid[i];
      for (std::size_t k = 0; k < g.size(); ++k) row[k + 1] = g[k][i];
      table.add_row(row);
    }
    summary["causality"] = {{"file", emit("causality.csv", table, "")},
                            {"small_r_slope", slopes},
                            {"budget", causality_budget(crystal)},
                            {"r_max", svaa_rmax(crystal)}};
  }

  const auto summary_path = out_dir / "summary.json";
  write_text(summary_path, summary.dump(2) + "\n");
  result.files.push_back(summary_path);
  return result;
}

}  // namespace chronosqueeze
