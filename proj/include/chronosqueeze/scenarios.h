#ifndef CHRONOSQUEEZE_SCENARIOS_H_
#define CHRONOSQUEEZE_SCENARIOS_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "chronosqueeze/conformal.h"
#include "chronosqueeze/detection.h"
#include "chronosqueeze/fitting.h"
#include "chronosqueeze/pulses.h"

namespace chronosqueeze {

/// Inclusive grid start, start + step, ... <= stop.
struct UniformGrid {
  double start = 0.0;
  double stop = 0.0;
  double step = 1.0;
  std::vector<double> values() const;
};

struct TraceSpec {
  double r = 0.0;
  Polarity polarity = Polarity::Positive;
  double t_p_fs = 0.49;
};

struct WorldlineSpec {
  std::size_t count = 21;
  double span = 5.0;  // entrance times cover [-span, span] in theta
  std::size_t z_points = 51;
};

struct CausalitySpec {
  std::vector<PulseShape> shapes{PulseShape::HalfCycleSech, PulseShape::SingleCycle};
  double r_max = 8.0;
  std::size_t points = 81;
};

struct FitSpec {
  std::vector<double> r_values = default_fit_grid();
  double t_p_fs = 5.9;
  Branch branch = Branch::Squeezing;
  /// Polarity whose extremum is squeezing; the opposite one feeds the other branch.
  Polarity squeezing_polarity = Polarity::Positive;
};

struct ScenarioConfig {
  std::string name = "custom";
  PulseShape shape = PulseShape::HalfCycleSech;
  std::string pulse_file;  // two-column CSV for the sampled shape
  /// Drive used by the map, world-line and lab-frame products.
  double r = 0.5;
  Polarity polarity = Polarity::Positive;

  double n = 2.57;
  double length_um = 15.0;
  double gamma0_over_2pi_thz = 26.0;

  std::vector<TraceSpec> traces;
  UniformGrid t_d_fs{-40.0, 40.0, 0.1};
  MapGridSpec map_grid;
  DetectionSettings detection;

  std::optional<std::size_t> map_stride;       // map dump
  std::optional<WorldlineSpec> worldlines;
  std::optional<UniformGrid> lab_frame_fs;
  bool pt_reference = false;                   // limit shape and rdv/r columns
  std::optional<CausalitySpec> causality;
  std::optional<FitSpec> fit;

  std::string output_dir = "out";

  void validate() const;
  CrystalConfig crystal() const;
  DrivingPulse pulse(double r, Polarity s) const;
};

/// Reads a config document.  Bare numbers use fs, um and THz; strings may
/// carry their own unit ("0.49 fs").  Unknown keys are rejected.
ScenarioConfig config_from_json(const nlohmann::json& doc);
/// Canonical form; config_from_json(config_to_json(c)) reproduces c.
nlohmann::json config_to_json(const ScenarioConfig& config);
/// 16 hex digits over the canonical JSON text.
std::string config_hash(const ScenarioConfig& config);

/// Sets a dotted key ("traces.0.r=1.5").  The value is read as JSON when it
/// parses, otherwise as a string.
void apply_override(nlohmann::json& doc, std::string_view assignment);

/// Preset name or path to a JSON file, with overrides applied in order.
ScenarioConfig resolve_config(const std::string& preset_or_path,
                              const std::vector<std::string>& overrides = {});

struct PresetInfo {
  std::string name;
  std::string description;
};
std::vector<PresetInfo> list_presets();
bool is_preset(std::string_view name);
/// Throws InvalidArgumentError for unknown names.
nlohmann::json preset_document(std::string_view name);

/// Validity report for every driven configuration the scenario would run.
std::vector<ValidityReport> check_scenario(const ScenarioConfig& config);

struct ScenarioResult {
  nlohmann::json summary;
  std::vector<std::filesystem::path> files;
};

/// Runs every requested product and writes CSVs plus summary.json into
/// out_dir.  Throws ValidityError before any output when the gate fails.
ScenarioResult run_scenario(const ScenarioConfig& config, const std::filesystem::path& out_dir);

}  // namespace chronosqueeze

#endif  // CHRONOSQUEEZE_SCENARIOS_H_
