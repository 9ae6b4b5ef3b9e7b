#include <algorithm>

#include "chronosqueeze/errors.h"
#include "chronosqueeze/scenarios.h"

namespace chronosqueeze {
namespace {

using nlohmann::json;

struct Preset {
  const char* name;
  const char* description;
  json (*build)();
};

json base(const char* name, const char* shape) {
  return {{"name", name},
          {"pulse", {{"shape", shape}, {"r", 0.5}, {"polarity", "+1"}}},
          {"crystal", {{"n", 2.57}, {"length", "15 um"}, {"gamma0_over_2pi", "26 THz"}}},
          {"traces", json::array()},
          {"t_d", {{"start", "-40 fs"}, {"stop", "40 fs"}, {"step", "0.1 fs"}}},
          {"products", json::object()}};
}

json trace(double r, const char* polarity, const char* t_p) {
  return {{"r", r}, {"polarity", polarity}, {"t_p", t_p}};
}

json fig1() {
  json doc = base("fig1", "half_cycle");
  doc["pulse"]["r"] = 5.0;
  doc["products"] = {
      {"map", {{"stride", 4}}},
      {"worldlines", {{"count", 21}, {"span", 5.0}, {"z_points", 51}}},
      {"lab_frame", {{"start", "0 fs"}, {"stop", "130 fs"}, {"step", "0.25 fs"}}}};
  return doc;
}

json fig2b() {
  json doc = base("fig2b", "half_cycle");
  doc["traces"] = {trace(0.1, "+1", "0.49 fs"), trace(0.5, "+1", "0.49 fs"),
                   trace(2.0, "+1", "0.49 fs"), trace(2.0, "-1", "0.49 fs")};
  doc["products"] = {{"pt_reference", true}};
  return doc;
}

json fig2d() {
  json doc = base("fig2d", "half_cycle");
  doc["pulse"]["r"] = 2.0;
  doc["traces"] = {trace(2.0, "+1", "0.49 fs"), trace(2.0, "+1", "5.9 fs"),
                   trace(2.0, "+1", "14.7 fs")};
  doc["t_d"] = {{"start", "-80 fs"}, {"stop", "80 fs"}, {"step", "0.2 fs"}};
  return doc;
}

json fig3bc() {
  json doc = base("fig3bc", "single_cycle");
  doc["traces"] = {trace(0.5, "+1", "5.9 fs"), trace(0.5, "-1", "5.9 fs")};
  doc["t_d"] = {{"start", "-60 fs"}, {"stop", "60 fs"}, {"step", "0.2 fs"}};
  json grid = json::array();
  for (int i = 1; i <= 16; ++i) grid.push_back(0.5 * i / 16.0);
  doc["products"] = {{"fit",
                      {{"r_values", grid},
                       {"t_p", "5.9 fs"},
                       {"branch", "squeezing"},
                       {"squeezing_polarity", "+1"}}}};
  return doc;
}

json figS2() {
  json doc = base("figS2", "half_cycle");
  doc["products"] = {
      {"causality", {{"shapes", {"half_cycle", "single_cycle"}}, {"r_max", 8.0}, {"points", 81}}}};
  return doc;
}

json figS3() {
  json doc = base("figS3", "single_cycle");
  doc["traces"] = {trace(0.1, "+1", "0.49 fs"), trace(0.5, "+1", "0.49 fs"),
                   trace(1.0, "+1", "0.49 fs"), trace(2.0, "+1", "0.49 fs")};
  return doc;
}

constexpr Preset kPresets[] = {
    {"fig1", "half-cycle sech, r = 5: conformal map, world lines, lab-frame exit time", fig1},
    {"fig2b", "half-cycle sech, r = 0.1, 0.5, 2 (and -1 at r = 2), t_p = 0.49 fs, PT reference",
     fig2b},
    {"fig2d", "half-cycle sech, r = 2, t_p = 0.49, 5.9, 14.7 fs", fig2d},
    {"fig3bc", "single-cycle, t_p = 5.9 fs: r = 0.5 traces, extrema sweep, exponential fit", fig3bc},
    {"figS2", "causality curve g(r) for half- and single-cycle drives, r in [0, 8]", figS2},
    {"figS3", "single-cycle, t_p = 0.49 fs, r = 0.1, 0.5, 1, 2", figS3},
};

}  // namespace

std::vector<PresetInfo> list_presets() {
  std::vector<PresetInfo> out;
  for (const auto& p : kPresets) out.push_back({p.name, p.description});
  return out;
}

bool is_preset(std::string_view name) {
  return std::any_of(std::begin(kPresets), std::end(kPresets),
                     [&](const Preset& p) { return name == p.name; });
}

nlohmann::json preset_document(std::string_view name) {
  for (const auto& p : kPresets) {
    if (name == p.name) return p.build();
  }
  throw InvalidArgumentError("unknown preset '" + std::string(name) + "'");
}

}  // namespace chronosqueeze
