#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "chronosqueeze/errors.h"
#include "chronosqueeze/scenarios.h"
#include "chronosqueeze/units.h"

namespace cs = chronosqueeze;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("chronosqueeze_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Small scenario touching every product.
json small_doc() {
  json doc = cs::preset_document("fig3bc");
  doc["name"] = "small";
  doc["t_d"] = {{"start", -6.0}, {"stop", 6.0}, {"step", 1.0}};
  doc["products"]["fit"]["r_values"] = {0.1, 0.2, 0.3, 0.4};
  doc["products"]["map"] = {{"stride", 512}};
  doc["products"]["worldlines"] = {{"count", 3}, {"span", 2.0}, {"z_points", 5}};
  doc["products"]["lab_frame"] = {{"start", "50 fs"}, {"stop", "80 fs"}, {"step", "5 fs"}};
  doc["products"]["causality"] = {{"shapes", {"half_cycle"}}, {"r_max", 1.0}, {"points", 3}};
  doc["products"]["pt_reference"] = true;
  return doc;
}

}  // namespace

TEST(Units, Parsing) {
  EXPECT_DOUBLE_EQ(cs::parse_quantity("0.49 fs", cs::Dimension::Time, "s"), 0.49e-15);
  EXPECT_DOUBLE_EQ(cs::parse_quantity("15um", cs::Dimension::Length, "m"), 15e-6);
  EXPECT_DOUBLE_EQ(cs::parse_quantity("15 \xC2\xB5m", cs::Dimension::Length, "m"), 15e-6);
  EXPECT_DOUBLE_EQ(cs::parse_quantity("26", cs::Dimension::Frequency, "THz"), 26e12);
  EXPECT_DOUBLE_EQ(cs::parse_quantity("2.5 ps", cs::Dimension::Time, "fs"), 2.5e-12);
  EXPECT_THROW(cs::parse_quantity("3 parsecs", cs::Dimension::Length, "m"), cs::InvalidArgumentError);
  EXPECT_THROW(cs::parse_quantity("fs", cs::Dimension::Time, "fs"), cs::InvalidArgumentError);
  EXPECT_THROW(cs::parse_quantity("1 THz", cs::Dimension::Time, "fs"), cs::InvalidArgumentError);
}

TEST(Presets, Catalog) {
  const auto presets = cs::list_presets();
  ASSERT_EQ(presets.size(), 6u);
  for (const char* name : {"fig1", "fig2b", "fig2d", "fig3bc", "figS2", "figS3"}) {
    EXPECT_TRUE(cs::is_preset(name)) << name;
    EXPECT_NO_THROW(cs::config_from_json(cs::preset_document(name)).validate()) << name;
  }
  EXPECT_THROW(cs::preset_document("fig9"), cs::InvalidArgumentError);
}

TEST(Presets, CaptionParameters) {
  const auto fig1 = cs::resolve_config("fig1");
  EXPECT_EQ(fig1.r, 5.0);
  const auto fig2d = cs::resolve_config("fig2d");
  ASSERT_EQ(fig2d.traces.size(), 3u);
  EXPECT_DOUBLE_EQ(fig2d.traces[0].t_p_fs, 0.49);
  EXPECT_DOUBLE_EQ(fig2d.traces[1].t_p_fs, 5.9);
  EXPECT_DOUBLE_EQ(fig2d.traces[2].t_p_fs, 14.7);
  for (const auto& t : fig2d.traces) EXPECT_EQ(t.r, 2.0);
  const auto fig2b = cs::resolve_config("fig2b");
  EXPECT_EQ(fig2b.traces.size(), 4u);
  EXPECT_EQ(fig2b.traces.back().polarity, cs::Polarity::Negative);
  EXPECT_TRUE(fig2b.pt_reference);
  const auto fig3 = cs::resolve_config("fig3bc");
  EXPECT_EQ(fig3.shape, cs::PulseShape::SingleCycle);
  ASSERT_TRUE(fig3.fit.has_value());
  EXPECT_EQ(fig3.fit->r_values.size(), 16u);
  EXPECT_DOUBLE_EQ(fig3.fit->r_values.back(), 0.5);
  const auto s2 = cs::resolve_config("figS2");
  ASSERT_TRUE(s2.causality.has_value());
  EXPECT_EQ(s2.causality->r_max, 8.0);
  const auto s3 = cs::resolve_config("figS3");
  for (const auto& t : s3.traces) EXPECT_DOUBLE_EQ(t.t_p_fs, 0.49);
}

TEST(Config, CanonicalRoundTrip) {
  for (const auto& p : cs::list_presets()) {
    const auto c = cs::resolve_config(p.name);
    const json once = cs::config_to_json(c);
    EXPECT_EQ(cs::config_to_json(cs::config_from_json(once)), once) << p.name;
    EXPECT_EQ(cs::config_hash(cs::config_from_json(once)), cs::config_hash(c));
  }
}

TEST(Config, UnitsAtTheBoundary) {
  json doc = cs::preset_document("fig2b");
  doc["traces"][0]["t_p"] = "490 as";
  EXPECT_THROW(cs::config_from_json(doc), cs::InvalidArgumentError);
  doc["traces"][0]["t_p"] = "0.00049 ps";
  EXPECT_NEAR(cs::config_from_json(doc).traces[0].t_p_fs, 0.49, 1e-12);
  doc["crystal"]["length"] = "0.015 mm";
  EXPECT_NEAR(cs::config_from_json(doc).crystal().length, 15e-6, 1e-18);
}

TEST(Config, Overrides) {
  json doc = cs::preset_document("fig2b");
  cs::apply_override(doc, "traces.1.r=0.75");
  cs::apply_override(doc, "pulse.shape=single_cycle");
  cs::apply_override(doc, "numerics.map_points=4097");
  const auto c = cs::config_from_json(doc);
  EXPECT_EQ(c.traces[1].r, 0.75);
  EXPECT_EQ(c.shape, cs::PulseShape::SingleCycle);
  EXPECT_EQ(c.map_grid.points, 4097u);
  EXPECT_THROW(cs::apply_override(doc, "traces.9.r=1"), cs::InvalidArgumentError);
  EXPECT_THROW(cs::apply_override(doc, "no_equals_sign"), cs::InvalidArgumentError);
  cs::apply_override(doc, "crystal.colour=blue");
  EXPECT_THROW(cs::config_from_json(doc), cs::InvalidArgumentError);
}

TEST(Config, HashTracksContentNotOutputDir) {
  auto a = cs::resolve_config("fig2b");
  auto b = a;
  b.output_dir = "elsewhere";
  EXPECT_EQ(cs::config_hash(a), cs::config_hash(b));
  b.traces[0].r = 0.11;
  EXPECT_NE(cs::config_hash(a), cs::config_hash(b));
  EXPECT_EQ(cs::config_hash(a).size(), 16u);
}

TEST(Config, Validation) {
  auto c = cs::resolve_config("fig2b");
  c.traces[0].t_p_fs = 0.0;
  EXPECT_THROW(c.validate(), cs::InvalidArgumentError);
  c = cs::resolve_config("fig2b");
  c.t_d_fs.step = 0.0;
  EXPECT_THROW(c.validate(), cs::InvalidArgumentError);
  EXPECT_THROW(cs::resolve_config("/nonexistent/config.json"), cs::InvalidArgumentError);
}

TEST(Run, WritesEveryProductWithHashHeader) {
  const auto config = cs::config_from_json(small_doc());
  const auto dir = scratch("products");
  const auto result = cs::run_scenario(config, dir);
  const std::string hash = cs::config_hash(config);
  for (const char* name : {"summary.json", "fit_report.json", "extrema.csv", "normalized.csv",
                           "worldlines.csv", "lab_frame.csv", "causality.csv",
                           "trace_r0.5_sp_tp5.9fs.csv", "trace_r0.5_sm_tp5.9fs.csv", "map_r0.5_sp.csv"}) {
    EXPECT_TRUE(fs::exists(dir / name)) << name;
  }
  for (const auto& f : result.files) {
    const std::string body = slurp(f);
    EXPECT_NE(body.find(hash), std::string::npos) << f;
    if (f.extension() == ".csv") EXPECT_EQ(body.rfind("# config_hash=" + hash, 0), 0u) << f;
  }
  std::ifstream trace(dir / "trace_r0.5_sp_tp5.9fs.csv");
  std::string comment, header, first;
  std::getline(trace, comment);
  std::getline(trace, header);
  std::getline(trace, first);
  EXPECT_EQ(header, "t_d_fs,V,rdv,rdv_simplified,degree_pct");
  EXPECT_EQ(std::count(first.begin(), first.end(), ','), 4);
  EXPECT_NE(first.back(), ',');  // degree filled because the fit ran

  const json report = json::parse(slurp(dir / "fit_report.json"));
  for (const char* key : {"A1", "A2", "residual_rms", "branch", "r_values"}) EXPECT_TRUE(report.contains(key));
  EXPECT_EQ(report["branch"], "squeezing");
  EXPECT_EQ(result.summary["traces"].size(), 2u);
  EXPECT_TRUE(result.summary["validity"][0]["ok"].get<bool>());
}

TEST(Run, TraceWithoutFitLeavesDegreeEmpty) {
  json doc = small_doc();
  doc["products"] = json::object();
  const auto dir = scratch("nofit");
  cs::run_scenario(cs::config_from_json(doc), dir);
  std::ifstream trace(dir / "trace_r0.5_sp_tp5.9fs.csv");
  std::string line;
  std::getline(trace, line);
  std::getline(trace, line);
  std::getline(trace, line);
  EXPECT_EQ(line.back(), ',');
}

TEST(Run, BitIdenticalReruns) {
  const auto config = cs::config_from_json(small_doc());
  const auto a = scratch("rerun_a"), b = scratch("rerun_b");
  const auto ra = cs::run_scenario(config, a);
  cs::run_scenario(config, b);
  for (const auto& f : ra.files) EXPECT_EQ(slurp(f), slurp(b / f.filename())) << f.filename();
}

TEST(Run, ValidityGateStopsBeforeOutput) {
  json doc = cs::preset_document("fig1");
  doc["pulse"]["r"] = 25.0;
  const auto dir = scratch("invalid");
  EXPECT_THROW(cs::run_scenario(cs::config_from_json(doc), dir), cs::ValidityError);
  EXPECT_FALSE(fs::exists(dir));
  const auto reports = cs::check_scenario(cs::config_from_json(doc));
  ASSERT_FALSE(reports.empty());
  EXPECT_FALSE(reports[0].ok());
}

TEST(Cli, ExitCodes) {
  const std::string cli = CHRONOSQUEEZE_CLI;
  auto code = [&](const std::string& args) {
    const int status = std::system((cli + " " + args + " > /dev/null 2>&1").c_str());
    return WEXITSTATUS(status);
  };
  EXPECT_EQ(code("list"), 0);
  EXPECT_EQ(code("check fig2b"), 0);
  EXPECT_EQ(code("check fig1 --override pulse.r=25"), 2);
  EXPECT_EQ(code("run fig1 --override pulse.r=25 --out " + scratch("cli_invalid").string()), 2);
  EXPECT_EQ(code("run nothing_here"), 1);
  EXPECT_EQ(code("run fig2b --override crystal.colour=blue"), 1);
  EXPECT_NE(code("frobnicate"), 0);

  const auto config = scratch("cli_config") ;
  fs::create_directories(config);
  json doc = small_doc();
  doc["products"] = json::object();
  std::ofstream(config / "c.json") << doc.dump(2);
  const auto out = scratch("cli_out");
  EXPECT_EQ(code("run " + (config / "c.json").string() + " --out " + out.string()), 0);
  EXPECT_TRUE(fs::exists(out / "summary.json"));
}
