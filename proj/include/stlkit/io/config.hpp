#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "stlkit/analytic_models.hpp"
#include "stlkit/core.hpp"
#include "stlkit/pipeline.hpp"
#include "stlkit/synth_bench.hpp"

namespace stlkit::io {

// Active analysis configuration. INI layout:
//
//   [air]       density, sound_speed, temperature_c, relative_humidity
//   [tube]      mic_positions (m, "x1, x2, x3, x4") or mic_positions_mm,
//               sample_thickness (m) or sample_thickness_mm,
//               diameter (m) or diameter_mm
//   [analysis]  singular_tolerance, closure_tolerance, anechoic_threshold,
//               band_f_min, band_f_max
//
// Every key is optional; unknown sections or keys are rejected.
struct RunConfig {
  AirProperties air;
  TubeGeometry geometry = default_geometry();
  AnalysisOptions analysis;
  double band_f_min = 100.0;
  double band_f_max = 5000.0;

  static TubeGeometry default_geometry();
};

RunConfig parse_config(std::istream& in, const RunConfig& base = {});
RunConfig load_config(const std::filesystem::path& path);

// Stable text form of the effective configuration, and its SHA-256.
std::string canonical_config(const RunConfig& config);
std::string config_hash(const RunConfig& config);

// Layer sections, taken in file order: any section whose name starts with
// "layer". Keys: kind = limp | air | identity | matrix;
//   limp:   surface_density (kg/m^2)
//   air:    length (m) or length_mm
//   matrix: t11, t12, t21, t22 as "re, im"; passive_symmetric = true|false
std::vector<LayerModel> parse_stack(std::istream& in);
std::vector<LayerModel> load_stack(const std::filesystem::path& path);

// Scenario file: layer sections as above, optional [air] / [tube] overriding
// the active config, plus
//   [scenario]  incident = "re, im", termination = "re, im" (D/C),
//               snr_db = <dB> | off, seed = <u64>
//   [grid]      f_min, f_max, step (Hz)
struct ScenarioFile {
  SynthScenario scenario;
  FrequencyGrid grid;
  RunConfig config;  // config with the scenario's air/tube applied
};

ScenarioFile parse_scenario(std::istream& in, const RunConfig& base);
ScenarioFile load_scenario(const std::filesystem::path& path, const RunConfig& base);

}  // namespace stlkit::io
