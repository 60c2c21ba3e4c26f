#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "stlkit/band_analysis.hpp"
#include "stlkit/core.hpp"

namespace stlkit::io {

inline constexpr std::string_view kToolVersion = "0.1.0";

struct Provenance {
  std::string command;
  std::string config_hash;
  std::optional<std::uint64_t> seed;
  std::string band_mode;
  std::string rep_mode;
  std::string masslaw_constant;
  std::vector<std::string> inputs;
  std::string generated_at;  // only field allowed to differ between reruns
};

// One per-frequency quantity. dB columns are rounded to 0.01 in the JSON report.
struct Column {
  std::string name;
  std::vector<std::optional<double>> values;
  bool is_db = true;
};

struct RunReport {
  Provenance provenance;
  std::vector<std::string> warnings;
  std::optional<FrequencyGrid> grid;
  std::vector<Column> columns;
  std::vector<std::string> flags;  // per-bin flag names, empty when none
  std::vector<BandTable> bands;
  nlohmann::ordered_json summary = nlohmann::ordered_json::object();
};

std::string utc_timestamp();

nlohmann::ordered_json to_json(const RunReport& report);

// Full-precision plot data: frequency_hz, one column per Column, flags.
void write_frequency_csv(std::ostream& out, const RunReport& report);

// Writes through a temporary file and renames it into place.
void write_atomically(const std::filesystem::path& path, const std::string& content);

}  // namespace stlkit::io
