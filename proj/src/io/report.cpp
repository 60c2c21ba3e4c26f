#include "stlkit/io/report.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <ostream>

#include <fmt/format.h>

#include "io/text.hpp"
#include "stlkit/errors.hpp"

namespace stlkit::io {

namespace {

using json = nlohmann::ordered_json;

json number_or_null(const std::optional<double>& v, bool is_db) {
  if (!v || !std::isfinite(*v)) return nullptr;
  return is_db ? std::round(*v * 100.0) / 100.0 : *v;
}

json band_json(const BandTable& t) {
  json nominal = json::array();
  json values = json::array();
  json coverage = json::array();
  for (std::size_t i = 0; i < t.size(); ++i) {
    nominal.push_back(t.bands[i].nominal);
    values.push_back(number_or_null(t.values[i], true));
    coverage.push_back(t.coverage[i]);
  }
  return json{{"quantity", t.quantity},
              {"nominal_hz", nominal},
              {"values_db", values},
              {"coverage", coverage},
              {"notes", t.notes}};
}

}  // namespace

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json to_json(const RunReport& r) {
  const auto& p = r.provenance;
  json provenance{{"tool", "stlkit"},
                  {"version", kToolVersion},
                  {"command", p.command},
                  {"config_hash", p.config_hash},
                  {"seed", p.seed ? json(*p.seed) : json(nullptr)},
                  {"band_mode", p.band_mode},
                  {"rep_mode", p.rep_mode},
                  {"masslaw_constant", p.masslaw_constant},
                  {"inputs", p.inputs},
                  {"generated_at", p.generated_at}};
  json out{{"provenance", provenance}, {"warnings", r.warnings}, {"summary", r.summary}};
  if (r.grid) {
    json freq{{"frequency_hz", json(std::vector<double>(r.grid->values().begin(), r.grid->values().end()))}};
    for (const auto& c : r.columns) {
      json col = json::array();
      for (const auto& v : c.values) col.push_back(number_or_null(v, c.is_db));
      freq[c.name] = std::move(col);
    }
    if (!r.flags.empty()) freq["flags"] = r.flags;
    out["frequency"] = std::move(freq);
  }
  json bands = json::array();
  for (const auto& t : r.bands) bands.push_back(band_json(t));
  out["bands"] = std::move(bands);
  return out;
}

void write_frequency_csv(std::ostream& out, const RunReport& r) {
  if (!r.grid) return;
  out << "frequency_hz";
  for (const auto& c : r.columns) out << ',' << c.name;
  if (!r.flags.empty()) out << ",flags";
  out << '\n';
  for (std::size_t i = 0; i < r.grid->size(); ++i) {
    out << detail::format_number((*r.grid)[i]);
    for (const auto& c : r.columns) {
      out << ',';
      if (c.values[i] && std::isfinite(*c.values[i])) out << detail::format_number(*c.values[i]);
    }
    if (!r.flags.empty()) out << ',' << r.flags[i];
    out << '\n';
  }
}

void write_atomically(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(fmt::format("cannot write {}", tmp.string()));
    out << content;
    if (!out.flush()) throw Error(fmt::format("write to {} failed", tmp.string()));
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace stlkit::io
