#include "stlkit/io/csv.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <string>

#include <fmt/format.h>

#include "io/text.hpp"
#include "stlkit/errors.hpp"

namespace stlkit::io {

using detail::format_number;
using detail::parse_double;
using detail::split;
using detail::trim;

namespace {

constexpr std::string_view kMicBanner = "stlkit mic-spectra v1";
constexpr std::string_view kMicColumns =
    "frequency_hz,p1_re,p1_im,p2_re,p2_im,p3_re,p3_im,p4_re,p4_im";

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError(fmt::format("cannot open {}", path.string()));
  return in;
}

double field_number(std::string_view field, std::size_t line, std::string_view what) {
  const auto v = parse_double(field);
  if (!v) throw FormatError(fmt::format("{} '{}' is not a number", what, field), line);
  return *v;
}

bool close(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(std::abs(a), std::abs(b)); }

}  // namespace

void write_mic_spectra(std::ostream& out, const MicSpectraFile& file) {
  const auto& grid = file.pressures[0].grid();
  const auto& x = file.geometry.mic_positions();
  out << "# " << kMicBanner << '\n';
  out << "# bins = " << grid.size() << '\n';
  out << fmt::format("# mic_positions_m = {},{},{},{}\n", format_number(x[0]), format_number(x[1]),
                     format_number(x[2]), format_number(x[3]));
  out << "# sample_thickness_m = " << format_number(file.geometry.sample_thickness()) << '\n';
  out << "# tube_diameter_m = " << format_number(file.geometry.tube_diameter()) << '\n';
  out << "# air_density = " << format_number(file.air.density()) << '\n';
  out << "# air_sound_speed = " << format_number(file.air.sound_speed()) << '\n';
  out << "# air_temperature_c = " << format_number(file.air.temperature_c()) << '\n';
  out << "# air_relative_humidity = " << format_number(file.air.relative_humidity()) << '\n';
  out << kMicColumns << '\n';
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out << format_number(grid[i]);
    for (const auto& p : file.pressures) {
      out << ',' << format_number(p[i].real()) << ',' << format_number(p[i].imag());
    }
    out << '\n';
  }
}

MicSpectraFile read_mic_spectra(std::istream& in) {
  std::map<std::string, std::string, std::less<>> header;
  std::vector<double> freqs;
  std::array<std::vector<Complex>, 4> p;
  bool seen_columns = false;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto text = trim(raw);
    if (text.empty()) continue;
    if (text.front() == '#') {
      if (seen_columns) throw FormatError("header line after data", line);
      const auto body = trim(text.substr(1));
      const auto eq = body.find('=');
      if (eq == std::string_view::npos) continue;  // banner or free comment
      header[std::string(trim(body.substr(0, eq)))] = std::string(trim(body.substr(eq + 1)));
      continue;
    }
    if (!seen_columns) {
      if (text != kMicColumns) {
        throw FormatError(fmt::format("expected column header '{}'", kMicColumns), line);
      }
      seen_columns = true;
      continue;
    }
    const auto fields = split(text, ',');
    if (fields.size() != 9) {
      throw FormatError(fmt::format("expected 9 columns, found {}", fields.size()), line);
    }
    const double f = field_number(fields[0], line, "frequency");
    if (!(f > 0.0)) throw FormatError("frequency must be positive", line);
    if (!freqs.empty() && !(f > freqs.back())) {
      throw FormatError("frequencies must be strictly increasing", line);
    }
    freqs.push_back(f);
    for (std::size_t m = 0; m < 4; ++m) {
      p[m].emplace_back(field_number(fields[1 + 2 * m], line, "value"),
                        field_number(fields[2 + 2 * m], line, "value"));
      if (!std::isfinite(p[m].back().real()) || !std::isfinite(p[m].back().imag())) {
        throw FormatError("non-finite pressure", line);
      }
    }
  }
  if (!seen_columns) throw FormatError("missing column header line");
  if (freqs.empty()) throw FormatError("no data rows");

  const auto need = [&](std::string_view key) -> const std::string& {
    const auto it = header.find(key);
    if (it == header.end()) throw FormatError(fmt::format("missing header '# {} = ...'", key));
    return it->second;
  };
  const auto header_number = [&](std::string_view key) {
    const auto v = parse_double(need(key));
    if (!v) throw FormatError(fmt::format("header {} is not a number", key));
    return *v;
  };

  const auto bins = detail::parse_u64(need("bins"));
  if (!bins || *bins != freqs.size()) {
    throw FormatError(fmt::format("header declares {} bins, file has {} rows", need("bins"), freqs.size()));
  }
  std::array<double, 4> mics{};
  const auto mic_fields = split(need("mic_positions_m"), ',');
  if (mic_fields.size() != 4) throw FormatError("mic_positions_m needs four values");
  for (std::size_t i = 0; i < 4; ++i) mics[i] = field_number(mic_fields[i], 0, "mic position");

  const double temperature = header.count("air_temperature_c") ? header_number("air_temperature_c") : 20.0;
  const double humidity =
      header.count("air_relative_humidity") ? header_number("air_relative_humidity") : 50.0;

  FrequencyGrid grid(std::move(freqs));
  return MicSpectraFile{
      TubeGeometry(mics, header_number("sample_thickness_m"), header_number("tube_diameter_m")),
      AirProperties(header_number("air_density"), header_number("air_sound_speed"), temperature,
                    humidity),
      {ComplexSpectrum(grid, std::move(p[0])), ComplexSpectrum(grid, std::move(p[1])),
       ComplexSpectrum(grid, std::move(p[2])), ComplexSpectrum(grid, std::move(p[3]))}};
}

MicSpectraFile read_mic_spectra(const std::filesystem::path& path) {
  auto in = open_input(path);
  try {
    return read_mic_spectra(in);
  } catch (const FormatError& e) {
    throw FormatError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

void require_matching_setup(const MicSpectraFile& file, const TubeGeometry& geometry,
                            const AirProperties& air) {
  std::vector<std::string> diffs;
  const auto check = [&](std::string_view what, double in_file, double active) {
    if (!close(in_file, active)) diffs.push_back(fmt::format("{}: file {} vs config {}", what, in_file, active));
  };
  for (std::size_t i = 0; i < 4; ++i) {
    check(fmt::format("x{}", i + 1), file.geometry.mic_positions()[i], geometry.mic_positions()[i]);
  }
  check("sample_thickness", file.geometry.sample_thickness(), geometry.sample_thickness());
  check("tube_diameter", file.geometry.tube_diameter(), geometry.tube_diameter());
  check("air_density", file.air.density(), air.density());
  check("air_sound_speed", file.air.sound_speed(), air.sound_speed());
  if (!diffs.empty()) {
    std::string msg = "file setup does not match the active config:";
    for (const auto& d : diffs) msg += "\n  " + d;
    throw GeometryMismatchError(msg);
  }
}

void write_band_tables(std::ostream& out, std::span<const BandTable> tables) {
  if (tables.empty()) return;
  const auto& bands = tables.front().bands;
  out << "quantity";
  for (const auto& b : bands) out << ',' << format_number(b.nominal);
  out << '\n';
  for (const auto& t : tables) {
    if (t.bands.size() != bands.size()) throw GridMismatchError("band tables must share bands");
    out << t.quantity;
    for (const auto& v : t.values) {
      out << ',';
      if (v) out << format_number(*v);
    }
    out << '\n';
    const bool full = std::all_of(t.coverage.begin(), t.coverage.end(), [](double c) { return c == 1.0; });
    if (!full) {
      out << t.quantity << ".coverage";
      for (double c : t.coverage) out << ',' << format_number(c);
      out << '\n';
    }
  }
}

std::vector<BandTable> read_band_tables(std::istream& in) {
  std::vector<ThirdOctaveBand> bands;
  std::vector<BandTable> tables;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto text = trim(raw);
    if (text.empty() || text.front() == '#') continue;
    const auto fields = split(text, ',');
    if (bands.empty()) {
      if (fields.front() != "quantity" || fields.size() < 2) {
        throw FormatError("expected header 'quantity,<nominal centres...>'", line);
      }
      for (std::size_t i = 1; i < fields.size(); ++i) {
        const auto band = band_for_nominal(field_number(fields[i], line, "band centre"));
        if (!band) throw FormatError(fmt::format("'{}' is not a nominal band centre", fields[i]), line);
        if (!bands.empty() && band->index <= bands.back().index) {
          throw FormatError("band centres must be increasing", line);
        }
        bands.push_back(*band);
      }
      continue;
    }
    if (fields.size() != bands.size() + 1) {
      throw FormatError(fmt::format("expected {} columns, found {}", bands.size() + 1, fields.size()), line);
    }
    const std::string name(fields.front());
    constexpr std::string_view kSuffix = ".coverage";
    if (name.size() > kSuffix.size() && name.ends_with(kSuffix)) {
      const auto base = name.substr(0, name.size() - kSuffix.size());
      if (tables.empty() || tables.back().quantity != base) {
        throw FormatError(fmt::format("coverage row '{}' does not follow row '{}'", name, base), line);
      }
      for (std::size_t i = 0; i < bands.size(); ++i) {
        const double c = field_number(fields[i + 1], line, "coverage");
        if (c < 0.0 || c > 1.0) throw FormatError("coverage must lie in [0, 1]", line);
        tables.back().coverage[i] = c;
      }
      continue;
    }
    BandTable t{name, bands, {}, std::vector<double>(bands.size(), 1.0), {}};
    for (std::size_t i = 0; i < bands.size(); ++i) {
      if (fields[i + 1].empty()) {
        t.values.emplace_back();
        t.coverage[i] = 0.0;
      } else {
        t.values.emplace_back(field_number(fields[i + 1], line, "value"));
      }
    }
    tables.push_back(std::move(t));
  }
  if (bands.empty()) throw FormatError("missing band header");
  if (tables.empty()) throw FormatError("no quantity rows");
  return tables;
}

std::vector<BandTable> read_band_tables(const std::filesystem::path& path) {
  auto in = open_input(path);
  try {
    return read_band_tables(in);
  } catch (const FormatError& e) {
    throw FormatError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

void write_curve(std::ostream& out, const NarrowbandCurve& curve, std::string_view name) {
  out << "frequency_hz," << name << '\n';
  for (std::size_t i = 0; i < curve.grid.size(); ++i) {
    out << format_number(curve.grid[i]) << ',';
    if (curve.db[i]) out << format_number(*curve.db[i]);
    out << '\n';
  }
}

NarrowbandCurve read_curve(std::istream& in) {
  std::vector<double> f;
  std::vector<std::optional<double>> v;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto text = trim(raw);
    if (text.empty() || text.front() == '#') continue;
    const auto fields = split(text, ',');
    if (fields.size() != 2) throw FormatError("expected 2 columns", line);
    if (f.empty() && v.empty() && !parse_double(fields[0])) continue;  // header
    const double freq = field_number(fields[0], line, "frequency");
    if (!(freq > 0.0) || (!f.empty() && !(freq > f.back()))) {
      throw FormatError("frequencies must be positive and strictly increasing", line);
    }
    f.push_back(freq);
    if (fields[1].empty()) {
      v.emplace_back();
    } else {
      v.emplace_back(field_number(fields[1], line, "value"));
    }
  }
  if (f.empty()) throw FormatError("curve has no data rows");
  return {FrequencyGrid(std::move(f)), std::move(v)};
}

NarrowbandCurve read_curve(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_curve(in);
}

std::vector<MaterialSpec> read_materials(std::istream& in) {
  std::vector<MaterialSpec> out;
  std::string raw;
  std::size_t line = 0;
  bool header = true;
  while (std::getline(in, raw)) {
    ++line;
    const auto text = trim(raw);
    if (text.empty() || text.front() == '#') continue;
    const auto fields = split(text, ',');
    if (header) {
      header = false;
      if (fields.size() >= 3 && !parse_double(fields[1])) continue;
    }
    if (fields.size() != 3 && fields.size() != 4) throw FormatError("expected 3 or 4 columns", line);
    std::optional<double> density;
    if (fields.size() == 4 && !fields[3].empty()) density = field_number(fields[3], line, "density");
    try {
      out.push_back(MaterialSpec::from_mm(std::string(fields[0]),
                                          field_number(fields[1], line, "thickness"),
                                          field_number(fields[2], line, "surface density"), density));
    } catch (const DomainError& e) {
      throw FormatError(e.what(), line);
    }
  }
  if (out.empty()) throw FormatError("material list is empty");
  return out;
}

std::vector<MaterialSpec> read_materials(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_materials(in);
}

}  // namespace stlkit::io
