#include "stlkit/io/config.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <functional>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>
#include <openssl/evp.h>

#include "io/text.hpp"
#include "stlkit/errors.hpp"

namespace stlkit::io {

namespace pt = boost::property_tree;
using detail::format_number;
using detail::parse_double;
using detail::split;

namespace {

pt::ptree read_ini(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw FormatError(e.message(), e.line());
  }
  return tree;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError(fmt::format("cannot open {}", path.string()));
  return in;
}

void reject_unknown(const pt::ptree& section, const std::string& name,
                    std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : section) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw FormatError(fmt::format("unknown key '{}' in [{}]", key, name));
    }
  }
}

double number(const pt::ptree& section, const std::string& section_name, const std::string& key) {
  const auto text = section.get<std::string>(key);
  const auto v = parse_double(text);
  if (!v) throw FormatError(fmt::format("[{}] {} = '{}' is not a number", section_name, key, text));
  return *v;
}

std::optional<double> optional_number(const pt::ptree& section, const std::string& section_name,
                                      const std::string& key) {
  if (!section.get_child_optional(key)) return std::nullopt;
  return number(section, section_name, key);
}

std::vector<double> number_list(const pt::ptree& section, const std::string& section_name,
                                const std::string& key) {
  std::vector<double> out;
  const auto text = section.get<std::string>(key);
  for (auto field : split(text, ',')) {
    const auto v = parse_double(field);
    if (!v) throw FormatError(fmt::format("[{}] {}: '{}' is not a number", section_name, key, field));
    out.push_back(*v);
  }
  return out;
}

Complex complex_value(const pt::ptree& section, const std::string& section_name,
                      const std::string& key) {
  const auto v = number_list(section, section_name, key);
  if (v.size() == 1) return {v[0], 0.0};
  if (v.size() == 2) return {v[0], v[1]};
  throw FormatError(fmt::format("[{}] {} must be 're' or 're, im'", section_name, key));
}

// Exactly one of key (SI) or key_mm may be present.
std::optional<double> metres(const pt::ptree& section, const std::string& section_name,
                             const std::string& key) {
  const auto si = optional_number(section, section_name, key);
  const auto mm = optional_number(section, section_name, key + "_mm");
  if (si && mm) throw FormatError(fmt::format("[{}] gives both {} and {}_mm", section_name, key, key));
  if (mm) return *mm * 1e-3;
  return si;
}

AirProperties apply_air(const pt::ptree& s, const AirProperties& base) {
  reject_unknown(s, "air", {"density", "sound_speed", "temperature_c", "relative_humidity"});
  return AirProperties(optional_number(s, "air", "density").value_or(base.density()),
                       optional_number(s, "air", "sound_speed").value_or(base.sound_speed()),
                       optional_number(s, "air", "temperature_c").value_or(base.temperature_c()),
                       optional_number(s, "air", "relative_humidity").value_or(base.relative_humidity()));
}

TubeGeometry apply_tube(const pt::ptree& s, const TubeGeometry& base) {
  reject_unknown(s, "tube", {"mic_positions", "mic_positions_mm", "sample_thickness",
                             "sample_thickness_mm", "diameter", "diameter_mm"});
  auto mics = base.mic_positions();
  const bool si = s.get_child_optional("mic_positions").has_value();
  const bool mm = s.get_child_optional("mic_positions_mm").has_value();
  if (si && mm) throw FormatError("[tube] gives both mic_positions and mic_positions_mm");
  if (si || mm) {
    const auto list = number_list(s, "tube", si ? "mic_positions" : "mic_positions_mm");
    if (list.size() != 4) throw FormatError("[tube] mic_positions needs four values");
    for (std::size_t i = 0; i < 4; ++i) mics[i] = mm ? list[i] * 1e-3 : list[i];
  }
  return TubeGeometry(mics, metres(s, "tube", "sample_thickness").value_or(base.sample_thickness()),
                      metres(s, "tube", "diameter").value_or(base.tube_diameter()));
}

void apply_analysis(const pt::ptree& s, RunConfig& cfg) {
  reject_unknown(s, "analysis", {"singular_tolerance", "closure_tolerance", "anechoic_threshold",
                                 "band_f_min", "band_f_max"});
  auto& a = cfg.analysis;
  a.singular_tolerance = optional_number(s, "analysis", "singular_tolerance").value_or(a.singular_tolerance);
  a.closure_tolerance = optional_number(s, "analysis", "closure_tolerance").value_or(a.closure_tolerance);
  a.anechoic_threshold = optional_number(s, "analysis", "anechoic_threshold").value_or(a.anechoic_threshold);
  cfg.band_f_min = optional_number(s, "analysis", "band_f_min").value_or(cfg.band_f_min);
  cfg.band_f_max = optional_number(s, "analysis", "band_f_max").value_or(cfg.band_f_max);
  if (!(a.singular_tolerance > 0.0) || !(a.closure_tolerance > 0.0) || !(a.anechoic_threshold > 0.0)) {
    throw DomainError("analysis tolerances must be positive");
  }
  third_octave_bands(cfg.band_f_min, cfg.band_f_max);  // validates the range
}

// Applies [air], [tube], [analysis]; other sections must be in `extra`.
RunConfig apply_config_sections(const pt::ptree& tree, const RunConfig& base,
                                const std::function<bool(const std::string&)>& extra) {
  RunConfig cfg = base;
  for (const auto& [name, section] : tree) {
    if (name == "air") {
      cfg.air = apply_air(section, cfg.air);
    } else if (name == "tube") {
      cfg.geometry = apply_tube(section, cfg.geometry);
    } else if (name == "analysis") {
      apply_analysis(section, cfg);
    } else if (!extra(name)) {
      throw FormatError(fmt::format("unknown section [{}]", name));
    }
  }
  return cfg;
}

bool is_layer_section(const std::string& name) { return name.rfind("layer", 0) == 0; }

LayerModel parse_layer(const std::string& name, const pt::ptree& s) {
  const auto kind = s.get_optional<std::string>("kind");
  if (!kind) throw FormatError(fmt::format("[{}] has no kind", name));
  if (*kind == "identity") {
    reject_unknown(s, name, {"kind"});
    return LayerModel::identity();
  }
  if (*kind == "limp") {
    reject_unknown(s, name, {"kind", "surface_density"});
    if (!s.get_child_optional("surface_density")) {
      throw FormatError(fmt::format("[{}] limp layer needs surface_density", name));
    }
    return LayerModel::limp_mass(number(s, name, "surface_density"));
  }
  if (*kind == "air") {
    reject_unknown(s, name, {"kind", "length", "length_mm"});
    const auto len = metres(s, name, "length");
    if (!len) throw FormatError(fmt::format("[{}] air layer needs length or length_mm", name));
    return LayerModel::air_gap(*len);
  }
  if (*kind == "matrix") {
    reject_unknown(s, name, {"kind", "t11", "t12", "t21", "t22", "passive_symmetric"});
    Matrix2 m{complex_value(s, name, "t11"), complex_value(s, name, "t12"),
              complex_value(s, name, "t21"), complex_value(s, name, "t22")};
    return LayerModel::explicit_matrix(m, s.get<bool>("passive_symmetric", false));
  }
  throw FormatError(fmt::format("[{}] unknown layer kind '{}'", name, *kind));
}

std::vector<LayerModel> layers_of(const pt::ptree& tree) {
  std::vector<LayerModel> out;
  for (const auto& [name, section] : tree) {
    if (is_layer_section(name)) out.push_back(parse_layer(name, section));
  }
  return out;
}

}  // namespace

TubeGeometry RunConfig::default_geometry() {
  constexpr double d = 0.001;
  return TubeGeometry({-0.33, -0.25, d + 0.25, d + 0.33}, d, 0.0998);
}

RunConfig parse_config(std::istream& in, const RunConfig& base) {
  return apply_config_sections(read_ini(in), base, [](const std::string&) { return false; });
}

RunConfig load_config(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_config(in);
}

std::string canonical_config(const RunConfig& c) {
  const auto& x = c.geometry.mic_positions();
  std::string out;
  out += fmt::format("[air]\ndensity = {}\nsound_speed = {}\ntemperature_c = {}\nrelative_humidity = {}\n",
                     format_number(c.air.density()), format_number(c.air.sound_speed()),
                     format_number(c.air.temperature_c()), format_number(c.air.relative_humidity()));
  out += fmt::format("[tube]\nmic_positions = {}, {}, {}, {}\nsample_thickness = {}\ndiameter = {}\n",
                     format_number(x[0]), format_number(x[1]), format_number(x[2]),
                     format_number(x[3]), format_number(c.geometry.sample_thickness()),
                     format_number(c.geometry.tube_diameter()));
  out += fmt::format(
      "[analysis]\nsingular_tolerance = {}\nclosure_tolerance = {}\nanechoic_threshold = {}\n"
      "band_f_min = {}\nband_f_max = {}\n",
      format_number(c.analysis.singular_tolerance), format_number(c.analysis.closure_tolerance),
      format_number(c.analysis.anechoic_threshold), format_number(c.band_f_min),
      format_number(c.band_f_max));
  return out;
}

std::string config_hash(const RunConfig& config) {
  const auto text = canonical_config(config);
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 digest failed");
  }
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

std::vector<LayerModel> parse_stack(std::istream& in) {
  const auto tree = read_ini(in);
  for (const auto& [name, section] : tree) {
    if (!is_layer_section(name)) throw FormatError(fmt::format("unknown section [{}] in stack", name));
  }
  auto layers = layers_of(tree);
  if (layers.empty()) throw FormatError("stack file has no layer sections");
  return layers;
}

std::vector<LayerModel> load_stack(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_stack(in);
}

ScenarioFile parse_scenario(std::istream& in, const RunConfig& base) {
  const auto tree = read_ini(in);
  const auto cfg = apply_config_sections(tree, base, [](const std::string& name) {
    return name == "scenario" || name == "grid" || is_layer_section(name);
  });

  auto layers = layers_of(tree);
  if (layers.empty()) throw FormatError("scenario has no layer sections");

  const auto grid_section = tree.get_child_optional("grid");
  if (!grid_section) throw FormatError("scenario needs a [grid] section");
  reject_unknown(*grid_section, "grid", {"f_min", "f_max", "step"});
  for (const char* key : {"f_min", "f_max", "step"}) {
    if (!grid_section->get_child_optional(key)) throw FormatError(fmt::format("[grid] needs {}", key));
  }
  auto grid = FrequencyGrid::linear(number(*grid_section, "grid", "f_min"),
                                    number(*grid_section, "grid", "f_max"),
                                    number(*grid_section, "grid", "step"));

  SynthScenario scenario{std::move(layers), cfg.geometry, cfg.air, Complex{1.0}, Complex{0.0}, std::nullopt};
  if (const auto s = tree.get_child_optional("scenario")) {
    reject_unknown(*s, "scenario", {"incident", "termination", "snr_db", "seed"});
    if (s->get_child_optional("incident")) scenario.incident = complex_value(*s, "scenario", "incident");
    if (s->get_child_optional("termination")) {
      scenario.termination = complex_value(*s, "scenario", "termination");
    }
    const auto snr = s->get_optional<std::string>("snr_db");
    if (snr && detail::trim(*snr) != "off") {
      const auto v = parse_double(*snr);
      if (!v) throw FormatError(fmt::format("[scenario] snr_db = '{}' is not a number", *snr));
      std::uint64_t seed = 0;
      if (const auto seed_text = s->get_optional<std::string>("seed")) {
        const auto parsed = detail::parse_u64(*seed_text);
        if (!parsed) throw FormatError(fmt::format("[scenario] seed = '{}' is not a u64", *seed_text));
        seed = *parsed;
      }
      scenario.noise = NoiseSpec{*v, seed};
    }
  }
  if (!(std::abs(scenario.termination) < 1.0)) {
    throw DomainError("termination reflection |D/C| must be below 1");
  }
  return {std::move(scenario), std::move(grid), cfg};
}

ScenarioFile load_scenario(const std::filesystem::path& path, const RunConfig& base) {
  auto in = open_input(path);
  return parse_scenario(in, base);
}

}  // namespace stlkit::io
