// stlkit: impedance-tube and two-room transmission loss analysis.
//
// Exit codes: 0 success, 2 input/format error, 3 numerical validity error.

#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "stlkit/commands.hpp"
#include "stlkit/errors.hpp"

namespace fs = std::filesystem;
using namespace stlkit;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

struct Outputs {
  std::string report;  // JSON; stdout when empty
  std::string frequency_csv;
  std::string bands_csv;
};

void add_outputs(CLI::App* cmd, Outputs& out) {
  cmd->add_option("-o,--output", out.report, "JSON report path (default: stdout)");
  cmd->add_option("--csv", out.frequency_csv, "per-frequency CSV (full precision)");
  cmd->add_option("--bands-csv", out.bands_csv, "band table CSV (full precision)");
}

void emit(const io::RunReport& report, const Outputs& out) {
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
  const auto json = io::to_json(report).dump(2) + "\n";
  if (!out.frequency_csv.empty()) {
    std::ostringstream s;
    io::write_frequency_csv(s, report);
    io::write_atomically(out.frequency_csv, s.str());
  }
  if (!out.bands_csv.empty()) {
    std::ostringstream s;
    io::write_band_tables(s, report.bands);
    io::write_atomically(out.bands_csv, s.str());
  }
  if (out.report.empty()) {
    std::cout << json;
  } else {
    io::write_atomically(out.report, json);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transmission loss, insertion loss and mass-law toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  cli::GlobalOptions options;
  std::uint64_t seed = 0;
  const std::map<std::string, AveragingMode> modes{{"power", AveragingMode::power},
                                                   {"db", AveragingMode::db}};
  app.add_option("--config", config_path, "INI configuration (air, tube, analysis)")
      ->check(CLI::ExistingFile);
  app.add_option("--band-mode", options.band_mode, "band aggregation: power|db")
      ->transform(CLI::CheckedTransformer(modes, CLI::ignore_case));
  app.add_option("--rep-mode", options.rep_mode, "repetition averaging: db|power")
      ->transform(CLI::CheckedTransformer(modes, CLI::ignore_case));
  app.add_option("--masslaw-constant", options.masslaw_constant, "paper (-48 dB) | normal")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, MassLawConstant>{{"paper", MassLawConstant::paper},
                                                 {"normal", MassLawConstant::normal}},
          CLI::ignore_case));
  auto* seed_opt = app.add_option("--seed", seed, "noise seed override");

  // synth
  auto* synth = app.add_subcommand("synth", "generate four-microphone spectra from a scenario");
  std::string scenario_path;
  std::string synth_out;
  synth->add_option("scenario", scenario_path, "scenario INI")->required()->check(CLI::ExistingFile);
  synth->add_option("-o,--output", synth_out, "mic-spectra CSV path (default: stdout)");

  // stl
  auto* stl = app.add_subcommand("stl", "transmission loss from mic-spectra files (one per repetition)");
  std::vector<std::string> stl_inputs;
  Outputs stl_out;
  stl->add_option("inputs", stl_inputs, "mic-spectra CSV files")->required()->check(CLI::ExistingFile);
  add_outputs(stl, stl_out);

  // masslaw
  auto* masslaw = app.add_subcommand("masslaw", "mass-law prediction for a material list");
  std::string materials_path;
  std::vector<double> masslaw_freqs;
  Outputs masslaw_out;
  masslaw->add_option("--materials", materials_path, "CSV name,thickness_mm,surface_density[,density]")
      ->check(CLI::ExistingFile);
  masslaw->add_option("-f,--freq", masslaw_freqs, "evaluate at these frequencies instead of bands");
  add_outputs(masslaw, masslaw_out);

  // il
  auto* il = app.add_subcommand("il", "insertion loss from receiver-room band tables");
  std::string il_r0;
  std::string il_rs;
  Outputs il_out;
  il->add_option("receiver_empty", il_r0, "L_r0 band table CSV")->required()->check(CLI::ExistingFile);
  il->add_option("receiver_with_sample", il_rs, "L_rs band table CSV")->required()->check(CLI::ExistingFile);
  add_outputs(il, il_out);

  // stack
  auto* stack = app.add_subcommand("stack", "normal-incidence STL of a layered stack");
  std::string stack_path;
  double stack_fmin = 100.0;
  double stack_fmax = 5000.0;
  double stack_step = 10.0;
  Outputs stack_out;
  stack->add_option("stack", stack_path, "stack INI")->required()->check(CLI::ExistingFile);
  stack->add_option("--fmin", stack_fmin, "grid start (Hz)");
  stack->add_option("--fmax", stack_fmax, "grid end (Hz)");
  stack->add_option("--step", stack_step, "grid step (Hz)");
  add_outputs(stack, stack_out);

  // bands
  auto* bands = app.add_subcommand("bands", "list one-third-octave bands or band-average a curve");
  std::optional<double> bands_fmin;
  std::optional<double> bands_fmax;
  std::string curve_path;
  std::string kind_name = "loss";
  Outputs bands_out;
  bands->add_option("--fmin", bands_fmin, "lowest nominal centre (default: config)");
  bands->add_option("--fmax", bands_fmax, "highest nominal centre (default: config)");
  bands->add_option("--input", curve_path, "narrowband CSV frequency_hz,value")->check(CLI::ExistingFile);
  bands->add_option("--kind", kind_name, "loss|level (power-mode linearisation)")
      ->check(CLI::IsMember({"loss", "level"}));
  add_outputs(bands, bands_out);

  CLI11_PARSE(app, argc, argv);

  try {
    cli::Context ctx{config_path.empty() ? io::RunConfig{} : io::load_config(config_path), options};
    if (seed_opt->count()) ctx.options.seed = seed;

    if (synth->parsed()) {
      const auto scenario = io::load_scenario(scenario_path, ctx.config);
      const auto file = cli::cmd_synth(scenario, ctx);
      std::ostringstream s;
      io::write_mic_spectra(s, file);
      if (synth_out.empty()) {
        std::cout << s.str();
      } else {
        io::write_atomically(synth_out, s.str());
      }
    } else if (stl->parsed()) {
      std::vector<fs::path> paths(stl_inputs.begin(), stl_inputs.end());
      emit(cli::cmd_stl(paths, ctx), stl_out);
    } else if (masslaw->parsed()) {
      const auto materials =
          materials_path.empty() ? curtain_material_catalogue() : io::read_materials(materials_path);
      emit(cli::cmd_masslaw(materials, masslaw_freqs, ctx), masslaw_out);
    } else if (il->parsed()) {
      emit(cli::cmd_il(il_r0, il_rs, ctx), il_out);
    } else if (stack->parsed()) {
      const auto layers = io::load_stack(stack_path);
      emit(cli::cmd_stack(layers, FrequencyGrid::linear(stack_fmin, stack_fmax, stack_step), ctx),
           stack_out);
    } else if (bands->parsed()) {
      std::optional<NarrowbandCurve> curve;
      if (!curve_path.empty()) curve = io::read_curve(curve_path);
      const auto kind = kind_name == "level" ? LevelKind::level : LevelKind::loss;
      const auto report = cli::cmd_bands(bands_fmin.value_or(ctx.config.band_f_min),
                                         bands_fmax.value_or(ctx.config.band_f_max), curve, kind, ctx);
      if (curve || !bands_out.report.empty() || !bands_out.bands_csv.empty()) {
        emit(report, bands_out);
      } else {
        for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
        std::cout << "nominal_hz,exact_center_hz,lower_hz,upper_hz\n";
        for (const auto& b : report.summary["bands"]) {
          std::cout << fmt::format("{},{:.4f},{:.4f},{:.4f}\n", b["nominal_hz"].get<double>(),
                                   b["exact_center_hz"].get<double>(), b["lower_hz"].get<double>(),
                                   b["upper_hz"].get<double>());
        }
      }
    }
  } catch (const SingularError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
