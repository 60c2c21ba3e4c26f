#include "stlkit/commands.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "stlkit/errors.hpp"
#include "stlkit/pipeline.hpp"
#include "stlkit/synth_bench.hpp"

namespace stlkit::cli {

namespace {

io::Provenance provenance(std::string command, const Context& ctx,
                          std::vector<std::string> inputs = {}) {
  return {std::move(command),
          io::config_hash(ctx.config),
          ctx.options.seed,
          to_string(ctx.options.band_mode),
          to_string(ctx.options.rep_mode),
          to_string(ctx.options.masslaw_constant),
          std::move(inputs),
          io::utc_timestamp()};
}

std::vector<std::optional<double>> usable_values(std::span<const double> values,
                                                 std::span<const BinFlags> flags) {
  std::vector<std::optional<double>> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (is_usable(flags[i]) && std::isfinite(values[i])) out[i] = values[i];
  }
  return out;
}

// "100, 110, 120 Hz" style listing, truncated after a handful of entries.
std::string list_frequencies(const std::vector<double>& f) {
  constexpr std::size_t kShown = 8;
  std::vector<std::string> parts;
  for (std::size_t i = 0; i < std::min(f.size(), kShown); ++i) parts.push_back(fmt::format("{}", f[i]));
  auto text = fmt::format("{}", fmt::join(parts, ", "));
  if (f.size() > kShown) text += fmt::format(" (+{} more)", f.size() - kShown);
  return text + " Hz";
}

std::vector<double> flagged_frequencies(const FrequencyGrid& grid, std::span<const BinFlags> flags,
                                        BinFlag flag) {
  std::vector<double> out;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (has_flag(flags[i], flag)) out.push_back(grid[i]);
  }
  return out;
}

}  // namespace

io::RunReport cmd_stl(std::span<const io::MicSpectraFile> files, std::span<const std::string> labels,
                      const Context& ctx) {
  if (files.empty()) throw DomainError("stl needs at least one spectra file");
  const auto& cfg = ctx.config;
  const auto& grid = files.front().pressures[0].grid();

  io::RunReport report;
  report.provenance = provenance("stl", ctx, {labels.begin(), labels.end()});

  RepetitionSet stl_runs{grid, {}, {labels.begin(), labels.end()}};
  RepetitionSet direct_runs{grid, {}, {labels.begin(), labels.end()}};
  std::vector<double> reflection_sum(grid.size(), 0.0);
  std::vector<std::size_t> reflection_count(grid.size(), 0);
  std::vector<BinFlags> flags_union(grid.size(), 0);
  std::size_t usable_total = 0;
  double cutoff = 0.0;

  for (std::size_t r = 0; r < files.size(); ++r) {
    const auto& file = files[r];
    const auto& label = r < labels.size() ? labels[r] : fmt::format("run {}", r + 1);
    io::require_matching_setup(file, cfg.geometry, cfg.air);
    if (!(file.pressures[0].grid() == grid)) {
      throw GridMismatchError(fmt::format("{}: frequency grid differs from the first file", label));
    }

    const auto analysis = analyse_spectra(file.pressures, cfg.geometry, cfg.air, cfg.analysis);
    cutoff = analysis.cutoff_hz;
    usable_total += analysis.usable_bins();

    stl_runs.runs.push_back(usable_values(analysis.indicators.stl, analysis.flags));
    direct_runs.runs.push_back(usable_values(analysis.direct.stl, analysis.direct.flags));
    for (std::size_t i = 0; i < grid.size(); ++i) {
      flags_union[i] |= analysis.flags[i];
      if (is_usable(analysis.flags[i])) {
        reflection_sum[i] += std::norm(analysis.indicators.reflection[i]);
        ++reflection_count[i];
      }
    }

    for (auto pair : {MicPair::upstream, MicPair::downstream}) {
      std::vector<double> f;
      for (const auto& s : analysis.amplitudes.singular) {
        if (s.pair == pair) f.push_back(s.frequency);
      }
      if (!f.empty()) {
        report.warnings.push_back(fmt::format("{}: {} pair singular (half-wavelength spacing) at {}",
                                              label, to_string(pair), list_frequencies(f)));
      }
    }
    if (auto f = flagged_frequencies(grid, analysis.flags, BinFlag::closure_singular); !f.empty()) {
      report.warnings.push_back(fmt::format("{}: matrix closure singular at {}", label, list_frequencies(f)));
    }
    if (auto f = flagged_frequencies(grid, analysis.flags, BinFlag::invalid_denominator); !f.empty()) {
      report.warnings.push_back(fmt::format("{}: vanishing indicator denominator at {}", label, list_frequencies(f)));
    }
    if (auto f = flagged_frequencies(grid, analysis.flags, BinFlag::anechoic_violation); !f.empty()) {
      report.warnings.push_back(fmt::format("{}: |D/C| above {} (termination not anechoic) at {}", label,
                                            cfg.analysis.anechoic_threshold, list_frequencies(f)));
    }
  }

  if (usable_total == 0) throw SingularError("no usable frequency bin in any input file");

  if (auto f = flagged_frequencies(grid, flags_union, BinFlag::above_cutoff); !f.empty()) {
    report.warnings.push_back(fmt::format("{} bins above the plane-wave cutoff {:.1f} Hz: {}", f.size(),
                                          cutoff, list_frequencies(f)));
  }

  const auto stl = average_repetitions(stl_runs, ctx.options.rep_mode, LevelKind::loss);
  const auto direct = average_repetitions(direct_runs, ctx.options.rep_mode, LevelKind::loss);

  std::vector<std::optional<double>> reflection(grid.size());
  std::vector<std::optional<double>> valid_runs(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (reflection_count[i]) reflection[i] = reflection_sum[i] / static_cast<double>(reflection_count[i]);
    valid_runs[i] = static_cast<double>(stl.valid_runs[i]);
  }

  report.grid = grid;
  report.columns = {{"stl_mean_db", stl.mean.db, true},
                    {"stl_spread_db", stl.spread, true},
                    {"stl_direct_mean_db", direct.mean.db, true},
                    {"reflection_power", reflection, false},
                    {"valid_runs", valid_runs, false}};
  for (auto f : flags_union) report.flags.push_back(describe_flags(f));

  const auto bands = third_octave_bands(cfg.band_f_min, cfg.band_f_max);
  report.bands.push_back(band_average(stl.mean, bands, ctx.options.band_mode, LevelKind::loss, "STL"));
  report.bands.push_back(
      band_average(direct.mean, bands, ctx.options.band_mode, LevelKind::loss, "STL_direct"));
  for (std::size_t b = 0; b < bands.size(); ++b) {
    const double cov = report.bands.front().coverage[b];
    if (cov > 0.0 && cov < 1.0) {
      report.warnings.push_back(fmt::format("band {} Hz: coverage {:.2f}", bands[b].nominal, cov));
    }
  }

  report.summary = {{"files", files.size()},
                    {"bins", grid.size()},
                    {"usable_bins", usable_total},
                    {"plane_wave_cutoff_hz", cutoff}};
  return report;
}

io::RunReport cmd_stl(std::span<const std::filesystem::path> paths, const Context& ctx) {
  std::vector<io::MicSpectraFile> files;
  std::vector<std::string> labels;
  for (const auto& p : paths) {
    files.push_back(io::read_mic_spectra(p));
    labels.push_back(p.string());
  }
  return cmd_stl(files, labels, ctx);
}

io::RunReport cmd_masslaw(std::span<const MaterialSpec> materials, std::span<const double> frequencies,
                          const Context& ctx) {
  if (materials.empty()) throw DomainError("no materials given");
  const auto constant = ctx.options.masslaw_constant;
  const auto& air = ctx.config.air;

  io::RunReport report;
  report.provenance = provenance("masslaw", ctx);
  report.summary = {{"constant", to_string(constant)},
                    {"constant_db", mass_law_constant(constant, air)}};

  const auto note_negative = [&](const MaterialSpec& m, std::size_t count) {
    if (count) {
      report.warnings.push_back(fmt::format("{}: mass law below 0 dB at {} point(s); outside its validity",
                                            m.name, count));
    }
  };

  if (!frequencies.empty()) {
    report.grid = FrequencyGrid({frequencies.begin(), frequencies.end()});
    for (const auto& m : materials) {
      m.validate();
      io::Column col{m.name, {}, true};
      std::size_t negative = 0;
      for (double f : frequencies) {
        const double v = mass_law_stl(f, m.surface_density, constant, air);
        negative += v < 0.0;
        col.values.emplace_back(v);
      }
      note_negative(m, negative);
      report.columns.push_back(std::move(col));
    }
    return report;
  }

  const auto bands = third_octave_bands(ctx.config.band_f_min, ctx.config.band_f_max);
  for (const auto& m : materials) {
    m.validate();
    std::vector<double> values;
    std::size_t negative = 0;
    for (const auto& b : bands) {
      values.push_back(mass_law_stl(b.exact_center, m.surface_density, constant, air));
      negative += values.back() < 0.0;
    }
    note_negative(m, negative);
    report.bands.push_back(make_band_table(m.name, bands, std::move(values)));
  }
  return report;
}

BandTable combine_runs(std::span<const BandTable> runs, AveragingMode mode, LevelKind kind,
                       std::string quantity) {
  if (runs.empty()) throw DomainError("no band rows to combine");
  for (const auto& r : runs) require_same_bands(runs.front(), r);
  const auto& bands = runs.front().bands;
  BandTable out{std::move(quantity), bands, {}, {}, {}};
  std::vector<double> present;
  for (std::size_t b = 0; b < bands.size(); ++b) {
    present.clear();
    double coverage = 0.0;
    for (const auto& r : runs) {
      if (r.values[b]) present.push_back(*r.values[b]);
      coverage += r.coverage[b];
    }
    out.coverage.push_back(coverage / static_cast<double>(runs.size()));
    if (present.empty()) {
      out.values.emplace_back();
    } else {
      out.values.emplace_back(average_db(present, mode, kind));
    }
  }
  return out;
}

io::RunReport cmd_il(std::span<const BandTable> receiver_empty,
                     std::span<const BandTable> receiver_with_sample, const Context& ctx) {
  io::RunReport report;
  report.provenance = provenance("il", ctx);
  const auto mode = ctx.options.rep_mode;
  auto r0 = combine_runs(receiver_empty, mode, LevelKind::level, "L_r0");
  auto rs = combine_runs(receiver_with_sample, mode, LevelKind::level, "L_rs");
  auto il = insertion_loss(r0, rs);
  for (const auto& note : il.notes) report.warnings.push_back(note + " (physically suspicious)");
  report.summary = {{"receiver_empty_runs", receiver_empty.size()},
                    {"receiver_with_sample_runs", receiver_with_sample.size()}};
  report.bands = {std::move(il), std::move(r0), std::move(rs)};
  return report;
}

io::RunReport cmd_il(const std::filesystem::path& receiver_empty,
                     const std::filesystem::path& receiver_with_sample, const Context& ctx) {
  const auto r0 = io::read_band_tables(receiver_empty);
  const auto rs = io::read_band_tables(receiver_with_sample);
  auto report = cmd_il(r0, rs, ctx);
  report.provenance.inputs = {receiver_empty.string(), receiver_with_sample.string()};
  return report;
}

io::MicSpectraFile cmd_synth(const io::ScenarioFile& file, const Context& ctx) {
  auto scenario = file.scenario;
  if (scenario.noise && ctx.options.seed) scenario.noise->seed = *ctx.options.seed;
  return {scenario.geometry, scenario.air, synth_mic_pressures(scenario, file.grid)};
}

io::RunReport cmd_stack(std::span<const LayerModel> layers, const FrequencyGrid& grid,
                        const Context& ctx) {
  if (layers.empty()) throw DomainError("stack has no layers");
  const auto& air = ctx.config.air;
  io::RunReport report;
  report.provenance = provenance("stack", ctx);
  report.grid = grid;

  const auto bands = third_octave_bands(ctx.config.band_f_min, ctx.config.band_f_max);
  const auto add = [&](const std::string& name, std::span<const LayerModel> part) {
    const auto values = stack_stl(part, grid, air);
    NarrowbandCurve curve{grid, {values.begin(), values.end()}};
    for (auto& v : curve.db) {
      if (v && !std::isfinite(*v)) v.reset();
    }
    report.columns.push_back({"stl_" + name + "_db", curve.db, true});
    report.bands.push_back(band_average(curve, bands, ctx.options.band_mode, LevelKind::loss, name));
  };

  add("stack", layers);
  nlohmann::ordered_json described = nlohmann::ordered_json::array();
  double mass = 0.0;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    add(fmt::format("layer{}", i + 1), layers.subspan(i, 1));
    described.push_back(layers[i].describe());
    if (const auto* limp = std::get_if<LimpMassLayer>(&layers[i].kind())) mass += limp->surface_density;
  }
  report.summary = {{"layers", described}, {"total_limp_surface_density", mass}};
  return report;
}

io::RunReport cmd_bands(double f_min, double f_max, const std::optional<NarrowbandCurve>& curve,
                        LevelKind kind, const Context& ctx) {
  io::RunReport report;
  report.provenance = provenance("bands", ctx);
  const auto bands = third_octave_bands(f_min, f_max);
  nlohmann::ordered_json list = nlohmann::ordered_json::array();
  for (const auto& b : bands) {
    list.push_back({{"nominal_hz", b.nominal},
                    {"exact_center_hz", b.exact_center},
                    {"lower_hz", b.lower},
                    {"upper_hz", b.upper}});
  }
  report.summary = {{"bands", list}};
  if (curve) {
    report.bands.push_back(band_average(*curve, bands, ctx.options.band_mode, kind, "value"));
    for (std::size_t b = 0; b < bands.size(); ++b) {
      if (!report.bands.front().values[b]) {
        report.warnings.push_back(fmt::format("band {} Hz has no valid bins", bands[b].nominal));
      }
    }
  }
  return report;
}

}  // namespace stlkit::cli
