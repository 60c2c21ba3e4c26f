#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stlkit/analytic_models.hpp"
#include "stlkit/band_analysis.hpp"
#include "stlkit/io/config.hpp"
#include "stlkit/io/csv.hpp"
#include "stlkit/io/report.hpp"

namespace stlkit::cli {

struct GlobalOptions {
  AveragingMode band_mode = AveragingMode::power;
  AveragingMode rep_mode = AveragingMode::db;
  MassLawConstant masslaw_constant = MassLawConstant::paper;
  std::optional<std::uint64_t> seed;
};

struct Context {
  io::RunConfig config;
  GlobalOptions options;
};

// Per-file decomposition and matrix analysis, then repetition statistics and
// band tables. Throws GeometryMismatchError when a file was taken with a
// different setup, SingularError when no bin of any file is usable.
io::RunReport cmd_stl(std::span<const io::MicSpectraFile> files,
                      std::span<const std::string> labels, const Context& ctx);
io::RunReport cmd_stl(std::span<const std::filesystem::path> paths, const Context& ctx);

// Mass-law prediction per material. With no frequencies, evaluates at the
// exact centres of the configured bands and returns one band table per material.
io::RunReport cmd_masslaw(std::span<const MaterialSpec> materials,
                          std::span<const double> frequencies, const Context& ctx);

// Each input row is one repetition; rows are averaged (rep mode, as levels)
// before IL = L_r0 - L_rs.
io::RunReport cmd_il(std::span<const BandTable> receiver_empty,
                     std::span<const BandTable> receiver_with_sample, const Context& ctx);
io::RunReport cmd_il(const std::filesystem::path& receiver_empty,
                     const std::filesystem::path& receiver_with_sample, const Context& ctx);

// --seed overrides the scenario seed when noise is enabled.
io::MicSpectraFile cmd_synth(const io::ScenarioFile& scenario, const Context& ctx);

io::RunReport cmd_stack(std::span<const LayerModel> layers, const FrequencyGrid& grid,
                        const Context& ctx);

// Lists the bands in [f_min, f_max]; with a curve, also band-averages it.
io::RunReport cmd_bands(double f_min, double f_max, const std::optional<NarrowbandCurve>& curve,
                        LevelKind kind, const Context& ctx);

// Averages the rows of a repeated band measurement band by band.
BandTable combine_runs(std::span<const BandTable> runs, AveragingMode mode, LevelKind kind,
                       std::string quantity);

}  // namespace stlkit::cli
