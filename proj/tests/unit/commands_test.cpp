#include <gtest/gtest.h>

#include <algorithm>

#include "stlkit/commands.hpp"
#include "stlkit/errors.hpp"
#include "support/oracles.hpp"

using namespace stlkit;

namespace {

cli::Context default_context() { return {io::RunConfig{}, cli::GlobalOptions{}}; }

io::MicSpectraFile synth_file(const io::RunConfig& cfg, std::vector<LayerModel> sample,
                              const FrequencyGrid& grid, std::optional<NoiseSpec> noise = std::nullopt) {
  SynthScenario s{std::move(sample), cfg.geometry, cfg.air, 1.0, 0.0, noise};
  return {cfg.geometry, cfg.air, synth_mic_pressures(s, grid)};
}

const io::Column& column(const io::RunReport& r, const std::string& name) {
  const auto it = std::find_if(r.columns.begin(), r.columns.end(), [&](const auto& c) { return c.name == name; });
  if (it == r.columns.end()) throw std::runtime_error("no column " + name);
  return *it;
}

const BandTable& band_table(const io::RunReport& r, const std::string& quantity) {
  const auto it = std::find_if(r.bands.begin(), r.bands.end(), [&](const auto& t) { return t.quantity == quantity; });
  if (it == r.bands.end()) throw std::runtime_error("no band table " + quantity);
  return *it;
}

std::size_t band_index(const BandTable& t, double nominal) {
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t.bands[i].nominal == nominal) return i;
  }
  throw std::runtime_error("band not found");
}

}  // namespace

TEST(CmdStl, IdentitySampleIsZero) {
  const auto ctx = default_context();
  const auto grid = FrequencyGrid::linear(100, 2000, 10);
  const std::vector<io::MicSpectraFile> files{synth_file(ctx.config, {LayerModel::identity()}, grid)};
  const std::vector<std::string> labels{"identity.csv"};
  const auto r = cli::cmd_stl(files, labels, ctx);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    EXPECT_NEAR(*column(r, "stl_mean_db").values[i], 0.0, 1e-9);
    EXPECT_EQ(*column(r, "stl_spread_db").values[i], 0.0);
  }
  EXPECT_EQ(r.provenance.command, "stl");
  EXPECT_EQ(r.provenance.band_mode, "power");
  EXPECT_EQ(r.provenance.rep_mode, "db");
}

TEST(CmdStl, FiveSeededRunsNearClosedForm) {
  const auto ctx = default_context();
  const auto grid = FrequencyGrid::linear(80, 1800, 1);
  std::vector<io::MicSpectraFile> files;
  std::vector<std::string> labels;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    files.push_back(synth_file(ctx.config, {LayerModel::limp_mass(1.135)}, grid, NoiseSpec{40.0, 500 + seed}));
    labels.push_back("run" + std::to_string(seed));
  }
  const auto r = cli::cmd_stl(files, labels, ctx);
  const auto& stl = band_table(r, "STL");
  for (double nominal : {125.0, 250.0, 500.0, 1000.0, 1600.0}) {
    const auto& band = stl.bands[band_index(stl, nominal)];
    // Closed-form band value on the same bins, power-averaged.
    std::vector<double> exact;
    for (double f : grid.values()) {
      if (f >= band.lower && f < band.upper) exact.push_back(oracle::limp_mass_stl(f, 1.135, ctx.config.air.impedance()));
    }
    const double want = average_db(exact, AveragingMode::power, LevelKind::loss);
    EXPECT_NEAR(*stl.values[band_index(stl, nominal)], want, 0.2) << nominal;
  }
  const auto& spread = column(r, "stl_spread_db");
  EXPECT_GT(*spread.values[500], 0.0);
}

TEST(CmdStl, HalfWaveBinFlaggedAndCoverageBelowOne) {
  auto ctx = default_context();
  ctx.config.geometry = TubeGeometry({-0.35, -0.25, 0.251, 0.331}, 0.001, 0.0998);
  const double singular = ctx.config.air.sound_speed() / (2.0 * 0.1);
  std::vector<double> f;
  for (double x = 1500.0; x < 1900.0; x += 8.0) f.push_back(x);
  f.push_back(singular);
  std::sort(f.begin(), f.end());
  const FrequencyGrid grid(f);
  const std::vector<io::MicSpectraFile> files{synth_file(ctx.config, {LayerModel::limp_mass(1.0)}, grid)};
  const std::vector<std::string> labels{"half-wave.csv"};
  const auto r = cli::cmd_stl(files, labels, ctx);
  const auto idx = static_cast<std::size_t>(std::find(f.begin(), f.end(), singular) - f.begin());
  EXPECT_FALSE(column(r, "stl_mean_db").values[idx].has_value());
  EXPECT_NE(r.flags[idx].find("singular_upstream"), std::string::npos);
  const auto& stl = band_table(r, "STL");
  EXPECT_LT(stl.coverage[band_index(stl, 1600.0)], 1.0);
  const bool warned = std::any_of(r.warnings.begin(), r.warnings.end(),
                                  [](const std::string& w) { return w.find("upstream pair singular") != std::string::npos; });
  EXPECT_TRUE(warned);
}

TEST(CmdStl, MismatchedSetupOrGridRejected) {
  const auto ctx = default_context();
  const auto grid = FrequencyGrid::linear(100, 500, 10);
  auto other_cfg = ctx.config;
  other_cfg.geometry = TubeGeometry({-0.4, -0.3, 0.251, 0.331}, 0.001, 0.0998);
  const std::vector<std::string> labels{"a", "b"};
  std::vector<io::MicSpectraFile> wrong_setup{synth_file(other_cfg, {LayerModel::identity()}, grid)};
  EXPECT_THROW(cli::cmd_stl(wrong_setup, labels, ctx), GeometryMismatchError);
  std::vector<io::MicSpectraFile> wrong_grid{synth_file(ctx.config, {LayerModel::identity()}, grid),
                                             synth_file(ctx.config, {LayerModel::identity()},
                                                        FrequencyGrid::linear(100, 500, 20))};
  EXPECT_THROW(cli::cmd_stl(wrong_grid, labels, ctx), GridMismatchError);
}

TEST(CmdStl, AllBinsSingularIsNumericalError) {
  auto ctx = default_context();
  ctx.config.geometry = TubeGeometry({-0.35, -0.25, 0.251, 0.331}, 0.001, 0.0998);
  const FrequencyGrid grid({ctx.config.air.sound_speed() / 0.2});
  const std::vector<io::MicSpectraFile> files{synth_file(ctx.config, {LayerModel::identity()}, grid)};
  const std::vector<std::string> labels{"x"};
  EXPECT_THROW(cli::cmd_stl(files, labels, ctx), SingularError);
}

TEST(CmdStl, ReportsDifferOnlyInTimestamp) {
  const auto ctx = default_context();
  const auto grid = FrequencyGrid::linear(100, 2100, 10);
  const std::vector<io::MicSpectraFile> files{
      synth_file(ctx.config, {LayerModel::limp_mass(1.135)}, grid, NoiseSpec{40.0, 3})};
  const std::vector<std::string> labels{"x"};
  auto a = io::to_json(cli::cmd_stl(files, labels, ctx));
  auto b = io::to_json(cli::cmd_stl(files, labels, ctx));
  a["provenance"].erase("generated_at");
  b["provenance"].erase("generated_at");
  EXPECT_EQ(a.dump(), b.dump());
  // Bins above the cutoff are reported as warnings.
  const auto& warnings = a["warnings"];
  EXPECT_TRUE(std::any_of(warnings.begin(), warnings.end(), [](const auto& w) {
    return w.template get<std::string>().find("plane-wave cutoff") != std::string::npos;
  }));
}

TEST(CmdMasslaw, TableOneAtThousandHertz) {
  const auto ctx = default_context();
  const auto materials = curtain_material_catalogue();
  const std::vector<double> f{1000.0};
  const auto r = cli::cmd_masslaw(materials, f, ctx);
  ASSERT_EQ(r.columns.size(), materials.size());
  for (std::size_t i = 0; i < materials.size(); ++i) {
    EXPECT_NEAR(*r.columns[i].values[0], 20.0 * std::log10(1000.0 * materials[i].surface_density) - 48.0, 1e-12);
  }
  EXPECT_NEAR(*r.columns[8].values[0], 13.70, 0.01);
  const bool felt_flagged = std::any_of(r.warnings.begin(), r.warnings.end(), [](const std::string& w) {
    return w.find("outside its validity") != std::string::npos;
  });
  EXPECT_TRUE(felt_flagged);
}

TEST(CmdMasslaw, FeltBelowValidity) {
  const auto ctx = default_context();
  const std::vector<MaterialSpec> felt{MaterialSpec::from_mm("felt", 1.5, 0.213)};
  const std::vector<double> f{1000.0};
  const auto r = cli::cmd_masslaw(felt, f, ctx);
  EXPECT_NEAR(*r.columns[0].values[0], -1.43, 0.01);
  EXPECT_EQ(r.warnings.size(), 1u);
}

TEST(CmdMasslaw, BandsAndConstantChoice) {
  auto ctx = default_context();
  const std::vector<MaterialSpec> pvc{MaterialSpec::from_mm("pvc", 1.012, 1.216)};
  const auto paper = cli::cmd_masslaw(pvc, {}, ctx);
  ASSERT_EQ(paper.bands.size(), 1u);
  EXPECT_EQ(paper.bands[0].size(), 18u);
  ctx.options.masslaw_constant = MassLawConstant::normal;
  const auto normal = cli::cmd_masslaw(pvc, {}, ctx);
  for (std::size_t i = 0; i < 18; ++i) {
    EXPECT_NEAR(*normal.bands[0].values[i] - *paper.bands[0].values[i],
                mass_law_constant(MassLawConstant::normal) + 48.0, 1e-9);
  }
  EXPECT_EQ(normal.provenance.masslaw_constant, "normal");
}

TEST(CmdIl, ReproducesTransmissionTable) {
  const auto ctx = default_context();
  const auto bands = third_octave_bands(100, 5000);
  std::vector<double> tl;
  for (const auto& b : bands) tl.push_back(mass_law_stl(b.exact_center, 1.216));
  const auto rooms = synth_room_levels(make_band_table("L_s", bands, std::vector<double>(bands.size(), 95.0)),
                                       make_band_table("TL", bands, tl));
  const std::vector<BandTable> r0{rooms.receiver_empty};
  const std::vector<BandTable> rs{rooms.receiver_with_sample};
  const auto report = cli::cmd_il(r0, rs, ctx);
  const auto& il = band_table(report, "IL");
  for (std::size_t i = 0; i < bands.size(); ++i) EXPECT_NEAR(*il.values[i], tl[i], 1e-9);
  EXPECT_FALSE(report.warnings.empty());  // low bands are negative
}

TEST(CmdIl, RepeatedRowsAreAveraged) {
  auto ctx = default_context();
  const auto bands = third_octave_bands(1000, 1000);
  const std::vector<BandTable> r0{make_band_table("L", bands, {60.0}), make_band_table("L", bands, {70.0})};
  const std::vector<BandTable> rs{make_band_table("L", bands, {55.0})};
  EXPECT_NEAR(*band_table(cli::cmd_il(r0, rs, ctx), "IL").values[0], 10.0, 1e-12);
  ctx.options.rep_mode = AveragingMode::power;
  EXPECT_NEAR(*band_table(cli::cmd_il(r0, rs, ctx), "IL").values[0], 67.4036 - 55.0, 1e-3);
}

TEST(CmdSynth, SeedOverride) {
  auto ctx = default_context();
  std::istringstream in(
      "[layer1]\nkind = limp\nsurface_density = 1.135\n[scenario]\nsnr_db = 40\nseed = 1\n"
      "[grid]\nf_min = 100\nf_max = 200\nstep = 50\n");
  const auto scenario = io::parse_scenario(in, ctx.config);
  const auto a = cli::cmd_synth(scenario, ctx);
  ctx.options.seed = 1;
  const auto b = cli::cmd_synth(scenario, ctx);
  ctx.options.seed = 2;
  const auto c = cli::cmd_synth(scenario, ctx);
  EXPECT_EQ(a.pressures[0][0], b.pressures[0][0]);
  EXPECT_NE(a.pressures[0][0], c.pressures[0][0]);
}

TEST(CmdStack, MultilayerAboveThinLayerAcrossMidBands) {
  const auto ctx = default_context();
  const std::vector<LayerModel> stack{LayerModel::limp_mass(0.224), LayerModel::air_gap(0.005),
                                      LayerModel::limp_mass(1.216)};
  const auto r = cli::cmd_stack(stack, FrequencyGrid::linear(50, 6000, 5), ctx);
  const auto& whole = band_table(r, "stack");
  const auto& thin = band_table(r, "layer1");
  for (double nominal : {500.0, 630.0, 800.0, 1000.0, 1250.0, 1600.0}) {
    EXPECT_GT(*whole.values[band_index(whole, nominal)], *thin.values[band_index(thin, nominal)]);
  }
  EXPECT_NEAR(r.summary["total_limp_surface_density"].get<double>(), 1.44, 1e-12);
}

TEST(CmdStack, IdentityAndZeroGapPair) {
  const auto ctx = default_context();
  const auto grid = FrequencyGrid::linear(100, 1000, 50);
  const std::vector<LayerModel> identity{LayerModel::identity()};
  for (const auto& v : column(cli::cmd_stack(identity, grid, ctx), "stl_stack_db").values) EXPECT_NEAR(*v, 0.0, 1e-12);
  const std::vector<LayerModel> pair{LayerModel::limp_mass(0.5), LayerModel::limp_mass(0.7)};
  const auto r = cli::cmd_stack(pair, grid, ctx);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    EXPECT_NEAR(*column(r, "stl_stack_db").values[i], oracle::limp_mass_stl(grid[i], 1.2, ctx.config.air.impedance()),
                1e-9);
  }
}

TEST(CmdBands, ListingAndAveraging) {
  const auto ctx = default_context();
  const auto listing = cli::cmd_bands(100, 5000, std::nullopt, LevelKind::loss, ctx);
  EXPECT_EQ(listing.summary["bands"].size(), 18u);
  EXPECT_TRUE(listing.bands.empty());
  NarrowbandCurve curve{FrequencyGrid({950.0, 1050.0}), {0.0, 20.0}};
  const auto avg = cli::cmd_bands(1000, 1250, curve, LevelKind::loss, ctx);
  EXPECT_NEAR(*avg.bands[0].values[0], 2.97, 0.005);
  EXPECT_FALSE(avg.bands[0].values[1].has_value());
  EXPECT_FALSE(avg.warnings.empty());
}
