#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "stlkit/band_analysis.hpp"
#include "stlkit/errors.hpp"

using namespace stlkit;

namespace {

NarrowbandCurve constant_curve(const FrequencyGrid& grid, double value) {
  return {grid, std::vector<std::optional<double>>(grid.size(), value)};
}

BandTable random_table(std::mt19937_64& rng, const std::vector<ThirdOctaveBand>& bands) {
  std::uniform_real_distribution<double> level(30.0, 90.0);
  std::vector<double> v;
  for (std::size_t i = 0; i < bands.size(); ++i) v.push_back(level(rng));
  return make_band_table("L", bands, v);
}

}  // namespace

TEST(ThirdOctaveBands, HundredToFiveKiloHasEighteenCentres) {
  const auto bands = third_octave_bands(100.0, 5000.0);
  const std::vector<double> expected{100,  125,  160,  200,  250,  315,  400,  500,  630,
                                     800,  1000, 1250, 1600, 2000, 2500, 3150, 4000, 5000};
  ASSERT_EQ(bands.size(), 18u);
  for (std::size_t i = 0; i < bands.size(); ++i) EXPECT_EQ(bands[i].nominal, expected[i]);
}

TEST(ThirdOctaveBands, PointRange) {
  const auto bands = third_octave_bands(1000.0, 1000.0);
  ASSERT_EQ(bands.size(), 1u);
  EXPECT_EQ(bands[0].nominal, 1000.0);
  EXPECT_DOUBLE_EQ(bands[0].exact_center, 1000.0);
  EXPECT_NEAR(bands[0].lower, 890.90, 0.01);
  EXPECT_NEAR(bands[0].upper, 1122.46, 0.01);
}

TEST(ThirdOctaveBands, InvalidRanges) {
  EXPECT_THROW(third_octave_bands(1010.0, 1100.0), DomainError);
  EXPECT_THROW(third_octave_bands(5000.0, 100.0), DomainError);
  EXPECT_THROW(third_octave_bands(0.0, 100.0), DomainError);
  EXPECT_THROW(third_octave_band(100), DomainError);
  EXPECT_FALSE(band_for_nominal(1001.0).has_value());
  EXPECT_EQ(band_for_nominal(25.0)->index, -16);
}

TEST(ThirdOctaveBands, EdgesTileAndBracketCentre) {
  const auto bands = third_octave_bands(25.0, 20000.0);
  ASSERT_EQ(bands.size(), 30u);
  for (std::size_t i = 0; i < bands.size(); ++i) {
    const auto& b = bands[i];
    EXPECT_NEAR(b.lower * b.upper / (b.exact_center * b.exact_center), 1.0, 1e-12);
    // Nominal labels round the exact base-2 centre by at most a few percent.
    EXPECT_NEAR(b.nominal / b.exact_center, 1.0, 0.03);
    if (i + 1 < bands.size()) EXPECT_NEAR(b.upper / bands[i + 1].lower, 1.0, 1e-12);
  }
}

TEST(BandAverage, ConstantCurveInBothModes) {
  const auto grid = FrequencyGrid::linear(80, 6000, 7);
  const auto bands = third_octave_bands(100, 5000);
  for (auto mode : {AveragingMode::power, AveragingMode::db}) {
    const auto t = band_average(constant_curve(grid, 10.0), bands, mode);
    for (std::size_t i = 0; i < t.size(); ++i) {
      ASSERT_TRUE(t.values[i]);
      EXPECT_NEAR(*t.values[i], 10.0, 1e-12);
      EXPECT_DOUBLE_EQ(t.coverage[i], 1.0);
    }
  }
}

TEST(BandAverage, TwoBinExample) {
  const FrequencyGrid grid({950.0, 1050.0});
  const NarrowbandCurve curve{grid, {0.0, 20.0}};
  const auto bands = third_octave_bands(1000, 1000);
  EXPECT_NEAR(*band_average(curve, bands, AveragingMode::db).values[0], 10.0, 1e-12);
  const double power = *band_average(curve, bands, AveragingMode::power).values[0];
  EXPECT_NEAR(power, 10.0 * std::log10(2.0 / 1.01), 1e-12);
  EXPECT_NEAR(power, 2.97, 0.005);
  // Levels average the other way round: energy is dominated by the loud bin.
  const double level = *band_average(curve, bands, AveragingMode::power, LevelKind::level).values[0];
  EXPECT_NEAR(level, 10.0 * std::log10((1.0 + 100.0) / 2.0), 1e-12);
}

TEST(BandAverage, CoverageAndAbsentBands) {
  const FrequencyGrid grid({900.0, 1000.0, 1100.0, 1300.0});
  const NarrowbandCurve curve{grid, {5.0, std::nullopt, 7.0, std::nullopt}};
  const auto bands = third_octave_bands(1000, 1600);
  const auto t = band_average(curve, bands, AveragingMode::db);
  ASSERT_EQ(t.size(), 3u);
  EXPECT_NEAR(*t.values[0], 6.0, 1e-12);
  EXPECT_NEAR(t.coverage[0], 2.0 / 3.0, 1e-12);
  EXPECT_FALSE(t.values[1].has_value());
  EXPECT_EQ(t.coverage[1], 0.0);
  EXPECT_FALSE(t.values[2].has_value());
}

TEST(BandAverage, PowerModeInvariantUnderRefinementOfConstant) {
  const auto bands = third_octave_bands(100, 5000);
  const auto coarse = band_average(constant_curve(FrequencyGrid::linear(50, 6000, 25), 23.5), bands,
                                   AveragingMode::power);
  const auto fine = band_average(constant_curve(FrequencyGrid::linear(50, 6000, 1), 23.5), bands,
                                 AveragingMode::power);
  for (std::size_t i = 0; i < bands.size(); ++i) EXPECT_NEAR(*coarse.values[i], *fine.values[i], 1e-12);
}

TEST(BandAverage, PowerModeInvariantUnderBinReordering) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> v(0.0, 40.0);
  std::vector<double> values(50);
  for (auto& x : values) x = v(rng);
  const double base = average_db(values, AveragingMode::power, LevelKind::loss);
  for (int i = 0; i < 20; ++i) {
    std::shuffle(values.begin(), values.end(), rng);
    EXPECT_NEAR(average_db(values, AveragingMode::power, LevelKind::loss), base, 1e-12);
  }
}

TEST(Repetitions, SingleRunIsItself) {
  const auto grid = FrequencyGrid::linear(100, 500, 100);
  RepetitionSet reps{grid, {{1.0, 2.0, 3.0, 4.0, 5.0}}, {"0 deg"}};
  const auto s = average_repetitions(reps);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    EXPECT_EQ(*s.mean.db[i], *reps.runs[0][i]);
    EXPECT_EQ(*s.spread[i], 0.0);
  }
}

TEST(Repetitions, MeanAndSampleSpread) {
  RepetitionSet reps{FrequencyGrid({500.0}), {{10.0}, {12.0}, {14.0}}, {}};
  const auto s = average_repetitions(reps);
  EXPECT_NEAR(*s.mean.db[0], 12.0, 1e-12);
  EXPECT_NEAR(*s.spread[0], 2.0, 1e-12);
  EXPECT_EQ(s.valid_runs[0], 3u);
}

TEST(Repetitions, SkipsInvalidRunsAndRejectsMismatch) {
  const FrequencyGrid grid({100.0, 200.0});
  RepetitionSet reps{grid, {{10.0, std::nullopt}, {20.0, std::nullopt}}, {}};
  const auto s = average_repetitions(reps);
  EXPECT_FALSE(s.mean.db[1].has_value());
  EXPECT_EQ(s.valid_runs[1], 0u);
  reps.runs.push_back({1.0});
  EXPECT_THROW(average_repetitions(reps), GridMismatchError);
  EXPECT_THROW(average_repetitions(RepetitionSet{grid, {}, {}}), DomainError);
}

TEST(Repetitions, PermutationInvariantMean) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> v(0.0, 40.0);
  const auto grid = FrequencyGrid::linear(100, 1000, 100);
  RepetitionSet reps{grid, {}, {}};
  for (int r = 0; r < 6; ++r) {
    std::vector<std::optional<double>> run;
    for (std::size_t i = 0; i < grid.size(); ++i) run.emplace_back(v(rng));
    reps.runs.push_back(run);
  }
  for (auto mode : {AveragingMode::db, AveragingMode::power}) {
    const auto base = average_repetitions(reps, mode);
    auto shuffled = reps;
    for (int trial = 0; trial < 10; ++trial) {
      std::shuffle(shuffled.runs.begin(), shuffled.runs.end(), rng);
      const auto s = average_repetitions(shuffled, mode);
      for (std::size_t i = 0; i < grid.size(); ++i) {
        EXPECT_NEAR(*s.mean.db[i], *base.mean.db[i], 1e-12);
        EXPECT_NEAR(*s.spread[i], *base.spread[i], 1e-12);
      }
    }
  }
}

TEST(EnergeticAverage, Examples) {
  const std::vector<double> same{60.0, 60.0};
  const std::vector<double> pair{60.0, 70.0};
  const std::vector<double> one{42.5};
  EXPECT_NEAR(energetic_spl_average(same), 60.0, 1e-12);
  EXPECT_NEAR(energetic_spl_average(pair), 10.0 * std::log10((1e6 + 1e7) / 2.0), 1e-12);
  EXPECT_NEAR(energetic_spl_average(pair), 67.40, 0.005);
  EXPECT_NEAR(energetic_spl_average(one), 42.5, 1e-12);
  EXPECT_THROW(energetic_spl_average(std::vector<double>{}), DomainError);
}

TEST(InsertionLoss, Examples) {
  const auto bands = third_octave_bands(1000, 1000);
  const auto il = insertion_loss(make_band_table("L_r0", bands, {70.0}), make_band_table("L_rs", bands, {59.0}));
  EXPECT_EQ(il.quantity, "IL");
  EXPECT_NEAR(*il.values[0], 11.0, 1e-12);
  const auto same = make_band_table("L", third_octave_bands(100, 5000), std::vector<double>(18, 65.0));
  for (const auto& v : insertion_loss(same, same).values) EXPECT_EQ(*v, 0.0);
}

TEST(InsertionLoss, NegativeBandsNotedAndMismatchRejected) {
  const auto bands = third_octave_bands(500, 630);
  const auto il = insertion_loss(make_band_table("a", bands, {60.0, 60.0}), make_band_table("b", bands, {61.0, 50.0}));
  EXPECT_EQ(il.notes.size(), 1u);
  EXPECT_THROW(insertion_loss(make_band_table("a", bands, {60.0, 60.0}),
                              make_band_table("b", third_octave_bands(500, 800), {1.0, 2.0, 3.0})),
               GridMismatchError);
}

TEST(InsertionLoss, Antisymmetric) {
  std::mt19937_64 rng(29);
  const auto bands = third_octave_bands(100, 5000);
  for (int i = 0; i < 200; ++i) {
    const auto a = random_table(rng, bands);
    const auto b = random_table(rng, bands);
    const auto ab = insertion_loss(a, b);
    const auto ba = insertion_loss(b, a);
    for (std::size_t j = 0; j < bands.size(); ++j) EXPECT_EQ(*ab.values[j], -*ba.values[j]);
  }
}
