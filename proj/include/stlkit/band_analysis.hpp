#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stlkit/core.hpp"

namespace stlkit {

// One-third-octave band on the base-2 series: exact centre 1000 * 2^(index/3),
// edges at centre * 2^(-+1/6). nominal is the preferred-number label.
struct ThirdOctaveBand {
  int index;
  double nominal;
  double exact_center;
  double lower;
  double upper;
};

ThirdOctaveBand third_octave_band(int index);

// Band labelled with the given nominal centre, if any.
std::optional<ThirdOctaveBand> band_for_nominal(double nominal);

// Every band with nominal centre in [f_min, f_max] (25 Hz .. 20 kHz available).
std::vector<ThirdOctaveBand> third_octave_bands(double f_min, double f_max);

enum class AveragingMode { power, db };

// How power mode linearises a dB value: a loss becomes a transmission
// factor 10^(-L/10), a level becomes an energy 10^(L/10).
enum class LevelKind { loss, level };

const char* to_string(AveragingMode m) noexcept;

// Averages dB values in the requested mode. values must be non-empty.
double average_db(std::span<const double> values, AveragingMode mode, LevelKind kind);

// Per-frequency dB curve; nullopt marks an invalid bin.
struct NarrowbandCurve {
  FrequencyGrid grid;
  std::vector<std::optional<double>> db;
};

struct BandTable {
  std::string quantity;
  std::vector<ThirdOctaveBand> bands;
  std::vector<std::optional<double>> values;  // nullopt: band absent
  std::vector<double> coverage;               // valid bins / bins in band
  std::vector<std::string> notes;

  std::size_t size() const noexcept { return bands.size(); }
};

// Table of fixed values over the given bands, coverage 1.
BandTable make_band_table(std::string quantity, std::vector<ThirdOctaveBand> bands,
                          std::vector<double> values);

// Bins in [lower, upper) contribute to a band. Bands without a valid bin are
// absent, never zero.
BandTable band_average(const NarrowbandCurve& curve, std::span<const ThirdOctaveBand> bands,
                       AveragingMode mode, LevelKind kind = LevelKind::loss,
                       std::string quantity = "value");

struct RepetitionSet {
  FrequencyGrid grid;
  std::vector<std::vector<std::optional<double>>> runs;
  std::vector<std::string> labels;
};

struct RepetitionSummary {
  NarrowbandCurve mean;
  std::vector<std::optional<double>> spread;  // sample standard deviation, dB
  std::vector<std::size_t> valid_runs;
};

// Per bin over the runs valid there. The spread is always taken on the dB values.
RepetitionSummary average_repetitions(const RepetitionSet& reps,
                                      AveragingMode mode = AveragingMode::db,
                                      LevelKind kind = LevelKind::loss);

// 10 log10(mean 10^(L/10)).
double energetic_spl_average(std::span<const double> levels);

// Throws GridMismatchError when the band sets differ.
void require_same_bands(const BandTable& a, const BandTable& b);

// IL = L_r0 - L_rs per band. Negative bands are kept and noted.
BandTable insertion_loss(const BandTable& receiver_empty, const BandTable& receiver_with_sample);

}  // namespace stlkit
