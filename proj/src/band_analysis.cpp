#include "stlkit/band_analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "stlkit/errors.hpp"

namespace stlkit {

namespace {

constexpr int kFirstIndex = -16;  // 25 Hz
constexpr std::array<double, 30> kNominal = {
    25,   31.5, 40,   50,   63,   80,   100,  125,   160,   200,   250,   315,   400,   500,   630,
    800,  1000, 1250, 1600, 2000, 2500, 3150, 4000, 5000, 6300, 8000, 10000, 12500, 16000, 20000};

}  // namespace

ThirdOctaveBand third_octave_band(int index) {
  const int slot = index - kFirstIndex;
  if (slot < 0 || slot >= static_cast<int>(kNominal.size())) {
    throw DomainError(fmt::format("band index {} outside 25 Hz .. 20 kHz", index));
  }
  const double center = 1000.0 * std::exp2(index / 3.0);
  return {index, kNominal[static_cast<std::size_t>(slot)], center, center * std::exp2(-1.0 / 6.0),
          center * std::exp2(1.0 / 6.0)};
}

std::optional<ThirdOctaveBand> band_for_nominal(double nominal) {
  const auto it = std::find(kNominal.begin(), kNominal.end(), nominal);
  if (it == kNominal.end()) return std::nullopt;
  return third_octave_band(kFirstIndex + static_cast<int>(it - kNominal.begin()));
}

std::vector<ThirdOctaveBand> third_octave_bands(double f_min, double f_max) {
  if (!(f_min > 0.0) || f_max < f_min) {
    throw DomainError(fmt::format("invalid band range [{}, {}]", f_min, f_max));
  }
  std::vector<ThirdOctaveBand> out;
  for (std::size_t i = 0; i < kNominal.size(); ++i) {
    if (kNominal[i] >= f_min && kNominal[i] <= f_max) {
      out.push_back(third_octave_band(kFirstIndex + static_cast<int>(i)));
    }
  }
  if (out.empty()) {
    throw DomainError(fmt::format("no nominal band centre in [{}, {}]", f_min, f_max));
  }
  return out;
}

const char* to_string(AveragingMode m) noexcept {
  return m == AveragingMode::power ? "power" : "db";
}

double average_db(std::span<const double> values, AveragingMode mode, LevelKind kind) {
  if (values.empty()) throw DomainError("cannot average an empty set of levels");
  const auto n = static_cast<double>(values.size());
  if (mode == AveragingMode::db) {
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / n;
  }
  const double sign = kind == LevelKind::loss ? -1.0 : 1.0;
  double sum = 0.0;
  for (double v : values) sum += std::pow(10.0, sign * v / 10.0);
  return sign * 10.0 * std::log10(sum / n);
}

BandTable make_band_table(std::string quantity, std::vector<ThirdOctaveBand> bands,
                          std::vector<double> values) {
  if (values.size() != bands.size()) throw GridMismatchError("one value per band required");
  BandTable t{std::move(quantity), std::move(bands), {}, std::vector<double>(values.size(), 1.0), {}};
  t.values.assign(values.begin(), values.end());
  return t;
}

BandTable band_average(const NarrowbandCurve& curve, std::span<const ThirdOctaveBand> bands,
                       AveragingMode mode, LevelKind kind, std::string quantity) {
  if (curve.db.size() != curve.grid.size()) throw GridMismatchError("curve/grid size mismatch");
  BandTable out{std::move(quantity), {bands.begin(), bands.end()}, {}, {}, {}};
  const auto f = curve.grid.values();
  std::vector<double> in_band;
  for (const auto& band : bands) {
    in_band.clear();
    std::size_t total = 0;
    const auto first = std::lower_bound(f.begin(), f.end(), band.lower);
    for (auto it = first; it != f.end() && *it < band.upper; ++it) {
      ++total;
      const auto& v = curve.db[static_cast<std::size_t>(it - f.begin())];
      if (v) in_band.push_back(*v);
    }
    out.coverage.push_back(total ? static_cast<double>(in_band.size()) / total : 0.0);
    if (in_band.empty()) {
      out.values.emplace_back();
    } else {
      out.values.emplace_back(average_db(in_band, mode, kind));
    }
  }
  return out;
}

RepetitionSummary average_repetitions(const RepetitionSet& reps, AveragingMode mode,
                                      LevelKind kind) {
  if (reps.runs.empty()) throw DomainError("repetition set is empty");
  const auto n = reps.grid.size();
  for (std::size_t r = 0; r < reps.runs.size(); ++r) {
    if (reps.runs[r].size() != n) {
      throw GridMismatchError(fmt::format("run {} has {} bins, grid has {}", r + 1,
                                          reps.runs[r].size(), n));
    }
  }
  RepetitionSummary out{{reps.grid, std::vector<std::optional<double>>(n)},
                        std::vector<std::optional<double>>(n),
                        std::vector<std::size_t>(n, 0)};
  std::vector<double> values;
  for (std::size_t i = 0; i < n; ++i) {
    values.clear();
    for (const auto& run : reps.runs) {
      if (run[i] && std::isfinite(*run[i])) values.push_back(*run[i]);
    }
    out.valid_runs[i] = values.size();
    if (values.empty()) continue;
    out.mean.db[i] = average_db(values, mode, kind);
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    out.spread[i] = values.size() > 1 ? std::sqrt(ss / static_cast<double>(values.size() - 1)) : 0.0;
  }
  return out;
}

double energetic_spl_average(std::span<const double> levels) {
  return average_db(levels, AveragingMode::power, LevelKind::level);
}

void require_same_bands(const BandTable& a, const BandTable& b) {
  std::vector<std::string> diff;
  const auto n = std::max(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto name = [&](const BandTable& t) {
      return i < t.size() ? fmt::format("{}", t.bands[i].nominal) : std::string("-");
    };
    if (i >= a.size() || i >= b.size() || a.bands[i].index != b.bands[i].index) {
      diff.push_back(fmt::format("#{}: {} vs {}", i + 1, name(a), name(b)));
    }
  }
  if (!diff.empty()) {
    throw GridMismatchError(fmt::format("band sets differ ({})", fmt::join(diff, ", ")));
  }
}

BandTable insertion_loss(const BandTable& receiver_empty, const BandTable& receiver_with_sample) {
  require_same_bands(receiver_empty, receiver_with_sample);
  BandTable out{"IL", receiver_empty.bands, {}, {}, {}};
  for (std::size_t i = 0; i < out.size(); ++i) {
    out.coverage.push_back(std::min(receiver_empty.coverage[i], receiver_with_sample.coverage[i]));
    const auto& a = receiver_empty.values[i];
    const auto& b = receiver_with_sample.values[i];
    if (!a || !b) {
      out.values.emplace_back();
      continue;
    }
    const double il = *a - *b;
    out.values.emplace_back(il);
    if (il < 0.0) {
      out.notes.push_back(fmt::format("negative insertion loss {:.2f} dB at {} Hz", il,
                                      out.bands[i].nominal));
    }
  }
  return out;
}

}  // namespace stlkit
