#pragma once

#include <array>

#include "stlkit/core.hpp"
#include "stlkit/transfer_matrix.hpp"
#include "stlkit/wave_decomposition.hpp"

namespace stlkit {

struct AnalysisOptions {
  double singular_tolerance = kSingularTolerance;
  double closure_tolerance = kClosureTolerance;
  double anechoic_threshold = kAnechoicThreshold;
};

// Everything derived from one set of four microphone spectra.
struct SpectraAnalysis {
  PlaneWaveAmplitudes amplitudes;
  BoundaryStates states;
  TransferMatrix matrix;
  AcousticIndicators indicators;  // matrix route
  DirectStl direct;               // A/C route, anechoic assumption
  double cutoff_hz;
  std::vector<BinFlags> flags;  // union of all stages, plus above_cutoff

  std::size_t usable_bins() const;
};

// decompose -> boundary states -> one-load matrix -> indicators.
SpectraAnalysis analyse_spectra(const std::array<ComplexSpectrum, 4>& pressures,
                                const TubeGeometry& geometry, const AirProperties& air,
                                const AnalysisOptions& options = {});

}  // namespace stlkit
