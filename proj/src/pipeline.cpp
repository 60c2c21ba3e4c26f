#include "stlkit/pipeline.hpp"

#include <algorithm>

namespace stlkit {

std::size_t SpectraAnalysis::usable_bins() const {
  return static_cast<std::size_t>(std::count_if(flags.begin(), flags.end(), is_usable));
}

SpectraAnalysis analyse_spectra(const std::array<ComplexSpectrum, 4>& pressures,
                                const TubeGeometry& geometry, const AirProperties& air,
                                const AnalysisOptions& options) {
  auto amps = decompose_four_mic(pressures, geometry, air, options.singular_tolerance);
  auto states = boundary_states(amps, geometry.sample_thickness(), air);
  auto matrix = reconstruct_one_load(states, options.closure_tolerance);
  auto indicators = compute_indicators(matrix, geometry.sample_thickness(), air);
  auto direct = stl_direct_anechoic(amps, options.anechoic_threshold);
  const double cutoff = plane_wave_cutoff(geometry, air);

  std::vector<BinFlags> flags(indicators.flags);
  for (std::size_t i = 0; i < flags.size(); ++i) {
    if (has_flag(direct.flags[i], BinFlag::anechoic_violation)) {
      flags[i] = flags[i] | BinFlag::anechoic_violation;
    }
    if (amps.grid[i] > cutoff) flags[i] = flags[i] | BinFlag::above_cutoff;
  }
  return {std::move(amps), std::move(states),       std::move(matrix), std::move(indicators),
          std::move(direct), cutoff, std::move(flags)};
}

}  // namespace stlkit
