#include "stlkit/wave_decomposition.hpp"

#include <cmath>

#include <fmt/format.h>

#include "stlkit/errors.hpp"

namespace stlkit {

namespace {

constexpr Complex kJ{0.0, 1.0};

Complex expj(double phase) { return std::polar(1.0, phase); }

}  // namespace

const char* to_string(MicPair pair) noexcept {
  return pair == MicPair::upstream ? "upstream" : "downstream";
}

std::pair<Complex, Complex> decompose_pair_at(Complex pa, Complex pb, double xa, double xb,
                                              double k, double tolerance) {
  const double s = std::sin(k * (xa - xb));
  if (std::abs(s) < tolerance) {
    throw SingularError(fmt::format("|sin k(xa - xb)| = {:.3g} below tolerance", std::abs(s)));
  }
  const Complex forward = kJ * (pa * expj(k * xb) - pb * expj(k * xa)) / (2.0 * s);
  const Complex backward = kJ * (pb * expj(-k * xa) - pa * expj(-k * xb)) / (2.0 * s);
  return {forward, backward};
}

PairAmplitudes decompose_pair(const ComplexSpectrum& pa, const ComplexSpectrum& pb, double xa,
                              double xb, const AirProperties& air, double tolerance) {
  if (xa == xb) throw DomainError("microphone positions of a pair must differ");
  if (!(pa.grid() == pb.grid())) throw GridMismatchError("pair spectra are on different grids");

  const auto& grid = pa.grid();
  PairAmplitudes out;
  out.forward.resize(grid.size());
  out.backward.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double k = wavenumber(grid[i], air);
    if (std::abs(std::sin(k * (xa - xb))) < tolerance) {
      out.singular_bins.push_back(i);
      continue;
    }
    std::tie(out.forward[i], out.backward[i]) = decompose_pair_at(pa[i], pb[i], xa, xb, k, tolerance);
  }
  return out;
}

PlaneWaveAmplitudes decompose_four_mic(const std::array<ComplexSpectrum, 4>& pressures,
                                       const TubeGeometry& geometry, const AirProperties& air,
                                       double tolerance) {
  require_same_grid(pressures);
  const auto& x = geometry.mic_positions();

  auto up = decompose_pair(pressures[0], pressures[1], x[0], x[1], air, tolerance);
  auto down = decompose_pair(pressures[2], pressures[3], x[2], x[3], air, tolerance);

  const auto& grid = pressures[0].grid();
  PlaneWaveAmplitudes out{grid,
                          std::move(up.forward),
                          std::move(up.backward),
                          std::move(down.forward),
                          std::move(down.backward),
                          std::vector<BinFlags>(grid.size(), 0),
                          {}};
  for (auto i : up.singular_bins) {
    out.flags[i] = out.flags[i] | BinFlag::singular_upstream;
    out.singular.push_back({i, grid[i], MicPair::upstream});
  }
  for (auto i : down.singular_bins) {
    out.flags[i] = out.flags[i] | BinFlag::singular_downstream;
    out.singular.push_back({i, grid[i], MicPair::downstream});
  }
  return out;
}

}  // namespace stlkit
