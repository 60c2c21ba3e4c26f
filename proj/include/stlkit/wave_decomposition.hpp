#pragma once

#include <array>
#include <utility>
#include <vector>

#include "stlkit/core.hpp"

namespace stlkit {

// Bins with |sin k(xa - xb)| below this are dropped: the two-microphone
// system is blind at half-wavelength spacings.
inline constexpr double kSingularTolerance = 1e-6;

enum class MicPair { upstream, downstream };

const char* to_string(MicPair pair) noexcept;

struct SingularBin {
  std::size_t index;
  double frequency;
  MicPair pair;
};

// Forward (e^{-jkx}) and backward (e^{+jkx}) amplitudes for one microphone pair.
struct PairAmplitudes {
  std::vector<Complex> forward;
  std::vector<Complex> backward;
  std::vector<std::size_t> singular_bins;  // forward/backward are zero there
};

// Single-bin solve. Throws SingularError when |sin k(xa - xb)| < tolerance.
std::pair<Complex, Complex> decompose_pair_at(Complex pa, Complex pb, double xa, double xb,
                                              double k, double tolerance = kSingularTolerance);

// Throws DomainError if xa == xb, GridMismatchError if the spectra differ in grid.
PairAmplitudes decompose_pair(const ComplexSpectrum& pa, const ComplexSpectrum& pb, double xa,
                              double xb, const AirProperties& air,
                              double tolerance = kSingularTolerance);

// A, B upstream; C, D downstream. flags marks bins removed by either pair.
struct PlaneWaveAmplitudes {
  FrequencyGrid grid;
  std::vector<Complex> a, b, c, d;
  std::vector<BinFlags> flags;
  std::vector<SingularBin> singular;
};

PlaneWaveAmplitudes decompose_four_mic(const std::array<ComplexSpectrum, 4>& pressures,
                                       const TubeGeometry& geometry, const AirProperties& air,
                                       double tolerance = kSingularTolerance);

}  // namespace stlkit
