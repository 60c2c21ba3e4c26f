#pragma once

#include <optional>
#include <vector>

#include "stlkit/core.hpp"
#include "stlkit/wave_decomposition.hpp"

namespace stlkit {

// Relates (P, V) at x = 0 to (P, V) at x = d:
//   [P; V]_0 = [t11 t12; t21 t22] [P; V]_d
// with V the physical particle velocity, so t12 is in Pa.s/m and t21 in m/(Pa.s).
struct Matrix2 {
  Complex t11{1.0}, t12{0.0}, t21{0.0}, t22{1.0};

  static Matrix2 identity() noexcept { return {}; }
  Complex det() const noexcept { return t11 * t22 - t12 * t21; }

  friend Matrix2 operator*(const Matrix2& l, const Matrix2& r) noexcept {
    return {l.t11 * r.t11 + l.t12 * r.t21, l.t11 * r.t12 + l.t12 * r.t22,
            l.t21 * r.t11 + l.t22 * r.t21, l.t21 * r.t12 + l.t22 * r.t22};
  }
};

// Pressure and velocity at the entry (x = 0) and exit (x = d) faces, per bin.
struct BoundaryStates {
  FrequencyGrid grid;
  std::vector<Complex> p0, v0, pd, vd;
  std::vector<BinFlags> flags;
};

BoundaryStates boundary_states(const PlaneWaveAmplitudes& amps, double thickness,
                               const AirProperties& air);

// Relative tolerance on |P0 Vd + Pd V0| against |P0||Vd| + |Pd||V0|.
inline constexpr double kClosureTolerance = 1e-12;

// Symmetric reciprocal closure (t11 == t22, det == 1) from one measured load.
// nullopt when the shared denominator vanishes.
std::optional<Matrix2> reconstruct_one_load(Complex p0, Complex v0, Complex pd, Complex vd,
                                            double tolerance = kClosureTolerance);

struct TransferMatrix {
  FrequencyGrid grid;
  std::vector<Matrix2> values;
  std::vector<BinFlags> flags;
};

TransferMatrix reconstruct_one_load(const BoundaryStates& states,
                                    double tolerance = kClosureTolerance);

// Anechoic-termination indicators. nullopt marks a vanishing denominator.
std::optional<Complex> transmission_coefficient(const Matrix2& t, double k, double thickness,
                                                const AirProperties& air);
std::optional<Complex> reflection_coefficient_anechoic(const Matrix2& t, const AirProperties& air);

// rho0 c (1 + R) / (1 - R). nullopt means infinite impedance (R == 1, rigid).
std::optional<Complex> surface_impedance_anechoic(Complex reflection, const AirProperties& air);

// Reflection with the sample backed by a rigid wall (V_d = 0).
std::optional<Complex> rigid_backing_reflection(const Matrix2& t, const AirProperties& air);

// 10 log10(1 / |T|^2); +inf for zero transmission.
double stl(Complex transmission);

struct AcousticIndicators {
  FrequencyGrid grid;
  std::vector<Complex> transmission;
  std::vector<Complex> reflection;
  std::vector<std::optional<Complex>> impedance;
  std::vector<std::optional<Complex>> rigid_reflection;
  std::vector<double> stl;
  std::vector<BinFlags> flags;
};

AcousticIndicators compute_indicators(const TransferMatrix& matrix, double thickness,
                                      const AirProperties& air);

// Inverts the anechoic idealisation: STL = 20 log10|A / C|. Bins where
// |D|/|C| exceeds the threshold keep a value but carry anechoic_violation.
inline constexpr double kAnechoicThreshold = 0.01;

struct DirectStl {
  std::vector<double> stl;
  std::vector<BinFlags> flags;
};

DirectStl stl_direct_anechoic(const PlaneWaveAmplitudes& amps,
                              double anechoic_threshold = kAnechoicThreshold);

}  // namespace stlkit
