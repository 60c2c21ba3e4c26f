#include "stlkit/transfer_matrix.hpp"

#include <cmath>
#include <limits>

namespace stlkit {

namespace {

// Denominator shared by the transmission and anechoic reflection coefficients.
Complex anechoic_denominator(const Matrix2& t, double z0) {
  return t.t11 + t.t12 / z0 + z0 * t.t21 + t.t22;
}

bool vanishes(Complex value, double scale) {
  return std::abs(value) <= 1e-14 * scale || !std::isfinite(std::abs(value));
}

double matrix_scale(const Matrix2& t, double z0) {
  return std::abs(t.t11) + std::abs(t.t12) / z0 + z0 * std::abs(t.t21) + std::abs(t.t22);
}

}  // namespace

BoundaryStates boundary_states(const PlaneWaveAmplitudes& amps, double thickness,
                               const AirProperties& air) {
  const auto n = amps.grid.size();
  const double z0 = air.impedance();
  BoundaryStates s{amps.grid, std::vector<Complex>(n), std::vector<Complex>(n),
                   std::vector<Complex>(n), std::vector<Complex>(n), amps.flags};
  for (std::size_t i = 0; i < n; ++i) {
    const double k = wavenumber(amps.grid[i], air);
    const Complex fwd = amps.c[i] * std::polar(1.0, -k * thickness);
    const Complex bwd = amps.d[i] * std::polar(1.0, k * thickness);
    s.p0[i] = amps.a[i] + amps.b[i];
    s.v0[i] = (amps.a[i] - amps.b[i]) / z0;
    s.pd[i] = fwd + bwd;
    s.vd[i] = (fwd - bwd) / z0;
  }
  return s;
}

std::optional<Matrix2> reconstruct_one_load(Complex p0, Complex v0, Complex pd, Complex vd,
                                            double tolerance) {
  const Complex den = p0 * vd + pd * v0;
  const double scale = std::abs(p0) * std::abs(vd) + std::abs(pd) * std::abs(v0);
  if (!(scale > 0.0) || std::abs(den) < tolerance * scale) return std::nullopt;

  const Complex t11 = (p0 * v0 + pd * vd) / den;
  // Written without dividing by pd or vd so either may be zero.
  const Complex t12 = (p0 * p0 - pd * pd) / den;
  const Complex t21 = (v0 * v0 - vd * vd) / den;
  return Matrix2{t11, t12, t21, t11};
}

TransferMatrix reconstruct_one_load(const BoundaryStates& states, double tolerance) {
  const auto n = states.grid.size();
  TransferMatrix out{states.grid, std::vector<Matrix2>(n), states.flags};
  for (std::size_t i = 0; i < n; ++i) {
    if (!is_usable(out.flags[i])) continue;
    auto t = reconstruct_one_load(states.p0[i], states.v0[i], states.pd[i], states.vd[i], tolerance);
    if (t) {
      out.values[i] = *t;
    } else {
      out.flags[i] = out.flags[i] | BinFlag::closure_singular;
    }
  }
  return out;
}

std::optional<Complex> transmission_coefficient(const Matrix2& t, double k, double thickness,
                                                const AirProperties& air) {
  const double z0 = air.impedance();
  const Complex den = anechoic_denominator(t, z0);
  if (vanishes(den, matrix_scale(t, z0))) return std::nullopt;
  return 2.0 * std::polar(1.0, k * thickness) / den;
}

std::optional<Complex> reflection_coefficient_anechoic(const Matrix2& t, const AirProperties& air) {
  const double z0 = air.impedance();
  const Complex den = anechoic_denominator(t, z0);
  if (vanishes(den, matrix_scale(t, z0))) return std::nullopt;
  return (t.t11 + t.t12 / z0 - z0 * t.t21 - t.t22) / den;
}

std::optional<Complex> surface_impedance_anechoic(Complex reflection, const AirProperties& air) {
  const Complex den = 1.0 - reflection;
  if (std::abs(den) <= 1e-15) return std::nullopt;
  return air.impedance() * (1.0 + reflection) / den;
}

std::optional<Complex> rigid_backing_reflection(const Matrix2& t, const AirProperties& air) {
  const double z0 = air.impedance();
  const Complex den = t.t11 + z0 * t.t21;
  if (vanishes(den, std::abs(t.t11) + z0 * std::abs(t.t21))) return std::nullopt;
  return (t.t11 - z0 * t.t21) / den;
}

double stl(Complex transmission) {
  const double power = std::norm(transmission);
  if (power == 0.0) return std::numeric_limits<double>::infinity();
  return -10.0 * std::log10(power);
}

AcousticIndicators compute_indicators(const TransferMatrix& matrix, double thickness,
                                      const AirProperties& air) {
  const auto n = matrix.grid.size();
  AcousticIndicators out{matrix.grid,
                         std::vector<Complex>(n),
                         std::vector<Complex>(n),
                         std::vector<std::optional<Complex>>(n),
                         std::vector<std::optional<Complex>>(n),
                         std::vector<double>(n, std::numeric_limits<double>::quiet_NaN()),
                         matrix.flags};
  for (std::size_t i = 0; i < n; ++i) {
    if (!is_usable(out.flags[i])) continue;
    const auto& t = matrix.values[i];
    const double k = wavenumber(matrix.grid[i], air);
    const auto ta = transmission_coefficient(t, k, thickness, air);
    const auto ra = reflection_coefficient_anechoic(t, air);
    if (!ta || !ra) {
      out.flags[i] = out.flags[i] | BinFlag::invalid_denominator;
      continue;
    }
    out.transmission[i] = *ta;
    out.reflection[i] = *ra;
    out.impedance[i] = surface_impedance_anechoic(*ra, air);
    out.rigid_reflection[i] = rigid_backing_reflection(t, air);
    out.stl[i] = stl(*ta);
    if (std::isinf(out.stl[i])) out.flags[i] = out.flags[i] | BinFlag::zero_transmission;
  }
  return out;
}

DirectStl stl_direct_anechoic(const PlaneWaveAmplitudes& amps, double anechoic_threshold) {
  const auto n = amps.grid.size();
  DirectStl out{std::vector<double>(n, std::numeric_limits<double>::quiet_NaN()), amps.flags};
  for (std::size_t i = 0; i < n; ++i) {
    if (!is_usable(out.flags[i])) continue;
    const double a = std::abs(amps.a[i]);
    const double c = std::abs(amps.c[i]);
    if (a == 0.0) {
      out.flags[i] = out.flags[i] | BinFlag::invalid_denominator;
      continue;
    }
    if (c == 0.0) {
      out.flags[i] = out.flags[i] | BinFlag::zero_transmission;
      out.stl[i] = std::numeric_limits<double>::infinity();
      continue;
    }
    if (std::abs(amps.d[i]) > anechoic_threshold * c) {
      out.flags[i] = out.flags[i] | BinFlag::anechoic_violation;
    }
    out.stl[i] = 20.0 * std::log10(a / c);
  }
  return out;
}

}  // namespace stlkit
