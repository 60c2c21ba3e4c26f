#include "stlkit/core.hpp"

#include <cmath>
#include <utility>

#include <fmt/format.h>

#include "stlkit/errors.hpp"

namespace stlkit {

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(fmt::format("{} must be positive and finite, got {}", what, v));
  }
}

}  // namespace

AirProperties::AirProperties(double density, double sound_speed, double temperature_c,
                             double relative_humidity)
    : density_(density),
      sound_speed_(sound_speed),
      temperature_c_(temperature_c),
      relative_humidity_(relative_humidity) {
  require_positive(density_, "air density");
  require_positive(sound_speed_, "sound speed");
}

TubeGeometry::TubeGeometry(std::array<double, 4> mic_positions, double sample_thickness,
                           double tube_diameter)
    : mics_(mic_positions), thickness_(sample_thickness), diameter_(tube_diameter) {
  for (double x : mics_) {
    if (!std::isfinite(x)) throw DomainError("microphone position must be finite");
  }
  if (!(mics_[0] < mics_[1])) throw DomainError("upstream microphones need x1 < x2");
  if (!(mics_[2] < mics_[3])) throw DomainError("downstream microphones need x3 < x4");
  require_positive(thickness_, "sample thickness");
  require_positive(diameter_, "tube diameter");
}

FrequencyGrid::FrequencyGrid(std::vector<double> frequencies) {
  if (frequencies.empty()) throw DomainError("frequency grid is empty");
  for (std::size_t i = 0; i < frequencies.size(); ++i) {
    const double f = frequencies[i];
    if (!(f > 0.0) || !std::isfinite(f)) {
      throw DomainError(fmt::format("grid frequency {} at index {} is not positive", f, i));
    }
    if (i > 0 && !(f > frequencies[i - 1])) {
      throw DomainError(fmt::format("grid is not strictly increasing at index {}", i));
    }
  }
  values_ = std::make_shared<const std::vector<double>>(std::move(frequencies));
}

FrequencyGrid FrequencyGrid::linear(double f_min, double f_max, double step) {
  require_positive(f_min, "f_min");
  require_positive(step, "grid step");
  if (f_max < f_min) throw DomainError("f_max is below f_min");
  const auto n = static_cast<std::size_t>(std::floor((f_max - f_min) / step + 1e-9)) + 1;
  std::vector<double> f(n);
  for (std::size_t i = 0; i < n; ++i) f[i] = f_min + static_cast<double>(i) * step;
  return FrequencyGrid(std::move(f));
}

bool FrequencyGrid::operator==(const FrequencyGrid& other) const noexcept {
  return values_ == other.values_ || *values_ == *other.values_;
}

ComplexSpectrum::ComplexSpectrum(FrequencyGrid grid, std::vector<Complex> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw GridMismatchError(fmt::format("spectrum has {} values for a {}-point grid",
                                        values_.size(), grid_.size()));
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i].real()) || !std::isfinite(values_[i].imag())) {
      throw DomainError(fmt::format("non-finite spectrum value at {} Hz", grid_[i]));
    }
  }
}

ComplexSpectrum ComplexSpectrum::zeros(FrequencyGrid grid) {
  std::vector<Complex> v(grid.size());
  return ComplexSpectrum(std::move(grid), std::move(v));
}

ComplexSpectrum operator+(const ComplexSpectrum& a, const ComplexSpectrum& b) {
  if (!(a.grid_ == b.grid_)) throw GridMismatchError("cannot add spectra on different grids");
  std::vector<Complex> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.values_[i] + b.values_[i];
  return ComplexSpectrum(a.grid_, std::move(v));
}

ComplexSpectrum operator*(Complex s, const ComplexSpectrum& a) {
  std::vector<Complex> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = s * a.values_[i];
  return ComplexSpectrum(a.grid_, std::move(v));
}

void require_same_grid(std::span<const ComplexSpectrum> spectra) {
  for (std::size_t i = 1; i < spectra.size(); ++i) {
    if (!(spectra[i].grid() == spectra[0].grid())) {
      throw GridMismatchError(fmt::format("spectrum {} is on a different grid", i + 1));
    }
  }
}

MaterialSpec MaterialSpec::from_mm(std::string name, double thickness_mm, double surface_density,
                                   std::optional<double> bulk_density) {
  MaterialSpec m{std::move(name), thickness_mm * 1e-3, surface_density, bulk_density};
  m.validate();
  return m;
}

void MaterialSpec::validate() const {
  require_positive(thickness_m, "material thickness");
  require_positive(surface_density, "surface density");
  if (bulk_density) {
    require_positive(*bulk_density, "bulk density");
    const double implied = *bulk_density * thickness_m;
    if (std::abs(implied - surface_density) > 0.01 * surface_density) {
      throw DomainError(fmt::format(
          "{}: surface density {} kg/m^2 disagrees with density x thickness = {} kg/m^2", name,
          surface_density, implied));
    }
  }
}

std::vector<MaterialSpec> curtain_material_catalogue() {
  return {
      MaterialSpec::from_mm("Woolen felt (woven, soft)", 1.235, 0.213),
      MaterialSpec::from_mm("Woolen felt (woven, stiff)", 1.922, 0.252),
      MaterialSpec::from_mm("TANGO curtain", 0.57, 0.224),
      MaterialSpec::from_mm("100% polyester hospital curtain", 0.6, 0.229),
      MaterialSpec::from_mm("Elephant mat (type I)", 2.276, 0.318),
      MaterialSpec::from_mm("Elephant mat (type II)", 1.682, 0.366),
      MaterialSpec::from_mm("Textured soft liner (GRIP)", 1.65, 0.644),
      MaterialSpec::from_mm("PVC coated polyester fabric", 0.89, 1.135),
      MaterialSpec::from_mm("100% pure PVC sheet", 1.012, 1.216),
  };
}

double wavenumber(double frequency, const AirProperties& air) {
  require_positive(frequency, "frequency");
  return 2.0 * kPi * frequency / air.sound_speed();
}

double plane_wave_cutoff(const TubeGeometry& geometry, const AirProperties& air) {
  return 1.841 * air.sound_speed() / (kPi * geometry.tube_diameter());
}

double surface_density(double thickness_m, double density) {
  require_positive(thickness_m, "thickness");
  require_positive(density, "density");
  return thickness_m * density;
}

std::string describe_flags(BinFlags flags) {
  static constexpr std::pair<BinFlag, const char*> kNames[] = {
      {BinFlag::singular_upstream, "singular_upstream"},
      {BinFlag::singular_downstream, "singular_downstream"},
      {BinFlag::closure_singular, "closure_singular"},
      {BinFlag::invalid_denominator, "invalid_denominator"},
      {BinFlag::zero_transmission, "zero_transmission"},
      {BinFlag::above_cutoff, "above_cutoff"},
      {BinFlag::anechoic_violation, "anechoic_violation"},
  };
  std::string out;
  for (const auto& [flag, name] : kNames) {
    if (!has_flag(flags, flag)) continue;
    if (!out.empty()) out += '|';
    out += name;
  }
  return out;
}

}  // namespace stlkit
