#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace stlkit {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

// Air state. Only density and sound speed enter the computations; temperature
// and humidity are carried for the report.
class AirProperties {
 public:
  AirProperties() = default;
  AirProperties(double density, double sound_speed, double temperature_c = 20.0,
                double relative_humidity = 50.0);

  double density() const noexcept { return density_; }
  double sound_speed() const noexcept { return sound_speed_; }
  double temperature_c() const noexcept { return temperature_c_; }
  double relative_humidity() const noexcept { return relative_humidity_; }

  // rho0 * c, Pa.s/m
  double impedance() const noexcept { return density_ * sound_speed_; }

 private:
  double density_ = 1.204;
  double sound_speed_ = 343.2;
  double temperature_c_ = 20.0;
  double relative_humidity_ = 50.0;
};

// Four-microphone tube layout. The sample occupies [0, d] on the tube axis;
// x1 < x2 sit upstream, x3 < x4 downstream.
class TubeGeometry {
 public:
  TubeGeometry(std::array<double, 4> mic_positions, double sample_thickness, double tube_diameter);

  const std::array<double, 4>& mic_positions() const noexcept { return mics_; }
  double mic(int i) const { return mics_.at(static_cast<std::size_t>(i)); }
  double sample_thickness() const noexcept { return thickness_; }
  double tube_diameter() const noexcept { return diameter_; }

 private:
  std::array<double, 4> mics_;
  double thickness_;
  double diameter_;
};

// Strictly increasing positive frequencies (Hz). Copies share storage; two grids
// compare equal when they share storage or hold identical values.
class FrequencyGrid {
 public:
  explicit FrequencyGrid(std::vector<double> frequencies);

  // f_min, f_min + step, ... up to f_max (inclusive within 1e-9 step).
  static FrequencyGrid linear(double f_min, double f_max, double step);

  std::span<const double> values() const noexcept { return *values_; }
  std::size_t size() const noexcept { return values_->size(); }
  double operator[](std::size_t i) const { return (*values_)[i]; }
  double front() const { return values_->front(); }
  double back() const { return values_->back(); }

  bool operator==(const FrequencyGrid& other) const noexcept;

 private:
  std::shared_ptr<const std::vector<double>> values_;
};

class ComplexSpectrum {
 public:
  ComplexSpectrum(FrequencyGrid grid, std::vector<Complex> values);
  static ComplexSpectrum zeros(FrequencyGrid grid);

  const FrequencyGrid& grid() const noexcept { return grid_; }
  std::span<const Complex> values() const noexcept { return values_; }
  const Complex& operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const noexcept { return values_.size(); }

  friend ComplexSpectrum operator+(const ComplexSpectrum& a, const ComplexSpectrum& b);
  friend ComplexSpectrum operator*(Complex s, const ComplexSpectrum& a);

 private:
  FrequencyGrid grid_;
  std::vector<Complex> values_;
};

// Throws GridMismatchError unless all spectra share a grid.
void require_same_grid(std::span<const ComplexSpectrum> spectra);

struct MaterialSpec {
  std::string name;
  double thickness_m;
  double surface_density;  // kg/m^2
  std::optional<double> bulk_density;

  // Thickness given in millimetres, as catalogues list it.
  static MaterialSpec from_mm(std::string name, double thickness_mm, double surface_density,
                              std::optional<double> bulk_density = std::nullopt);

  // Throws DomainError on non-positive values or when m_s deviates from
  // bulk_density * thickness by more than 1%.
  void validate() const;
};

// The nine curtain materials with measured thickness and surface density.
std::vector<MaterialSpec> curtain_material_catalogue();

// 2*pi*f/c. Lossless, real.
double wavenumber(double frequency, const AirProperties& air);

// First higher-order mode cut-on of a circular duct: 1.841 c / (pi D).
double plane_wave_cutoff(const TubeGeometry& geometry, const AirProperties& air);

double surface_density(double thickness_m, double density);

// Per-bin status bits carried through the pipeline.
enum class BinFlag : std::uint32_t {
  singular_upstream = 1u << 0,
  singular_downstream = 1u << 1,
  closure_singular = 1u << 2,
  invalid_denominator = 1u << 3,
  zero_transmission = 1u << 4,
  above_cutoff = 1u << 5,
  anechoic_violation = 1u << 6,
};

using BinFlags = std::uint32_t;

constexpr BinFlags operator|(BinFlags a, BinFlag b) noexcept {
  return a | static_cast<BinFlags>(b);
}
constexpr bool has_flag(BinFlags flags, BinFlag f) noexcept {
  return (flags & static_cast<BinFlags>(f)) != 0;
}

// Flags that remove a bin from the analysis. The rest are warnings.
inline constexpr BinFlags kInvalidatingFlags =
    static_cast<BinFlags>(BinFlag::singular_upstream) |
    static_cast<BinFlags>(BinFlag::singular_downstream) |
    static_cast<BinFlags>(BinFlag::closure_singular) |
    static_cast<BinFlags>(BinFlag::invalid_denominator) |
    static_cast<BinFlags>(BinFlag::zero_transmission);

constexpr bool is_usable(BinFlags flags) noexcept { return (flags & kInvalidatingFlags) == 0; }

std::string describe_flags(BinFlags flags);

}  // namespace stlkit
