#include "stlkit/analytic_models.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "stlkit/errors.hpp"

namespace stlkit {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr Complex kJ{0.0, 1.0};

}  // namespace

const char* to_string(MassLawConstant c) noexcept {
  return c == MassLawConstant::paper ? "paper" : "normal";
}

double mass_law_constant(MassLawConstant c, const AirProperties& air) {
  if (c == MassLawConstant::paper) return -48.0;
  return 20.0 * std::log10(kPi / air.impedance());
}

double mass_law_stl(double frequency, double surface_density, MassLawConstant constant,
                    const AirProperties& air) {
  if (!(frequency > 0.0) || !(surface_density > 0.0)) {
    throw DomainError(fmt::format("mass law needs f > 0 and m_s > 0 (got {}, {})", frequency,
                                  surface_density));
  }
  return 20.0 * std::log10(frequency * surface_density) + mass_law_constant(constant, air);
}

Matrix2 limp_mass_matrix(double frequency, double surface_density) {
  if (!(frequency > 0.0) || surface_density < 0.0) {
    throw DomainError("limp mass needs f > 0 and m_s >= 0");
  }
  return {1.0, kJ * (2.0 * kPi * frequency * surface_density), 0.0, 1.0};
}

Matrix2 air_gap_matrix(double frequency, double length, const AirProperties& air) {
  if (length < 0.0) throw DomainError("air gap length must be non-negative");
  const double kl = wavenumber(frequency, air) * length;
  const double z0 = air.impedance();
  const double c = std::cos(kl);
  const double s = std::sin(kl);
  return {c, kJ * (z0 * s), kJ * (s / z0), c};
}

LayerModel::LayerModel(Kind kind) : kind_(std::move(kind)) {
  std::visit(overloaded{
                 [](const IdentityLayer&) {},
                 [](const LimpMassLayer& l) {
                   if (!(l.surface_density > 0.0)) {
                     throw DomainError("limp mass layer needs m_s > 0");
                   }
                 },
                 [](const AirGapLayer& l) {
                   if (!(l.length >= 0.0)) throw DomainError("air gap needs length >= 0");
                 },
                 [](const ExplicitLayer& l) {
                   if (l.passive_symmetric && std::abs(l.matrix.det() - 1.0) > 1e-9) {
                     throw DomainError("passive-symmetric explicit layer must have det = 1");
                   }
                 },
             },
             kind_);
}

std::string LayerModel::describe() const {
  return std::visit(
      overloaded{
          [](const IdentityLayer&) { return std::string("identity"); },
          [](const LimpMassLayer& l) { return fmt::format("limp {} kg/m^2", l.surface_density); },
          [](const AirGapLayer& l) { return fmt::format("air {} mm", l.length * 1e3); },
          [](const ExplicitLayer&) { return std::string("matrix"); },
      },
      kind_);
}

Matrix2 LayerModel::matrix_at(double frequency, const AirProperties& air) const {
  return std::visit(
      overloaded{
          [](const IdentityLayer&) { return Matrix2::identity(); },
          [&](const LimpMassLayer& l) { return limp_mass_matrix(frequency, l.surface_density); },
          [&](const AirGapLayer& l) { return air_gap_matrix(frequency, l.length, air); },
          [](const ExplicitLayer& l) { return l.matrix; },
      },
      kind_);
}

Matrix2 cascade(std::span<const LayerModel> layers, double frequency, const AirProperties& air) {
  if (layers.empty()) throw DomainError("cannot cascade an empty layer list");
  Matrix2 total = layers.front().matrix_at(frequency, air);
  for (std::size_t i = 1; i < layers.size(); ++i) total = total * layers[i].matrix_at(frequency, air);
  return total;
}

TransferMatrix cascade(std::span<const LayerModel> layers, const FrequencyGrid& grid,
                       const AirProperties& air) {
  TransferMatrix out{grid, std::vector<Matrix2>(grid.size()), std::vector<BinFlags>(grid.size(), 0)};
  for (std::size_t i = 0; i < grid.size(); ++i) out.values[i] = cascade(layers, grid[i], air);
  return out;
}

std::vector<double> stack_stl(std::span<const LayerModel> layers, const FrequencyGrid& grid,
                              const AirProperties& air) {
  std::vector<double> out(grid.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto ta =
        transmission_coefficient(cascade(layers, grid[i], air), wavenumber(grid[i], air), 0.0, air);
    if (ta) out[i] = stl(*ta);
  }
  return out;
}

}  // namespace stlkit
