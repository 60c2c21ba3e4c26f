#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "stlkit/core.hpp"
#include "stlkit/transfer_matrix.hpp"

namespace stlkit {

// Mass-law offset applied to 20 log10(f m_s).
//   paper:  -48 dB, the empirical field-incidence figure used for curtains.
//   normal: 20 log10(pi / rho0 c), the normal-incidence asymptote (about -42.4 dB).
enum class MassLawConstant { paper, normal };

const char* to_string(MassLawConstant c) noexcept;
double mass_law_constant(MassLawConstant c, const AirProperties& air = {});

// 20 log10(f m_s) + constant. May be negative at low f m_s.
double mass_law_stl(double frequency, double surface_density,
                    MassLawConstant constant = MassLawConstant::paper,
                    const AirProperties& air = {});

// [[1, j w m_s], [0, 1]]
Matrix2 limp_mass_matrix(double frequency, double surface_density);

// [[cos kL, j rho0 c sin kL], [(j / rho0 c) sin kL, cos kL]]
Matrix2 air_gap_matrix(double frequency, double length, const AirProperties& air);

struct IdentityLayer {};
struct LimpMassLayer {
  double surface_density;
};
struct AirGapLayer {
  double length;
};
struct ExplicitLayer {
  Matrix2 matrix;
  bool passive_symmetric = false;
};

class LayerModel {
 public:
  using Kind = std::variant<IdentityLayer, LimpMassLayer, AirGapLayer, ExplicitLayer>;

  LayerModel(Kind kind);  // NOLINT: implicit from any layer alternative
  static LayerModel identity() { return LayerModel(IdentityLayer{}); }
  static LayerModel limp_mass(double m_s) { return LayerModel(LimpMassLayer{m_s}); }
  static LayerModel air_gap(double length) { return LayerModel(AirGapLayer{length}); }
  static LayerModel explicit_matrix(Matrix2 m, bool passive_symmetric = false) {
    return LayerModel(ExplicitLayer{m, passive_symmetric});
  }

  const Kind& kind() const noexcept { return kind_; }
  std::string describe() const;
  Matrix2 matrix_at(double frequency, const AirProperties& air) const;

 private:
  Kind kind_;
};

// Ordered product, incident side first. Throws DomainError on an empty stack.
Matrix2 cascade(std::span<const LayerModel> layers, double frequency, const AirProperties& air);
TransferMatrix cascade(std::span<const LayerModel> layers, const FrequencyGrid& grid,
                       const AirProperties& air);

// Normal-incidence STL of a stack in an anechoic tube (thickness does not
// affect |T_a|).
std::vector<double> stack_stl(std::span<const LayerModel> layers, const FrequencyGrid& grid,
                              const AirProperties& air);

}  // namespace stlkit
