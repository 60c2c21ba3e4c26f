#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "stlkit/band_analysis.hpp"
#include "stlkit/core.hpp"

namespace stlkit::io {

// Four-microphone spectra with the geometry and air they were taken with.
//
//   # stlkit mic-spectra v1
//   # bins = <N>
//   # mic_positions_m = x1,x2,x3,x4
//   # sample_thickness_m = d
//   # tube_diameter_m = D
//   # air_density = rho0
//   # air_sound_speed = c
//   # air_temperature_c = T
//   # air_relative_humidity = RH
//   frequency_hz,p1_re,p1_im,p2_re,p2_im,p3_re,p3_im,p4_re,p4_im
//   <N rows, strictly increasing frequency>
struct MicSpectraFile {
  TubeGeometry geometry;
  AirProperties air;
  std::array<ComplexSpectrum, 4> pressures;
};

void write_mic_spectra(std::ostream& out, const MicSpectraFile& file);
MicSpectraFile read_mic_spectra(std::istream& in);
MicSpectraFile read_mic_spectra(const std::filesystem::path& path);

// Throws GeometryMismatchError when the file header disagrees with the given
// geometry/air (relative tolerance 1e-9).
void require_matching_setup(const MicSpectraFile& file, const TubeGeometry& geometry,
                            const AirProperties& air);

// Band table CSV. Header row: "quantity" then the nominal centres. One row per
// quantity; an empty field is an absent band. A row named "<q>.coverage"
// directly after row <q> carries its coverage (omitted when all 1).
void write_band_tables(std::ostream& out, std::span<const BandTable> tables);
std::vector<BandTable> read_band_tables(std::istream& in);
std::vector<BandTable> read_band_tables(const std::filesystem::path& path);

// Narrowband dB curve: "frequency_hz,value" rows, optional header line; an
// empty value marks an invalid bin.
void write_curve(std::ostream& out, const NarrowbandCurve& curve, std::string_view name = "value");
NarrowbandCurve read_curve(std::istream& in);
NarrowbandCurve read_curve(const std::filesystem::path& path);

// Material list: "name,thickness_mm,surface_density[,density]" rows with a header.
std::vector<MaterialSpec> read_materials(std::istream& in);
std::vector<MaterialSpec> read_materials(const std::filesystem::path& path);

}  // namespace stlkit::io
