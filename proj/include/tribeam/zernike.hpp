#pragma once

#include <complex>
#include <vector>

#include "tribeam/types.hpp"

namespace tribeam {

// Three-path geometry: a splitter grating sends the +-1 orders off-axis by
// theta1 each, slanted mirrors fold them back at half-angle alpha so all
// three beams overlap at the detector. separation s is the center-to-center
// distance between the 0 and each +-1 beam at the mirror plane.
struct InterferometerLayout {
  double wavelength = 0.0;
  double splitter_spacing = 0.0;
  double theta1 = 0.0;        // per-beam first-order angle
  double alpha = 0.0;         // recombination half-angle
  double L1 = 0.0;            // splitter to mirrors
  double L2 = 0.0;            // mirrors to detector
  double beam_width = 0.0;
  double separation = 0.0;
  double fringe_period = 0.0;  // lambda / (2 sin alpha)

  double total_length() const { return L1 + L2; }
  double overlap_length() const;  // beam_width / tan(alpha)
};

// theta1 = arcsin(lambda / (2 spacing)) per beam (the full +-1 splitting angle
// is 2 theta1); alpha = arcsin(lambda / (2 p)); L1 = s/tan(theta1),
// L2 = s/tan(alpha). Requires lambda < spacing, p > lambda/2, s > w.
InterferometerLayout solve_layout(double wavelength, double splitter_spacing,
                                  double separation, double beam_width,
                                  double fringe_period);

// Normalized complex amplitudes of the three recombined beams; phase is the
// extra phase on the central path.
struct ThreeBeamField {
  std::complex<double> a_minus{0.0, 0.0}, a_zero{1.0, 0.0}, a_plus{0.0, 0.0};
  double phase = 0.0;
  double alpha = 0.0;
  double wavelength = 0.0;

  void validate() const;  // |a-|^2+|a0|^2+|a+|^2 = 1 +- 1e-9
};

// values[iz*nx + ix] over the given grids.
struct IntensityMap {
  std::vector<double> x, z, values;

  double at(int ix, int iz) const { return values[size_t(iz) * x.size() + ix]; }
};

// I(x,z) = |a- e^{ik(-x sin a + z cos a)} + a0 e^{i(kz+phase)} + a+ e^{ik(x sin a + z cos a)}|^2.
// Evaluated with the common carrier e^{ikz cos a} factored out (identical
// intensity, keeps trig arguments small).
IntensityMap interference(const ThreeBeamField& f, const std::vector<double>& x_grid,
                          const std::vector<double>& z_grid);

// Axial displacement equivalent to adding dphi on the central path:
// dz = dphi / (k (1 - cos alpha)). The pattern satisfies
// I(x,z; phase+dphi) = I(x, z+dz; phase) exactly. alpha = 0 is degenerate.
double axial_shift(double dphi, double wavelength, double alpha);

// Transmission scan of a binary comb (period, open fraction duty) across the
// row of the map nearest z_plane: S(x0) = integral I(x) T(x - x0) dx on the
// map's x grid. The comb must be resolved: period >= 2 * grid step.
std::vector<double> analyzer_scan(const IntensityMap& map, double z_plane,
                                  double period, double duty,
                                  const std::vector<double>& offsets);

}  // namespace tribeam
