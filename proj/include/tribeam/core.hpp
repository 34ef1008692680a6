#pragma once

#include "tribeam/types.hpp"

namespace tribeam {

// First-order phase-matching angle arcsin(lambda / (2 spacing)).
// Throws std::invalid_argument when lambda >= 2*spacing (no propagating order).
double bragg_angle(double wavelength, double spacing);

// Path length through a film of thickness d tilted by zeta about the
// grating-vector axis: d / cos(zeta). |zeta| must be < pi/2.
double effective_thickness(double thickness, double tilt);

// Index modulation amplitude for neutrons: lambda^2 * (b_c * drho) / (2 pi).
// A negative scattering-length-density modulation flips the contrast sign.
double index_modulation(double wavelength, const MaterialModulation& m);

// Klein-Cook regime parameter Q = 2 pi lambda d_eff / (n_mean Lambda^2).
// Q >~ 10 is the two-wave (Bragg) regime, Q <~ 0.1 the thin-grating regime.
double klein_cook(double wavelength, double effective_thickness,
                  double spacing, double mean_index = 1.0);

}  // namespace tribeam
