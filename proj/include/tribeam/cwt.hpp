#pragma once

#include <complex>
#include <vector>

#include "tribeam/types.hpp"

namespace tribeam {

// Truncated order-coupling system for one plane-wave incidence. Orders run
// m = -max_order .. +max_order; arrays are indexed by m + max_order.
// Sign convention: order +1 is phase-matched at theta = +bragg_angle, which
// fixes the transverse carrier to k_x = -k sin(theta).
struct CoupledWaveSystem {
  int max_order = 4;
  double coupling = 0.0;           // kappa, 1/m
  std::vector<double> dephasing;   // vart_m, 1/m
  double depth = 0.0;              // effective thickness, m
  double k = 0.0, kx = 0.0, kz = 0.0, grating_k = 0.0;
  double wavelength = 0.0, theta = 0.0;

  int order_count() const { return 2 * max_order + 1; }
};

// Complex order amplitudes at a given depth.
struct OrderField {
  int max_order = 0;
  std::vector<std::complex<double>> amplitudes;  // index m + max_order
  double depth = 0.0;

  std::complex<double> amp(int m) const;
};

// Per-order efficiencies |A_m|^2. at(m) returns 0 outside the retained range
// so sets with different truncation compare directly.
struct EfficiencySet {
  int max_order = 0;
  std::vector<double> eta;

  double at(int m) const;
  double sum() const;
};

struct PropagateOptions {
  bool check = true;  // step-doubling validation (difference > 1e-8 fails)
};

// kappa = pi*dn/(lambda cos theta); vart_m = -(2 m k_x K + m^2 K^2)/(2 k_z);
// depth = thickness/cos(tilt). max_order >= 2 so the +-2 orders exist.
CoupledWaveSystem build_system(const Grating& g, double wavelength,
                               double theta, int max_order = 4);

// Fixed-step classical RK4 from A_0(0)=1. steps is a floor: the count is
// raised automatically when the accumulated phase per step would be too
// coarse for the step-doubling check. Integrates at n and 2n steps; a
// disagreement above 1e-8 or norm drift above 1e-6 raises accuracy_error.
// Returns the 2n-step result.
OrderField propagate(const CoupledWaveSystem& sys, int steps = 2000,
                     const PropagateOptions& opt = {});

// Exact propagator via the eigendecomposition of the real symmetric
// tridiagonal coupling matrix. Used as the fast engine for scans and fits;
// equivalence with propagate() is covered by tests.
OrderField propagate_spectral(const CoupledWaveSystem& sys);

// The step count propagate() will actually use for a requested floor.
long planned_steps(const CoupledWaveSystem& sys, int requested);

EfficiencySet efficiencies(const OrderField& f);

// Two-wave (Kogelnik) first-order efficiency
//   eta_1 = nu^2 * sinc^2(sqrt(nu^2 + xi^2)),
//   nu = pi dn d_eff / (lambda cos theta_B), xi = pi d_eff (theta - theta_B) / spacing.
// Meaningful in the thick-grating regime (large Klein-Cook Q).
double two_wave(const Grating& g, double wavelength, double theta);

// Thin-grating (Raman-Nath) limit at normal incidence: eta_m = J_m(2 kappa d_eff)^2.
EfficiencySet thin_grating(const Grating& g, double wavelength, int max_order = 4);

}  // namespace tribeam
