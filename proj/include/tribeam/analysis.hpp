#pragma once

#include <string>
#include <vector>

#include "tribeam/instrument.hpp"

namespace tribeam {

struct ParameterBounds {
  double lo = 0.0, hi = 0.0;
};

// Weighted least squares of the beam-averaged forward model against a
// measured rocking curve. grating carries the frozen geometry (spacing, tilt)
// and the initial guesses for the free parameters; offset is a rocking-axis
// zero error (model evaluated at theta - offset).
struct FitProblem {
  RockingCurve data;
  Grating grating;
  Beam beam;
  ConvolveOptions conv;
  bool fit_modulation = true;
  bool fit_thickness = true;
  bool fit_offset = false;
  double offset_guess = 0.0;
  ParameterBounds modulation_bounds{1e-8, 1e-3};
  ParameterBounds thickness_bounds{1e-5, 4e-4};
  ParameterBounds offset_bounds{-2e-3, 2e-3};
  double default_sigma = 0.01;  // used where the data carries no sigma
  int max_iterations = 200;
};

struct FitResult {
  Grating grating;  // best-fit modulation/thickness embedded
  double offset = 0.0;
  double modulation_se = 0.0, thickness_se = 0.0, offset_se = 0.0;
  double chi2 = 0.0, chi2_reduced = 0.0;
  int iterations = 0;
  bool converged = false;
  bool modulation_at_bound = false, thickness_at_bound = false,
       offset_at_bound = false;
  std::vector<double> chi2_trace;  // accepted objective values, start included
  std::string diagnostic;          // non-empty when the local model is degenerate
};

// Damped least squares (Levenberg-Marquardt) with central finite-difference
// Jacobian (relative step 1e-6, absolute floor 1e-12 per parameter unit) and
// box bounds by clamping. Deterministic. Standard errors come from the
// inverse local quadratic model; a near-singular model yields NaN errors and
// a degenerate-direction diagnostic instead.
FitResult fit(const FitProblem& p);

// Tilt operating point with the most even {-1, 0, +1} split at theta = 0.
struct DesignPoint {
  double tilt = 0.0;
  double eta_m1 = 0.0, eta_0 = 0.0, eta_p1 = 0.0, eta_2 = 0.0;
  double total = 0.0;      // eta_m1 + eta_0 + eta_p1
  double imbalance = 0.0;  // max - min of the three
  bool balanced = false;   // imbalance < 0.05 reached inside the range
};

// Scan-then-refine (golden section on the imbalance) to 0.05 deg; ties break
// toward the smaller tilt. The three-way total is reported, not optimized.
DesignPoint design_three_port(const Grating& g, const Beam& b, double tilt_lo,
                              double tilt_hi, const ConvolveOptions& opt = {},
                              int samples = 81);

enum class ScanVariable { thickness, wavelength };

// First-order efficiency at exact phase-matched incidence versus effective
// thickness or wavelength. first_max_* report the refined location of the
// first interior maximum (NaN when the curve has none, e.g. zero modulation).
struct PendellosungScan {
  std::vector<double> variable, eta1;
  double first_max_location = 0.0, first_max_value = 0.0;
};

PendellosungScan pendelloesung_scan(const Grating& g, double wavelength,
                                    ScanVariable var, double lo, double hi,
                                    int n, Engine engine = Engine::spectral,
                                    int steps = 2000);

}  // namespace tribeam
