#pragma once

#include <array>
#include <map>
#include <vector>

#include "tribeam/cwt.hpp"
#include "tribeam/types.hpp"

namespace tribeam {

enum class Engine { spectral, rk4 };
enum class KernelShape { gaussian, triangular };

// Knobs shared by every beam-averaged forward evaluation.
struct ConvolveOptions {
  KernelShape kernel = KernelShape::gaussian;
  int nodes = 7;          // per kernel dimension
  bool check = true;      // node-doubling validation (change > 1e-4 fails)
  Engine engine = Engine::spectral;
  int steps = 2000;       // rk4 engine floor
  int max_order = 4;
  // The modulation is quadratic in wavelength for a fixed material contrast,
  // so the spectral average rescales it per node by (lambda'/lambda)^2.
  bool quadratic_dispersion = true;
};

// Per-order efficiencies versus incidence angle. eta columns are the five
// observable orders m = -2..+2; sigma is optional per-row uncertainty.
struct RockingCurve {
  std::vector<double> theta;
  std::vector<std::array<double, 5>> eta;
  std::vector<double> sigma;

  static constexpr int column_of(int m) { return m + 2; }
};

// Axis-aligned inclusive pixel rectangle, x = column, y = row.
struct FrameRegion {
  int x0 = 0, y0 = 0, x1 = 0, y1 = 0;
};

struct DetectorFrame {
  int rows = 0, cols = 0;
  double pixel_pitch = 0.0;               // m
  std::vector<long long> counts;          // row-major
  std::vector<std::pair<int, FrameRegion>> spots;  // order label -> region
  FrameRegion background;

  long long at(int x, int y) const { return counts[size_t(y) * cols + x]; }
};

// Beam-averaged efficiencies: the plane-wave solution integrated over the
// angular divergence and wavelength spread of the beam (tensor-product
// quadrature, normalized kernels). Zero-width kernels reproduce the plane-
// wave result identically.
EfficiencySet convolved_efficiencies(const Grating& g, const Beam& b,
                                     double theta, int max_order = 4,
                                     const ConvolveOptions& opt = {});

// Uniform theta grid of convolved efficiencies, ascending.
RockingCurve rocking_scan(const Grating& g, const Beam& b, double theta_min,
                          double theta_max, int n,
                          const ConvolveOptions& opt = {});

// Background-corrected per-order efficiencies from a detector frame:
//   I_m = sum(spot m) - mean(background) * area(spot m),
// negatives clamped to zero (with a warning on stderr), eta_m = I_m / sum I.
// All arithmetic is exact in int64 (common background denominator), so adding
// a constant to every pixel leaves the result bit-identical.
std::map<int, double> reduce_frame(const DetectorFrame& f);

}  // namespace tribeam
