#pragma once

#include <optional>
#include <stdexcept>

namespace tribeam {

// A numerical result failed an internal consistency check (step doubling,
// quadrature node doubling, norm drift). The CLI maps this to exit code 3.
class accuracy_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed config/data files or CLI usage problems. Exit code 2.
class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Frame reduction found no net counts above background.
class no_signal_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One holographic sinusoidal phase grating. SI units throughout: lengths in
// meters, angles in radians. tilt is the rotation about the axis parallel to
// the grating vector; it stretches the traversed path to thickness/cos(tilt).
struct Grating {
  double spacing = 1e-6;
  double thickness = 91e-6;
  double index_modulation = 2.55e-6;
  double mean_index = 1.0;
  double tilt = 0.0;

  void validate() const;
};

// Incident beam statistics. relative_spread is the FWHM of dlambda/lambda,
// divergence the angular FWHM.
struct Beam {
  double wavelength = 1.7e-9;
  double relative_spread = 0.10;
  double divergence = 1.0e-3;

  void validate() const;
};

// Material contrast behind the index modulation. Either the parts
// (scattering_length, density_modulation) or their product may be given;
// when both are present they must agree.
struct MaterialModulation {
  double scattering_length = 0.0;   // b_c
  double density_modulation = 0.0;  // number-density modulation amplitude
  std::optional<double> sld_modulation;  // b_c * density_modulation

  double sld() const;  // validated product, 1/area
  void validate() const;
};

}  // namespace tribeam
