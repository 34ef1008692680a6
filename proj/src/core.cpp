#include "tribeam/core.hpp"

#include <cmath>
#include <numbers>

namespace tribeam {

void Grating::validate() const {
  if (!(spacing > 0.0)) throw std::invalid_argument("grating spacing must be positive");
  if (!(thickness > 0.0)) throw std::invalid_argument("grating thickness must be positive");
  if (!(index_modulation >= 0.0)) throw std::invalid_argument("index modulation must be non-negative");
  if (!(mean_index > 0.0)) throw std::invalid_argument("mean index must be positive");
  if (!(std::abs(tilt) < std::numbers::pi / 2.0)) throw std::invalid_argument("tilt must satisfy |tilt| < pi/2");
}

void Beam::validate() const {
  if (!(wavelength > 0.0)) throw std::invalid_argument("wavelength must be positive");
  if (!(relative_spread >= 0.0 && relative_spread < 1.0))
    throw std::invalid_argument("relative spread must be in [0,1)");
  if (!(divergence >= 0.0)) throw std::invalid_argument("divergence must be non-negative");
}

void MaterialModulation::validate() const {
  if (!std::isfinite(scattering_length) || !std::isfinite(density_modulation))
    throw std::invalid_argument("material modulation parts must be finite");
  if (sld_modulation) {
    if (!std::isfinite(*sld_modulation))
      throw std::invalid_argument("sld modulation must be finite");
    const double parts = scattering_length * density_modulation;
    if (parts != 0.0) {
      const double scale = std::max(std::abs(parts), std::abs(*sld_modulation));
      if (std::abs(parts - *sld_modulation) > 1e-9 * scale)
        throw std::invalid_argument("sld modulation disagrees with b_c * density modulation");
    }
  }
}

double MaterialModulation::sld() const {
  validate();
  return sld_modulation ? *sld_modulation : scattering_length * density_modulation;
}

double bragg_angle(double wavelength, double spacing) {
  if (!(wavelength > 0.0) || !(spacing > 0.0))
    throw std::invalid_argument("bragg_angle needs positive wavelength and spacing");
  const double s = wavelength / (2.0 * spacing);
  if (s >= 1.0)
    throw std::invalid_argument("no propagating first order: wavelength >= 2*spacing");
  return std::asin(s);
}

double effective_thickness(double thickness, double tilt) {
  if (!(thickness > 0.0)) throw std::invalid_argument("thickness must be positive");
  if (!(std::abs(tilt) < std::numbers::pi / 2.0))
    throw std::invalid_argument("tilt must satisfy |tilt| < pi/2");
  return thickness / std::cos(tilt);
}

double index_modulation(double wavelength, const MaterialModulation& m) {
  if (!(wavelength > 0.0) || !std::isfinite(wavelength))
    throw std::invalid_argument("wavelength must be positive and finite");
  return wavelength * wavelength * m.sld() / (2.0 * std::numbers::pi);
}

double klein_cook(double wavelength, double effective_thickness,
                  double spacing, double mean_index) {
  if (!(wavelength > 0.0) || !(effective_thickness > 0.0) ||
      !(spacing > 0.0) || !(mean_index > 0.0))
    throw std::invalid_argument("klein_cook needs positive inputs");
  return 2.0 * std::numbers::pi * wavelength * effective_thickness /
         (mean_index * spacing * spacing);
}

}  // namespace tribeam
