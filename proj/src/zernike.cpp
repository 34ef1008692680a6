#include "tribeam/zernike.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "tribeam/kernels.hpp"

namespace tribeam {

namespace {

// Returns the common step when the grid is uniform, 0 otherwise.
double uniform_step(const std::vector<double>& g) {
  if (g.size() < 2) return 0.0;
  const double dx = (g.back() - g.front()) / double(g.size() - 1);
  if (!(dx > 0.0)) return 0.0;
  for (size_t j = 0; j < g.size(); ++j) {
    if (std::abs(g[j] - (g.front() + double(j) * dx)) > 1e-9 * dx) return 0.0;
  }
  return dx;
}

}  // namespace

double InterferometerLayout::overlap_length() const {
  return beam_width / std::tan(alpha);
}

InterferometerLayout solve_layout(double wavelength, double splitter_spacing,
                                  double separation, double beam_width,
                                  double fringe_period) {
  if (!(wavelength > 0.0) || !(splitter_spacing > 0.0) || !(separation > 0.0) ||
      !(beam_width > 0.0) || !(fringe_period > 0.0)) {
    throw std::invalid_argument("layout inputs must be positive");
  }
  if (!(wavelength < splitter_spacing)) {
    throw std::invalid_argument("wavelength must be below the splitter spacing");
  }
  if (!(fringe_period > wavelength / 2.0)) {
    throw std::invalid_argument("unreachable fringe period: must exceed half the wavelength");
  }
  if (!(separation > beam_width)) {
    throw std::invalid_argument("beam separation must exceed the beam width");
  }

  InterferometerLayout lay;
  lay.wavelength = wavelength;
  lay.splitter_spacing = splitter_spacing;
  lay.beam_width = beam_width;
  lay.separation = separation;
  lay.fringe_period = fringe_period;
  lay.theta1 = std::asin(wavelength / (2.0 * splitter_spacing));
  lay.alpha = std::asin(wavelength / (2.0 * fringe_period));
  lay.L1 = separation / std::tan(lay.theta1);
  lay.L2 = separation / std::tan(lay.alpha);
  return lay;
}

void ThreeBeamField::validate() const {
  const double total = std::norm(a_minus) + std::norm(a_zero) + std::norm(a_plus);
  if (std::abs(total - 1.0) > 1e-9) {
    throw std::invalid_argument("beam amplitudes must satisfy sum |a|^2 = 1");
  }
  if (!(wavelength > 0.0)) throw std::invalid_argument("wavelength must be positive");
  if (!(alpha >= 0.0) || !(alpha < std::numbers::pi / 2.0)) {
    throw std::invalid_argument("half-angle must lie in [0, pi/2)");
  }
}

IntensityMap interference(const ThreeBeamField& f, const std::vector<double>& x_grid,
                          const std::vector<double>& z_grid) {
  f.validate();
  if (x_grid.empty() || z_grid.empty()) {
    throw std::invalid_argument("interference grids must be non-empty");
  }

  const double k = 2.0 * std::numbers::pi / f.wavelength;
  const double b = k * std::sin(f.alpha);
  const double half = std::sin(f.alpha / 2.0);
  const double axial_rate = k * 2.0 * half * half;  // k (1 - cos alpha), cancellation-free

  IntensityMap map;
  map.x = x_grid;
  map.z = z_grid;
  map.values.resize(x_grid.size() * z_grid.size());

  const double dx = uniform_step(x_grid);
  const double a0m = std::abs(f.a_zero);
  const double a0p = std::arg(f.a_zero);

  for (size_t iz = 0; iz < z_grid.size(); ++iz) {
    const double ph = axial_rate * z_grid[iz] + f.phase + a0p;
    const std::complex<double> c0 = std::polar(a0m, ph);
    double* row = map.values.data() + iz * x_grid.size();
    if (dx > 0.0) {
      kernels::fringe_row(f.a_minus, c0, f.a_plus, b, x_grid.front(), dx, row,
                          int(x_grid.size()));
    } else {
      for (size_t ix = 0; ix < x_grid.size(); ++ix) {
        kernels::fringe_row(f.a_minus, c0, f.a_plus, b, x_grid[ix], 1.0, row + ix, 1);
      }
    }
  }
  return map;
}

double axial_shift(double dphi, double wavelength, double alpha) {
  if (!(wavelength > 0.0)) throw std::invalid_argument("wavelength must be positive");
  if (!(alpha > 0.0) || !(alpha < std::numbers::pi / 2.0)) {
    throw std::invalid_argument("collinear geometry: axial response needs 0 < alpha < pi/2");
  }
  const double k = 2.0 * std::numbers::pi / wavelength;
  const double half = std::sin(alpha / 2.0);
  return dphi / (k * 2.0 * half * half);
}

std::vector<double> analyzer_scan(const IntensityMap& map, double z_plane,
                                  double period, double duty,
                                  const std::vector<double>& offsets) {
  if (!(period > 0.0)) throw std::invalid_argument("analyzer period must be positive");
  if (!(duty > 0.0) || !(duty < 1.0)) {
    throw std::invalid_argument("analyzer open fraction must lie in (0, 1)");
  }
  if (map.x.size() < 2 || map.z.empty()) {
    throw std::invalid_argument("analyzer scan needs a populated intensity map");
  }
  const double dx = uniform_step(map.x);
  if (dx <= 0.0) throw std::invalid_argument("analyzer scan needs a uniform x grid");
  if (period < 2.0 * dx) {
    throw std::invalid_argument("analyzer period under-resolved: below twice the x grid step");
  }
  double zlo = map.z.front(), zhi = map.z.front();
  for (double z : map.z) {
    zlo = std::min(zlo, z);
    zhi = std::max(zhi, z);
  }
  const double zslack = 1e-9 * std::max(1.0, std::abs(zhi - zlo));
  if (z_plane < zlo - zslack || z_plane > zhi + zslack) {
    throw std::invalid_argument("analyzer plane lies outside the map's z grid");
  }
  size_t iz = 0;
  for (size_t j = 1; j < map.z.size(); ++j) {
    if (std::abs(map.z[j] - z_plane) < std::abs(map.z[iz] - z_plane)) iz = j;
  }

  const double* row = map.values.data() + iz * map.x.size();
  std::vector<double> signal(offsets.size(), 0.0);
  for (size_t io = 0; io < offsets.size(); ++io) {
    double acc = 0.0;
    for (size_t ix = 0; ix < map.x.size(); ++ix) {
      const double t = (map.x[ix] - offsets[io]) / period;
      if (t - std::floor(t) < duty) acc += row[ix];
    }
    signal[io] = acc * dx;
  }
  return signal;
}

}  // namespace tribeam
