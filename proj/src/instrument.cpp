#include "tribeam/instrument.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "tribeam/quadrature.hpp"

namespace tribeam {

namespace {

// Reusable exact propagator; keeps the eigensolver workspace alive across the
// quadrature loop.
struct TridiagPropagator {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  Eigen::VectorXd diag, sub, re, im;

  void etas(const CoupledWaveSystem& sys, double* eta) {
    const int n = sys.order_count();
    diag = Eigen::Map<const Eigen::VectorXd>(sys.dephasing.data(), n);
    sub = Eigen::VectorXd::Constant(n - 1, sys.coupling);
    es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    const Eigen::MatrixXd& V = es.eigenvectors();
    const Eigen::VectorXd& w = es.eigenvalues();
    re.setZero(n);
    im.setZero(n);
    for (int j = 0; j < n; ++j) {
      const double a0 = V(sys.max_order, j);
      const double ph = w[j] * sys.depth;
      re += (a0 * std::cos(ph)) * V.col(j);
      im += (a0 * std::sin(ph)) * V.col(j);
    }
    for (int i = 0; i < n; ++i) eta[i] = re[i] * re[i] + im[i] * im[i];
  }
};

KernelNodes make_kernel(KernelShape shape, double fwhm, int n) {
  return shape == KernelShape::gaussian ? gaussian_kernel_nodes(fwhm, n)
                                        : triangular_kernel_nodes(fwhm, n);
}

std::vector<double> convolve_pass(const Grating& g, const Beam& b, double theta,
                                  int max_order, const ConvolveOptions& opt,
                                  int nodes) {
  const KernelNodes div = make_kernel(opt.kernel, b.divergence, nodes);
  const KernelNodes lam =
      make_kernel(opt.kernel, b.relative_spread * b.wavelength, nodes);

  const int n = 2 * max_order + 1;
  std::vector<double> acc(n, 0.0), eta(n);
  TridiagPropagator prop;
  Grating gp = g;
  for (size_t i = 0; i < div.offset.size(); ++i) {
    const double th = theta + div.offset[i];
    for (size_t j = 0; j < lam.offset.size(); ++j) {
      const double lp = b.wavelength + lam.offset[j];
      if (!(lp > 0.0))
        throw std::invalid_argument(
            "wavelength spread too wide: quadrature node at non-positive wavelength");
      const double scale = lp / b.wavelength;
      gp.index_modulation = opt.quadratic_dispersion
                                ? g.index_modulation * scale * scale
                                : g.index_modulation;
      const CoupledWaveSystem sys = build_system(gp, lp, th, max_order);
      if (opt.engine == Engine::spectral) {
        prop.etas(sys, eta.data());
      } else {
        const EfficiencySet e = efficiencies(propagate(sys, opt.steps));
        for (int q = 0; q < n; ++q) eta[q] = e.eta[q];
      }
      const double w = div.weight[i] * lam.weight[j];
      for (int q = 0; q < n; ++q) acc[q] += w * eta[q];
    }
  }
  return acc;
}

}  // namespace

EfficiencySet convolved_efficiencies(const Grating& g, const Beam& b,
                                     double theta, int max_order,
                                     const ConvolveOptions& opt) {
  g.validate();
  b.validate();
  if (max_order < 2) throw std::invalid_argument("max_order must be >= 2");
  if (opt.nodes < 1) throw std::invalid_argument("quadrature needs >= 1 node");

  std::vector<double> base = convolve_pass(g, b, theta, max_order, opt, opt.nodes);
  EfficiencySet out;
  out.max_order = max_order;
  if (opt.check && (b.divergence > 0.0 || b.relative_spread > 0.0)) {
    std::vector<double> fine =
        convolve_pass(g, b, theta, max_order, opt, 2 * opt.nodes);
    double diff = 0.0;
    for (size_t q = 0; q < base.size(); ++q)
      diff = std::max(diff, std::abs(base[q] - fine[q]));
    if (diff > 1e-4)
      throw accuracy_error("beam-average quadrature not converged: doubling nodes moved an order by " +
                           std::to_string(diff));
    out.eta = std::move(fine);
  } else {
    out.eta = std::move(base);
  }
  return out;
}

RockingCurve rocking_scan(const Grating& g, const Beam& b, double theta_min,
                          double theta_max, int n, const ConvolveOptions& opt) {
  if (n < 2) throw std::invalid_argument("rocking_scan needs n >= 2");
  if (!(theta_min < theta_max))
    throw std::invalid_argument("rocking_scan needs theta_min < theta_max");
  RockingCurve rc;
  rc.theta.resize(n);
  rc.eta.resize(n);
  for (int i = 0; i < n; ++i) {
    const double t =
        theta_min + (theta_max - theta_min) * i / static_cast<double>(n - 1);
    rc.theta[i] = t;
    const EfficiencySet e = convolved_efficiencies(g, b, t, opt.max_order, opt);
    for (int m = -2; m <= 2; ++m) rc.eta[i][RockingCurve::column_of(m)] = e.at(m);
  }
  return rc;
}

namespace {

bool overlaps(const FrameRegion& a, const FrameRegion& b) {
  return a.x0 <= b.x1 && b.x0 <= a.x1 && a.y0 <= b.y1 && b.y0 <= a.y1;
}

void check_region(const DetectorFrame& f, const FrameRegion& r, const char* what) {
  if (r.x0 > r.x1 || r.y0 > r.y1)
    throw std::invalid_argument(std::string(what) + " region is empty");
  if (r.x0 < 0 || r.y0 < 0 || r.x1 >= f.cols || r.y1 >= f.rows)
    throw std::invalid_argument(std::string(what) + " region exceeds the frame");
}

long long region_sum(const DetectorFrame& f, const FrameRegion& r) {
  long long s = 0;
  for (int y = r.y0; y <= r.y1; ++y)
    for (int x = r.x0; x <= r.x1; ++x) s += f.at(x, y);
  return s;
}

long long region_area(const FrameRegion& r) {
  return static_cast<long long>(r.x1 - r.x0 + 1) * (r.y1 - r.y0 + 1);
}

}  // namespace

std::map<int, double> reduce_frame(const DetectorFrame& f) {
  if (f.rows <= 0 || f.cols <= 0 || f.counts.size() != size_t(f.rows) * f.cols)
    throw std::invalid_argument("malformed detector frame");
  if (f.spots.empty()) throw std::invalid_argument("no spot regions given");
  check_region(f, f.background, "background");
  for (size_t i = 0; i < f.spots.size(); ++i) {
    check_region(f, f.spots[i].second, "spot");
    for (size_t j = i + 1; j < f.spots.size(); ++j)
      if (f.spots[i].first == f.spots[j].first)
        throw std::invalid_argument("duplicate order label in spot regions");
    for (size_t j = i + 1; j < f.spots.size(); ++j)
      if (overlaps(f.spots[i].second, f.spots[j].second))
        throw std::invalid_argument("spot regions overlap");
    if (overlaps(f.spots[i].second, f.background))
      throw std::invalid_argument("spot region overlaps the background region");
  }

  // Work with numerators over the common denominator N = background area:
  //   I_m * N = sum(spot m) * N - sum(background) * area_m.
  const long long bg_sum = region_sum(f, f.background);
  const long long bg_area = region_area(f.background);
  std::map<int, long long> numer;
  long long total = 0;
  for (const auto& [order, region] : f.spots) {
    long long v =
        region_sum(f, region) * bg_area - bg_sum * region_area(region);
    if (v < 0) {
      std::fprintf(stderr,
                   "warning: order %d net counts below background, clamped to 0\n",
                   order);
      v = 0;
    }
    numer[order] = v;
    total += v;
  }
  if (total <= 0) throw no_signal_error("frame has no net counts above background");

  std::map<int, double> eta;
  for (const auto& [order, v] : numer)
    eta[order] = static_cast<double>(v) / static_cast<double>(total);
  return eta;
}

}  // namespace tribeam
