#include "tribeam/analysis.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "tribeam/core.hpp"

namespace tribeam {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

struct FitContext {
  const FitProblem& p;
  std::vector<double> sigma;                  // resolved per row
  std::vector<const ParameterBounds*> bounds;  // per free parameter
  int nfree = 0;
  int rows = 0;

  explicit FitContext(const FitProblem& prob) : p(prob) {
    rows = static_cast<int>(p.data.theta.size());
    sigma.resize(rows);
    for (int j = 0; j < rows; ++j) {
      const double s =
          j < static_cast<int>(p.data.sigma.size()) ? p.data.sigma[j] : 0.0;
      sigma[j] = s > 0.0 ? s : p.default_sigma;
    }
    if (p.fit_modulation) bounds.push_back(&p.modulation_bounds);
    if (p.fit_thickness) bounds.push_back(&p.thickness_bounds);
    if (p.fit_offset) bounds.push_back(&p.offset_bounds);
    nfree = static_cast<int>(bounds.size());
  }

  std::vector<double> initial() const {
    std::vector<double> par;
    if (p.fit_modulation) par.push_back(p.grating.index_modulation);
    if (p.fit_thickness) par.push_back(p.grating.thickness);
    if (p.fit_offset) par.push_back(p.offset_guess);
    return par;
  }

  void unpack(const std::vector<double>& par, Grating& g, double& offset) const {
    g = p.grating;
    offset = p.offset_guess;
    int k = 0;
    if (p.fit_modulation) g.index_modulation = par[k++];
    if (p.fit_thickness) g.thickness = par[k++];
    if (p.fit_offset) offset = par[k++];
  }

  std::vector<double> clampv(std::vector<double> par) const {
    for (int k = 0; k < nfree; ++k)
      par[k] = std::clamp(par[k], bounds[k]->lo, bounds[k]->hi);
    return par;
  }

  std::vector<double> residuals(const std::vector<double>& par) const {
    Grating g;
    double offset;
    unpack(par, g, offset);
    ConvolveOptions opt = p.conv;
    opt.check = false;  // validated separately at the start and end points
    std::vector<double> r;
    r.reserve(size_t(rows) * 5);
    for (int j = 0; j < rows; ++j) {
      const EfficiencySet e = convolved_efficiencies(
          g, p.beam, p.data.theta[j] - offset, opt.max_order, opt);
      for (int m = -2; m <= 2; ++m)
        r.push_back((e.at(m) - p.data.eta[j][RockingCurve::column_of(m)]) /
                    sigma[j]);
    }
    return r;
  }

  void validate_quadrature(const std::vector<double>& par) const {
    if (!p.conv.check) return;
    Grating g;
    double offset;
    unpack(par, g, offset);
    const double mid = p.data.theta[rows / 2] - offset;
    convolved_efficiencies(g, p.beam, mid, p.conv.max_order, p.conv);
  }
};

double chi2_of(const std::vector<double>& r) {
  double s = 0.0;
  for (double v : r) s += v * v;
  return s;
}

}  // namespace

FitResult fit(const FitProblem& p) {
  p.grating.validate();
  p.beam.validate();
  FitContext ctx(p);
  if (ctx.nfree == 0) throw std::invalid_argument("fit has no free parameters");
  if (ctx.rows < 3 * ctx.nfree)
    throw std::invalid_argument("fit needs at least 3 samples per free parameter");

  std::vector<double> par = ctx.initial();
  for (int k = 0; k < ctx.nfree; ++k) {
    const auto& b = *ctx.bounds[k];
    if (!(b.lo < b.hi) || !std::isfinite(b.lo) || !std::isfinite(b.hi))
      throw std::invalid_argument("fit bounds must be finite and ordered");
    if (par[k] < b.lo || par[k] > b.hi)
      throw std::invalid_argument("initial guess outside its bounds");
  }

  ctx.validate_quadrature(par);

  std::vector<double> r = ctx.residuals(par);
  double chi2 = chi2_of(r);
  FitResult out;
  out.chi2_trace.push_back(chi2);

  const int nres = static_cast<int>(r.size());
  const int k = ctx.nfree;
  Eigen::MatrixXd J(nres, k);
  auto jacobian = [&](const std::vector<double>& at) {
    for (int c = 0; c < k; ++c) {
      const double h = std::max(1e-6 * std::abs(at[c]), 1e-12);
      std::vector<double> pp = at, pm = at;
      pp[c] += h;
      pm[c] -= h;
      pp = ctx.clampv(pp);
      pm = ctx.clampv(pm);
      const double denom = pp[c] - pm[c];
      const std::vector<double> rp = ctx.residuals(pp);
      const std::vector<double> rm = ctx.residuals(pm);
      for (int i = 0; i < nres; ++i) J(i, c) = (rp[i] - rm[i]) / denom;
    }
  };

  double lm = 1e-3;
  bool converged = false;
  int iterations = 0;
  std::string diagnostic;

  for (int outer = 0; outer < p.max_iterations; ++outer) {
    jacobian(par);
    const Eigen::MatrixXd JtJ = J.transpose() * J;
    Eigen::VectorXd rv = Eigen::Map<const Eigen::VectorXd>(r.data(), nres);
    const Eigen::VectorXd g = J.transpose() * rv;

    bool accepted = false;
    std::vector<double> trial;
    std::vector<double> rt;
    double c2t = 0.0;
    while (lm < 1e14) {
      Eigen::MatrixXd A = JtJ;
      for (int c = 0; c < k; ++c)
        A(c, c) += lm * std::max(JtJ(c, c), 1e-30);
      const Eigen::VectorXd delta = A.ldlt().solve(-g);
      trial = par;
      for (int c = 0; c < k; ++c) trial[c] += delta[c];
      trial = ctx.clampv(trial);
      rt = ctx.residuals(trial);
      c2t = chi2_of(rt);
      if (c2t < chi2) {
        accepted = true;
        break;
      }
      lm *= 4.0;
    }
    if (!accepted) {
      // No descent direction at numerical resolution: local minimum (possibly
      // against a bound).
      converged = true;
      break;
    }
    ++iterations;
    const double rel = (chi2 - c2t) / std::max(chi2, 1e-300);
    par = trial;
    r = rt;
    chi2 = c2t;
    out.chi2_trace.push_back(chi2);
    lm = std::max(lm / 3.0, 1e-12);
    if (rel < 1e-8) {
      converged = true;
      break;
    }
  }

  ctx.validate_quadrature(par);

  // Local quadratic model at the solution.
  jacobian(par);
  const Eigen::MatrixXd JtJ = J.transpose() * J;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(JtJ);
  const double emax = es.eigenvalues().maxCoeff();
  const double emin = es.eigenvalues().minCoeff();
  std::vector<double> se(k, kNan);
  if (emin <= 0.0 || emin < 1e-14 * emax) {
    std::ostringstream os;
    os << "degenerate parameter direction (";
    for (int c = 0; c < k; ++c)
      os << (c ? ", " : "") << es.eigenvectors()(c, 0);
    os << "); standard errors not reported";
    diagnostic = os.str();
  } else {
    const Eigen::MatrixXd cov = JtJ.inverse();
    for (int c = 0; c < k; ++c) se[c] = std::sqrt(cov(c, c));
  }

  ctx.unpack(par, out.grating, out.offset);
  out.chi2 = chi2;
  out.chi2_reduced = nres > k ? chi2 / (nres - k) : kNan;
  out.iterations = iterations;
  out.converged = converged;
  out.diagnostic = diagnostic;
  int c = 0;
  auto near_bound = [&](double v, const ParameterBounds& b) {
    const double span = b.hi - b.lo;
    return std::min(v - b.lo, b.hi - v) <= 1e-9 * span;
  };
  if (p.fit_modulation) {
    out.modulation_se = se[c];
    out.modulation_at_bound = near_bound(par[c], p.modulation_bounds);
    ++c;
  } else {
    out.modulation_se = kNan;
  }
  if (p.fit_thickness) {
    out.thickness_se = se[c];
    out.thickness_at_bound = near_bound(par[c], p.thickness_bounds);
    ++c;
  } else {
    out.thickness_se = kNan;
  }
  if (p.fit_offset) {
    out.offset_se = se[c];
    out.offset_at_bound = near_bound(par[c], p.offset_bounds);
    ++c;
  } else {
    out.offset_se = kNan;
  }
  return out;
}

namespace {

struct TiltObjective {
  const Grating& g;
  const Beam& b;
  ConvolveOptions opt;

  double imbalance(double tilt, EfficiencySet* out = nullptr) const {
    Grating gt = g;
    gt.tilt = tilt;
    const EfficiencySet e = convolved_efficiencies(gt, b, 0.0, opt.max_order, opt);
    if (out) *out = e;
    const double a = e.at(-1), c = e.at(0), d = e.at(+1);
    return std::max({a, c, d}) - std::min({a, c, d});
  }
};

}  // namespace

DesignPoint design_three_port(const Grating& g, const Beam& b, double tilt_lo,
                              double tilt_hi, const ConvolveOptions& opt,
                              int samples) {
  g.validate();
  b.validate();
  if (tilt_lo > tilt_hi) std::swap(tilt_lo, tilt_hi);
  if (samples < 3) throw std::invalid_argument("design scan needs >= 3 samples");
  if (!(std::abs(tilt_lo) < std::numbers::pi / 2.0 &&
        std::abs(tilt_hi) < std::numbers::pi / 2.0))
    throw std::invalid_argument("tilt range must stay inside (-pi/2, pi/2)");

  TiltObjective obj{g, b, opt};
  obj.opt.check = false;
  if (opt.check) {
    Grating mid = g;
    mid.tilt = 0.5 * (tilt_lo + tilt_hi);
    convolved_efficiencies(mid, b, 0.0, opt.max_order, opt);  // validates nodes
  }

  std::vector<double> zs(samples);
  double best_z = tilt_lo, best_e = std::numeric_limits<double>::infinity();
  int best_i = 0;
  for (int i = 0; i < samples; ++i) {
    zs[i] = tilt_lo + (tilt_hi - tilt_lo) * i / double(samples - 1);
    const double e = obj.imbalance(zs[i]);
    if (e < best_e) {  // strict: ties keep the smaller tilt
      best_e = e;
      best_z = zs[i];
      best_i = i;
    }
  }

  double a = zs[std::max(0, best_i - 1)];
  double c = zs[std::min(samples - 1, best_i + 1)];
  const double tol = 0.05 * std::numbers::pi / 180.0;
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = c - gr * (c - a), x2 = a + gr * (c - a);
  double f1 = obj.imbalance(x1), f2 = obj.imbalance(x2);
  auto consider = [&](double z, double e) {
    if (e < best_e || (e == best_e && z < best_z)) {
      best_e = e;
      best_z = z;
    }
  };
  consider(x1, f1);
  consider(x2, f2);
  while (c - a > tol) {
    if (f1 <= f2) {
      c = x2;
      x2 = x1;
      f2 = f1;
      x1 = c - gr * (c - a);
      f1 = obj.imbalance(x1);
      consider(x1, f1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (c - a);
      f2 = obj.imbalance(x2);
      consider(x2, f2);
    }
  }

  EfficiencySet e;
  obj.imbalance(best_z, &e);
  DesignPoint dp;
  dp.tilt = best_z;
  dp.eta_m1 = e.at(-1);
  dp.eta_0 = e.at(0);
  dp.eta_p1 = e.at(+1);
  dp.eta_2 = 0.5 * (e.at(-2) + e.at(+2));
  dp.total = dp.eta_m1 + dp.eta_0 + dp.eta_p1;
  dp.imbalance = best_e;
  dp.balanced = best_e < 0.05;
  return dp;
}

namespace {

double bragg_eta1(const Grating& g, double wavelength, ScanVariable var,
                  double x, Engine engine, int steps) {
  Grating gp = g;
  double lam = wavelength;
  if (var == ScanVariable::wavelength) lam = x;
  const double tb = bragg_angle(lam, gp.spacing);
  CoupledWaveSystem sys = build_system(gp, lam, tb, 4);
  if (var == ScanVariable::thickness) sys.depth = x;  // scan is in d_eff
  const OrderField f = engine == Engine::spectral ? propagate_spectral(sys)
                                                  : propagate(sys, steps);
  return efficiencies(f).at(+1);
}

}  // namespace

PendellosungScan pendelloesung_scan(const Grating& g, double wavelength,
                                    ScanVariable var, double lo, double hi,
                                    int n, Engine engine, int steps) {
  g.validate();
  if (n < 8) throw std::invalid_argument("pendelloesung_scan needs n >= 8");
  if (!(lo > 0.0) || !(lo < hi))
    throw std::invalid_argument("scan range must be positive and ordered");

  PendellosungScan out;
  out.variable.resize(n);
  out.eta1.resize(n);
  for (int i = 0; i < n; ++i) {
    out.variable[i] = lo + (hi - lo) * i / double(n - 1);
    out.eta1[i] = bragg_eta1(g, wavelength, var, out.variable[i], engine, steps);
  }

  out.first_max_location = kNan;
  out.first_max_value = kNan;
  for (int i = 1; i + 1 < n; ++i) {
    if (out.eta1[i] > 1e-9 && out.eta1[i] > out.eta1[i - 1] &&
        out.eta1[i] >= out.eta1[i + 1]) {
      double a = out.variable[i - 1], c = out.variable[i + 1];
      const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
      double x1 = c - gr * (c - a), x2 = a + gr * (c - a);
      double f1 = bragg_eta1(g, wavelength, var, x1, engine, steps);
      double f2 = bragg_eta1(g, wavelength, var, x2, engine, steps);
      const double tol = (hi - lo) * 1e-7;
      while (c - a > tol) {
        if (f1 >= f2) {
          c = x2;
          x2 = x1;
          f2 = f1;
          x1 = c - gr * (c - a);
          f1 = bragg_eta1(g, wavelength, var, x1, engine, steps);
        } else {
          a = x1;
          x1 = x2;
          f1 = f2;
          x2 = a + gr * (c - a);
          f2 = bragg_eta1(g, wavelength, var, x2, engine, steps);
        }
      }
      out.first_max_location = 0.5 * (a + c);
      out.first_max_value =
          bragg_eta1(g, wavelength, var, out.first_max_location, engine, steps);
      break;
    }
  }
  return out;
}

}  // namespace tribeam
