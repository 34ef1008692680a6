#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tribeam/analysis.hpp"
#include "tribeam/config.hpp"
#include "tribeam/io.hpp"
#include "tribeam/kernels.hpp"
#include "tribeam/zernike.hpp"

namespace {

using tribeam::cfg::Config;

constexpr double kPi = 3.14159265358979323846;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

// Options every subcommand shares.
struct Common {
  std::string config_path;
  std::vector<std::string> overrides;
  bool emit = false;
};

void attach_common(CLI::App* cmd, Common& c) {
  cmd->add_option("-c,--config", c.config_path, "Config file (flat key = value)")
      ->check(CLI::ExistingFile);
  cmd->add_option("-o,--set", c.overrides,
                  "Override one key, e.g. -o rock.points=81 (repeatable)");
  cmd->add_flag("--emit-config", c.emit,
                "Print the fully resolved configuration and exit");
}

Config resolve(const Common& c) {
  Config cfg = c.config_path.empty() ? Config::defaults() : Config::load(c.config_path);
  for (const auto& ov : c.overrides) {
    const size_t eq = ov.find('=');
    if (eq == std::string::npos) {
      throw tribeam::config_error("override '" + ov + "' must look like key=value");
    }
    cfg.set(ov.substr(0, eq), ov.substr(eq + 1));
  }
  const std::string simd = cfg.word("solver.simd", {"auto", "scalar", "avx2"});
  if (simd == "scalar") tribeam::kernels::set_backend(tribeam::kernels::Backend::scalar);
  if (simd == "avx2") tribeam::kernels::set_backend(tribeam::kernels::Backend::avx2);
  return cfg;
}

// Deterministic standard normals: explicit Box-Muller over mt19937_64 so the
// stream is identical on every platform for a given seed.
class Gauss {
 public:
  explicit Gauss(unsigned long long seed) : eng_(seed) {}

  double operator()() {
    if (have_) {
      have_ = false;
      return spare_;
    }
    const double u1 = double((eng_() >> 11) + 1) * 0x1p-53;
    const double u2 = double(eng_() >> 11) * 0x1p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * kPi * u2);
    have_ = true;
    return r * std::cos(2.0 * kPi * u2);
  }

 private:
  std::mt19937_64 eng_;
  bool have_ = false;
  double spare_ = 0.0;
};

int cmd_rock(const Common& c) {
  const Config cfg = resolve(c);
  if (c.emit) {
    std::fputs(cfg.emit().c_str(), stdout);
    return 0;
  }
  const auto g = tribeam::cfg::make_grating(cfg);
  const auto b = tribeam::cfg::make_beam(cfg);
  const auto opt = tribeam::cfg::make_convolve_options(cfg);
  const double lo = cfg.angle_mrad("rock.theta_min_mrad");
  const double hi = cfg.angle_mrad("rock.theta_max_mrad");
  const int n = int(cfg.integer("rock.points"));

  auto curve = tribeam::rocking_scan(g, b, lo, hi, n, opt);

  const double noise = cfg.number("rock.noise_sigma");
  if (noise < 0.0) throw tribeam::config_error("rock.noise_sigma must be >= 0");
  curve.sigma.assign(curve.theta.size(), noise);
  if (noise > 0.0) {
    Gauss gauss(static_cast<unsigned long long>(cfg.integer("rng.seed")));
    for (auto& row : curve.eta) {
      for (double& e : row) e += noise * gauss();
    }
  }

  const std::string out = cfg.raw("rock.output");
  tribeam::io::write_rocking_csv(out, curve);

  size_t center = 0;
  for (size_t i = 1; i < curve.theta.size(); ++i) {
    if (std::abs(curve.theta[i]) < std::abs(curve.theta[center])) center = i;
  }
  std::printf("rocking scan: %d points, theta in [%s, %s] mrad\n", n,
              num(lo * 1e3).c_str(), num(hi * 1e3).c_str());
  std::printf("split at theta = %s mrad: eta(-1) = %s, eta(0) = %s, eta(+1) = %s\n",
              num(curve.theta[center] * 1e3).c_str(),
              num(curve.eta[center][1]).c_str(), num(curve.eta[center][2]).c_str(),
              num(curve.eta[center][3]).c_str());
  std::printf("wrote %s\n", out.c_str());
  return 0;
}

int cmd_fit(const Common& c, const std::string& data_path, bool allow_nonconverged) {
  const Config cfg = resolve(c);
  if (c.emit) {
    std::fputs(cfg.emit().c_str(), stdout);
    return 0;
  }
  tribeam::FitProblem p;
  p.data = tribeam::io::read_rocking_csv(data_path);
  p.grating = tribeam::cfg::make_grating(cfg);
  p.beam = tribeam::cfg::make_beam(cfg);
  p.conv = tribeam::cfg::make_convolve_options(cfg);
  p.fit_modulation = cfg.flag("fit.modulation");
  p.fit_thickness = cfg.flag("fit.thickness");
  p.fit_offset = cfg.flag("fit.offset");
  p.offset_guess = cfg.angle_mrad("fit.offset_guess_mrad");
  p.modulation_bounds = {cfg.number("fit.modulation_lo"), cfg.number("fit.modulation_hi")};
  p.thickness_bounds = {cfg.length("fit.thickness_lo"), cfg.length("fit.thickness_hi")};
  p.offset_bounds = {cfg.angle_mrad("fit.offset_lo_mrad"), cfg.angle_mrad("fit.offset_hi_mrad")};
  p.default_sigma = cfg.number("fit.default_sigma");
  p.max_iterations = int(cfg.integer("fit.max_iterations"));

  bool missing_sigma = p.data.sigma.empty();
  for (double s : p.data.sigma) missing_sigma = missing_sigma || s <= 0.0;
  if (missing_sigma) {
    std::fprintf(stderr, "warning: missing or non-positive sigma; weighting with default sigma = %s\n",
                 num(p.default_sigma).c_str());
  }

  const auto r = tribeam::fit(p);

  const std::string report = cfg.raw("fit.report_csv");
  {
    std::FILE* f = std::fopen(report.c_str(), "w");
    if (!f) throw tribeam::config_error("cannot open '" + report + "' for writing");
    std::fprintf(f, "parameter,value,std_error,at_bound\n");
    std::fprintf(f, "modulation,%s,%s,%d\n", num(r.grating.index_modulation).c_str(),
                 num(r.modulation_se).c_str(), r.modulation_at_bound ? 1 : 0);
    std::fprintf(f, "thickness_m,%s,%s,%d\n", num(r.grating.thickness).c_str(),
                 num(r.thickness_se).c_str(), r.thickness_at_bound ? 1 : 0);
    std::fprintf(f, "offset_rad,%s,%s,%d\n", num(r.offset).c_str(),
                 num(r.offset_se).c_str(), r.offset_at_bound ? 1 : 0);
    std::fprintf(f, "chi2,%s,,\n", num(r.chi2).c_str());
    std::fprintf(f, "chi2_reduced,%s,,\n", num(r.chi2_reduced).c_str());
    std::fprintf(f, "iterations,%d,,\n", r.iterations);
    std::fprintf(f, "converged,%d,,\n", r.converged ? 1 : 0);
    std::fclose(f);
  }

  std::printf("fit: %s after %d iterations, chi2 = %s, chi2/dof = %s\n",
              r.converged ? "converged" : "NOT converged", r.iterations,
              num(r.chi2).c_str(), num(r.chi2_reduced).c_str());
  auto param_line = [](const char* name, double v, double se, const char* unit,
                       bool fitted, bool at_bound) {
    if (fitted) {
      std::printf("  %-11s %s%s +- %s%s%s\n", name, num(v).c_str(), unit,
                  num(se).c_str(), unit, at_bound ? "  (at bound)" : "");
    } else {
      std::printf("  %-11s %s%s  (fixed)\n", name, num(v).c_str(), unit);
    }
  };
  param_line("modulation", r.grating.index_modulation, r.modulation_se, "",
             p.fit_modulation, r.modulation_at_bound);
  param_line("thickness", r.grating.thickness * 1e6, r.thickness_se * 1e6, " um",
             p.fit_thickness, r.thickness_at_bound);
  param_line("offset", r.offset * 1e3, r.offset_se * 1e3, " mrad", p.fit_offset,
             r.offset_at_bound);
  if (!r.diagnostic.empty()) std::fprintf(stderr, "warning: %s\n", r.diagnostic.c_str());
  std::printf("wrote %s\n", report.c_str());

  if (!r.converged && !allow_nonconverged) {
    std::fprintf(stderr, "error: fit did not converge (use --allow-nonconverged to accept)\n");
    return 4;
  }
  return 0;
}

int cmd_design(const Common& c) {
  const Config cfg = resolve(c);
  if (c.emit) {
    std::fputs(cfg.emit().c_str(), stdout);
    return 0;
  }
  const auto g = tribeam::cfg::make_grating(cfg);
  const auto b = tribeam::cfg::make_beam(cfg);
  const auto opt = tribeam::cfg::make_convolve_options(cfg);
  const double lo = cfg.angle_deg("design.tilt_lo_deg");
  const double hi = cfg.angle_deg("design.tilt_hi_deg");
  const int samples = int(cfg.integer("design.samples"));

  const auto dp = tribeam::design_three_port(g, b, lo, hi, opt, samples);

  std::printf("three-port design over tilt [%s, %s] deg:\n",
              num(lo * 180.0 / kPi).c_str(), num(hi * 180.0 / kPi).c_str());
  std::printf("  tilt*      = %s deg\n", num(dp.tilt * 180.0 / kPi).c_str());
  std::printf("  eta(-1)    = %s\n", num(dp.eta_m1).c_str());
  std::printf("  eta(0)     = %s\n", num(dp.eta_0).c_str());
  std::printf("  eta(+1)    = %s\n", num(dp.eta_p1).c_str());
  std::printf("  eta(|2|)   = %s (mean of the second orders)\n", num(dp.eta_2).c_str());
  std::printf("  total T    = %s\n", num(dp.total).c_str());
  std::printf("  imbalance  = %s\n", num(dp.imbalance).c_str());
  std::printf("  balanced   = %s\n", dp.balanced ? "yes" : "no (no balanced point in range)");
  return 0;
}

int cmd_zernike(const Common& c) {
  const Config cfg = resolve(c);
  if (c.emit) {
    std::fputs(cfg.emit().c_str(), stdout);
    return 0;
  }
  const double lambda = cfg.length("zernike.wavelength");
  const auto lay = tribeam::solve_layout(
      lambda, cfg.length("zernike.splitter_spacing"), cfg.length("zernike.separation"),
      cfg.length("zernike.beam_width"), cfg.length("zernike.fringe_period"));
  const double dphi = cfg.number("zernike.dphi_rad");
  const double shift = tribeam::axial_shift(dphi, lambda, lay.alpha);

  tribeam::ThreeBeamField field;
  const double am = cfg.number("zernike.amp_minus");
  const double a0 = cfg.number("zernike.amp_zero");
  const double ap = cfg.number("zernike.amp_plus");
  const double norm = std::sqrt(am * am + a0 * a0 + ap * ap);
  if (!(norm > 0.0)) throw tribeam::config_error("zernike amplitudes are all zero");
  field.a_minus = am / norm;
  field.a_zero = a0 / norm;
  field.a_plus = ap / norm;
  field.phase = cfg.number("zernike.phase_rad");
  field.alpha = lay.alpha;
  field.wavelength = lambda;

  const int nx = int(cfg.integer("zernike.map_nx"));
  const int nz = int(cfg.integer("zernike.map_nz"));
  if (nx < 2 || nz < 1) throw tribeam::config_error("zernike map needs nx >= 2, nz >= 1");
  const double sx = cfg.length("zernike.map_x_span");
  const double sz = cfg.length("zernike.map_z_span");
  std::vector<double> xg(nx), zg(nz);
  for (int i = 0; i < nx; ++i) xg[i] = -sx / 2.0 + sx * double(i) / double(nx - 1);
  for (int i = 0; i < nz; ++i) zg[i] = nz == 1 ? 0.0 : sz * double(i) / double(nz - 1);

  const auto map = tribeam::interference(field, xg, zg);
  const std::string pattern_out = cfg.raw("zernike.pattern_output");
  const std::string matrix_out = cfg.raw("zernike.matrix_output");
  tribeam::io::write_intensity_csv(pattern_out, map);
  tribeam::io::write_intensity_matrix(matrix_out, map);

  const double period = cfg.length("zernike.analyzer_period");
  const double duty = cfg.number("zernike.analyzer_duty");
  const double zplane = cfg.length("zernike.analyzer_z");
  const int npts = int(cfg.integer("zernike.analyzer_points"));
  if (npts < 1) throw tribeam::config_error("zernike.analyzer_points must be >= 1");
  std::vector<double> offsets(npts);
  for (int i = 0; i < npts; ++i) {
    offsets[i] = npts == 1 ? 0.0 : 2.0 * period * double(i) / double(npts - 1);
  }
  const auto signal = tribeam::analyzer_scan(map, zplane, period, duty, offsets);
  const std::string scan_out = cfg.raw("zernike.scan_output");
  tribeam::io::write_analyzer_csv(scan_out, offsets, signal);

  std::printf("interferometer layout:\n");
  std::printf("  theta1        = %s mrad per beam (2*theta1 between the +-1 beams)\n",
              num(lay.theta1 * 1e3).c_str());
  std::printf("  alpha         = %s mrad\n", num(lay.alpha * 1e3).c_str());
  std::printf("  L1            = %s m\n", num(lay.L1).c_str());
  std::printf("  L2            = %s m\n", num(lay.L2).c_str());
  std::printf("  total length  = %s m\n", num(lay.total_length()).c_str());
  std::printf("  overlap       = %s m along the axis\n", num(lay.overlap_length()).c_str());
  std::printf("  fringe period = %s m\n", num(lambda / (2.0 * std::sin(lay.alpha))).c_str());
  std::printf("  axial shift   = %s m for dphi = %s rad\n", num(shift).c_str(),
              num(dphi).c_str());
  std::printf("wrote %s, %s, %s\n", pattern_out.c_str(), matrix_out.c_str(),
              scan_out.c_str());
  return 0;
}

int cmd_reduce(const Common& c, const std::string& frame_path) {
  const Config cfg = resolve(c);
  if (c.emit) {
    std::fputs(cfg.emit().c_str(), stdout);
    return 0;
  }
  auto frame = tribeam::io::read_frame(frame_path);
  bool have_background = false;
  for (const auto& spec : cfg.regions()) {
    const auto rs = tribeam::io::parse_region_spec(spec);
    if (rs.is_background) {
      if (have_background) throw tribeam::config_error("more than one background region");
      have_background = true;
      frame.background = rs.region;
    } else {
      frame.spots.emplace_back(rs.order, rs.region);
    }
  }
  if (!have_background) {
    throw tribeam::config_error("reduce needs a 'background:x0,y0,x1,y1' region");
  }
  if (frame.spots.empty()) {
    throw tribeam::config_error("reduce needs at least one 'order=m:...' region");
  }

  const auto eta = tribeam::reduce_frame(frame);
  const std::string out = cfg.raw("reduce.output");
  tribeam::io::write_reduced_csv(out, eta);
  for (const auto& [m, v] : eta) std::printf("eta(%+d) = %s\n", m, num(v).c_str());
  std::printf("wrote %s\n", out.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Holographic grating beam-splitter toolkit: coupled-wave scans, "
               "rocking-curve fits, tilt design, three-path interferometry, and "
               "detector-frame reduction"};
  app.require_subcommand(1);

  Common rock_common, fit_common, design_common, zernike_common, reduce_common;
  std::string fit_data, reduce_frame_path;
  bool allow_nonconverged = false;

  auto* rock = app.add_subcommand("rock", "Simulate a rocking scan, write the CSV");
  attach_common(rock, rock_common);

  auto* fitc = app.add_subcommand("fit", "Fit modulation/thickness to a rocking CSV");
  attach_common(fitc, fit_common);
  fitc->add_option("data", fit_data, "Measured rocking-curve CSV")->required(false);
  fitc->add_flag("--allow-nonconverged", allow_nonconverged,
                 "Exit 0 even when the fit does not converge");

  auto* design = app.add_subcommand("design", "Find the balanced three-port tilt");
  attach_common(design, design_common);

  auto* zern = app.add_subcommand("zernike", "Three-path interferometer layout and pattern");
  attach_common(zern, zernike_common);

  auto* reduce = app.add_subcommand("reduce", "Reduce a detector frame to efficiencies");
  attach_common(reduce, reduce_common);
  reduce->add_option("frame", reduce_frame_path, "Detector frame file")->required(false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (rock->parsed()) return cmd_rock(rock_common);
    if (fitc->parsed()) {
      if (fit_data.empty() && !fit_common.emit) {
        std::fprintf(stderr, "error: fit needs a data CSV\n");
        return 2;
      }
      return cmd_fit(fit_common, fit_data, allow_nonconverged);
    }
    if (design->parsed()) return cmd_design(design_common);
    if (zern->parsed()) return cmd_zernike(zernike_common);
    if (reduce->parsed()) {
      if (reduce_frame_path.empty() && !reduce_common.emit) {
        std::fprintf(stderr, "error: reduce needs a frame file\n");
        return 2;
      }
      return cmd_reduce(reduce_common, reduce_frame_path);
    }
  } catch (const tribeam::config_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const tribeam::accuracy_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const tribeam::no_signal_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
