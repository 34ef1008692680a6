#include "tribeam/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <set>

#include "tribeam/types.hpp"

namespace tribeam::cfg {

namespace {

struct KeyDefault {
  const char* key;
  const char* preset;
};

// Emit order. reduce.region (repeatable, no default) is handled separately.
constexpr KeyDefault kSchema[] = {
    {"grating.spacing", "1 um"},
    {"grating.thickness", "91 um"},
    {"grating.modulation", "2.55e-6"},
    {"grating.tilt_deg", "56"},
    {"grating.mean_index", "1.0"},
    {"beam.wavelength", "1.7 nm"},
    {"beam.spread", "0.10"},
    {"beam.divergence_mrad", "1.0"},
    {"beam.kernel", "gaussian"},
    {"solver.orders", "4"},
    {"solver.engine", "spectral"},
    {"solver.steps", "2000"},
    {"solver.nodes", "7"},
    {"solver.check", "on"},
    {"solver.dispersion", "on"},
    {"solver.simd", "auto"},
    {"rng.seed", "20260815"},
    {"rock.theta_min_mrad", "-5"},
    {"rock.theta_max_mrad", "5"},
    {"rock.points", "41"},
    {"rock.noise_sigma", "0"},
    {"rock.output", "rocking.csv"},
    {"fit.modulation", "on"},
    {"fit.thickness", "on"},
    {"fit.offset", "off"},
    {"fit.offset_guess_mrad", "0"},
    {"fit.modulation_lo", "1e-8"},
    {"fit.modulation_hi", "1e-3"},
    {"fit.thickness_lo", "10 um"},
    {"fit.thickness_hi", "400 um"},
    {"fit.offset_lo_mrad", "-2"},
    {"fit.offset_hi_mrad", "2"},
    {"fit.default_sigma", "0.01"},
    {"fit.max_iterations", "200"},
    {"fit.report_csv", "fit_report.csv"},
    {"design.tilt_lo_deg", "40"},
    {"design.tilt_hi_deg", "70"},
    {"design.samples", "81"},
    {"zernike.wavelength", "8 nm"},
    {"zernike.splitter_spacing", "0.5 um"},
    {"zernike.separation", "1 cm"},
    {"zernike.beam_width", "1 mm"},
    {"zernike.fringe_period", "1 um"},
    {"zernike.phase_rad", "1.5707963267948966"},
    {"zernike.amp_minus", "1"},
    {"zernike.amp_zero", "1"},
    {"zernike.amp_plus", "1"},
    {"zernike.dphi_rad", "0.06283185307179587"},
    {"zernike.map_nx", "161"},
    {"zernike.map_nz", "41"},
    {"zernike.map_x_span", "4 um"},
    {"zernike.map_z_span", "4 mm"},
    {"zernike.analyzer_period", "1 um"},
    {"zernike.analyzer_duty", "0.5"},
    {"zernike.analyzer_z", "0 m"},
    {"zernike.analyzer_points", "41"},
    {"zernike.pattern_output", "pattern.csv"},
    {"zernike.matrix_output", "pattern.dat"},
    {"zernike.scan_output", "analyzer.csv"},
    {"reduce.output", "reduced.csv"},
};

std::string trimmed(std::string s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

double to_double(const std::string& text, const std::string& key) {
  const std::string t = trimmed(text);
  double v = 0.0;
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc{} || p != t.data() + t.size()) {
    throw config_error("key '" + key + "': malformed number '" + text + "'");
  }
  return v;
}

}  // namespace

Config Config::defaults() {
  Config c;
  for (const auto& kd : kSchema) c.values_[kd.key] = kd.preset;
  return c;
}

void Config::set(const std::string& key, const std::string& value) {
  if (key == "reduce.region") {
    regions_.push_back(trimmed(value));
    return;
  }
  auto it = values_.find(key);
  if (it == values_.end()) throw config_error("unknown key '" + key + "'");
  it->second = trimmed(value);
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config '" + path + "'");

  Config c = defaults();
  std::set<std::string> seen;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trimmed(line);
    if (line.empty()) continue;
    const std::string where = path + ":" + std::to_string(lineno);
    const size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw config_error(where + ": expected 'key = value'");
    }
    const std::string key = trimmed(line.substr(0, eq));
    const std::string value = trimmed(line.substr(eq + 1));
    if (key.empty()) throw config_error(where + ": empty key");
    if (key != "reduce.region" && !seen.insert(key).second) {
      throw config_error(where + ": duplicate key '" + key + "'");
    }
    try {
      c.set(key, value);
    } catch (const config_error& e) {
      throw config_error(where + ": " + e.what());
    }
  }
  return c;
}

const std::string& Config::raw(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw config_error("unknown key '" + key + "'");
  return it->second;
}

double Config::number(const std::string& key) const {
  return to_double(raw(key), key);
}

long Config::integer(const std::string& key) const {
  const std::string t = trimmed(raw(key));
  long v = 0;
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc{} || p != t.data() + t.size()) {
    throw config_error("key '" + key + "': malformed integer '" + t + "'");
  }
  return v;
}

bool Config::flag(const std::string& key) const {
  const std::string& v = raw(key);
  if (v == "on" || v == "true") return true;
  if (v == "off" || v == "false") return false;
  throw config_error("key '" + key + "': expected on or off, got '" + v + "'");
}

double Config::length(const std::string& key) const {
  const std::string v = trimmed(raw(key));
  size_t end = v.size();
  while (end > 0) {
    const unsigned char ch = static_cast<unsigned char>(v[end - 1]);
    if (std::isalpha(ch) || ch >= 0x80) {
      --end;
    } else {
      break;
    }
  }
  const std::string unit = v.substr(end);
  double scale = 0.0;
  if (unit == "nm") scale = 1e-9;
  else if (unit == "um" || unit == "µm") scale = 1e-6;
  else if (unit == "mm") scale = 1e-3;
  else if (unit == "cm") scale = 1e-2;
  else if (unit == "m") scale = 1.0;
  else {
    throw config_error("key '" + key + "': length '" + v +
                       "' needs a unit suffix (nm/um/mm/cm/m)");
  }
  return to_double(v.substr(0, end), key) * scale;
}

double Config::angle_deg(const std::string& key) const {
  return number(key) * (3.14159265358979323846 / 180.0);
}

double Config::angle_mrad(const std::string& key) const {
  return number(key) * 1e-3;
}

std::string Config::word(const std::string& key,
                         std::initializer_list<const char*> allowed) const {
  const std::string& v = raw(key);
  std::string options;
  for (const char* a : allowed) {
    if (v == a) return v;
    if (!options.empty()) options += '/';
    options += a;
  }
  throw config_error("key '" + key + "': expected one of " + options + ", got '" +
                     v + "'");
}

std::string Config::emit() const {
  std::string out;
  for (const auto& kd : kSchema) {
    out += kd.key;
    out += " = ";
    out += values_.at(kd.key);
    out += '\n';
  }
  for (const auto& r : regions_) {
    out += "reduce.region = ";
    out += r;
    out += '\n';
  }
  return out;
}

Grating make_grating(const Config& c) {
  Grating g;
  g.spacing = c.length("grating.spacing");
  g.thickness = c.length("grating.thickness");
  g.index_modulation = c.number("grating.modulation");
  g.tilt = c.angle_deg("grating.tilt_deg");
  g.mean_index = c.number("grating.mean_index");
  g.validate();
  return g;
}

Beam make_beam(const Config& c) {
  Beam b;
  b.wavelength = c.length("beam.wavelength");
  b.relative_spread = c.number("beam.spread");
  b.divergence = c.angle_mrad("beam.divergence_mrad");
  b.validate();
  return b;
}

ConvolveOptions make_convolve_options(const Config& c) {
  ConvolveOptions opt;
  opt.kernel = c.word("beam.kernel", {"gaussian", "triangular"}) == "gaussian"
                   ? KernelShape::gaussian
                   : KernelShape::triangular;
  opt.nodes = int(c.integer("solver.nodes"));
  opt.check = c.flag("solver.check");
  opt.engine = c.word("solver.engine", {"spectral", "rk4"}) == "spectral"
                   ? Engine::spectral
                   : Engine::rk4;
  opt.steps = int(c.integer("solver.steps"));
  opt.max_order = int(c.integer("solver.orders"));
  opt.quadratic_dispersion = c.flag("solver.dispersion");
  if (opt.nodes < 1 || opt.nodes > 64) {
    throw config_error("solver.nodes must lie in [1, 64]");
  }
  if (opt.steps < 1) throw config_error("solver.steps must be positive");
  if (opt.max_order < 2 || opt.max_order > 30) {
    throw config_error("solver.orders must lie in [2, 30]");
  }
  return opt;
}

}  // namespace tribeam::cfg
