#include "tribeam/io.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "tribeam/types.hpp"

namespace tribeam::io {

namespace {

constexpr const char* kRockingHeader =
    "theta_mrad,eta_m2,eta_m1,eta_0,eta_p1,eta_p2,sigma";
constexpr const char* kRockingHeaderNoSigma =
    "theta_mrad,eta_m2,eta_m1,eta_0,eta_p1,eta_p2";

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string trimmed(std::string s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

double parse_double(const std::string& field, const std::string& where) {
  const std::string t = trimmed(field);
  double v = 0.0;
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc{} || p != t.data() + t.size()) {
    throw config_error("malformed number '" + field + "' in " + where);
  }
  return v;
}

long parse_int(const std::string& field, const std::string& where) {
  const std::string t = trimmed(field);
  long v = 0;
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc{} || p != t.data() + t.size()) {
    throw config_error("malformed integer '" + field + "' in " + where);
  }
  return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    const size_t pos = line.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw config_error("cannot open '" + path + "' for writing");
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw config_error("write to '" + path + "' failed");
}

}  // namespace

void write_rocking_csv(const std::string& path, const RockingCurve& curve) {
  if (curve.eta.size() != curve.theta.size() ||
      (!curve.sigma.empty() && curve.sigma.size() != curve.theta.size())) {
    throw std::invalid_argument("rocking curve columns disagree in length");
  }
  auto out = open_out(path);
  out << kRockingHeader << '\n';
  for (size_t i = 0; i < curve.theta.size(); ++i) {
    out << num(curve.theta[i] * 1e3);
    for (int c = 0; c < 5; ++c) out << ',' << num(curve.eta[i][c]);
    out << ',' << num(curve.sigma.empty() ? 0.0 : curve.sigma[i]) << '\n';
  }
  finish(out, path);
}

RockingCurve read_rocking_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open '" + path + "'");

  std::string line;
  if (!std::getline(in, line)) throw config_error("'" + path + "' is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  bool has_sigma = false;
  if (line == kRockingHeader) {
    has_sigma = true;
  } else if (line != kRockingHeaderNoSigma) {
    throw config_error("'" + path + "': unrecognized rocking-curve header");
  }
  const size_t want = has_sigma ? 7 : 6;

  RockingCurve curve;
  size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trimmed(line).empty()) continue;
    const std::string where = path + ":" + std::to_string(lineno);
    const auto fields = split(line, ',');
    if (fields.size() != want) {
      throw config_error(where + ": expected " + std::to_string(want) +
                         " columns, got " + std::to_string(fields.size()));
    }
    const double theta = parse_double(fields[0], where) * 1e-3;
    if (!curve.theta.empty() && theta <= curve.theta.back()) {
      throw config_error(where + ": theta must be strictly increasing");
    }
    std::array<double, 5> eta{};
    for (int c = 0; c < 5; ++c) {
      eta[c] = parse_double(fields[c + 1], where);
      if (eta[c] < -0.1 || eta[c] > 1.1) {
        throw config_error(where + ": efficiency out of range [-0.1, 1.1]");
      }
    }
    curve.theta.push_back(theta);
    curve.eta.push_back(eta);
    if (has_sigma) curve.sigma.push_back(parse_double(fields[6], where));
  }
  if (curve.theta.empty()) throw config_error("'" + path + "' has no data rows");
  return curve;
}

DetectorFrame read_frame(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open '" + path + "'");

  std::string header;
  if (!std::getline(in, header)) throw config_error("'" + path + "' is empty");
  std::istringstream hs(header);
  long long rows = 0, cols = 0;
  double pitch_mm = 0.0;
  std::string extra;
  if (!(hs >> rows >> cols >> pitch_mm) || (hs >> extra)) {
    throw config_error("'" + path + "': header must be 'rows cols pixel_pitch_mm'");
  }
  if (rows <= 0 || cols <= 0 || !(pitch_mm > 0.0)) {
    throw config_error("'" + path + "': frame dimensions and pitch must be positive");
  }

  DetectorFrame f;
  f.rows = int(rows);
  f.cols = int(cols);
  f.pixel_pitch = pitch_mm * 1e-3;
  f.counts.resize(size_t(rows) * size_t(cols));
  for (auto& c : f.counts) {
    if (!(in >> c)) throw config_error("'" + path + "': frame data truncated or malformed");
    if (c < 0) throw config_error("'" + path + "': negative pixel count");
  }
  std::string tail;
  if (in >> tail) throw config_error("'" + path + "': trailing data after pixel grid");
  return f;
}

RegionSpec parse_region_spec(const std::string& text) {
  const std::string spec = trimmed(text);
  RegionSpec rs;
  std::string coords;
  if (spec.rfind("background:", 0) == 0) {
    rs.is_background = true;
    coords = spec.substr(11);
  } else if (spec.rfind("order=", 0) == 0) {
    const size_t colon = spec.find(':', 6);
    if (colon == std::string::npos) {
      throw config_error("region spec '" + text + "' is missing ':' after the order");
    }
    rs.order = int(parse_int(spec.substr(6, colon - 6), "region spec"));
    coords = spec.substr(colon + 1);
  } else {
    throw config_error("region spec '" + text +
                       "' must start with 'order=m:' or 'background:'");
  }
  const auto parts = split(coords, ',');
  if (parts.size() != 4) {
    throw config_error("region spec '" + text + "' needs x0,y0,x1,y1");
  }
  rs.region.x0 = int(parse_int(parts[0], "region spec"));
  rs.region.y0 = int(parse_int(parts[1], "region spec"));
  rs.region.x1 = int(parse_int(parts[2], "region spec"));
  rs.region.y1 = int(parse_int(parts[3], "region spec"));
  return rs;
}

void write_intensity_csv(const std::string& path, const IntensityMap& map) {
  auto out = open_out(path);
  out << "x_m,z_m,intensity\n";
  for (size_t iz = 0; iz < map.z.size(); ++iz) {
    for (size_t ix = 0; ix < map.x.size(); ++ix) {
      out << num(map.x[ix]) << ',' << num(map.z[iz]) << ','
          << num(map.values[iz * map.x.size() + ix]) << '\n';
    }
  }
  finish(out, path);
}

void write_intensity_matrix(const std::string& path, const IntensityMap& map) {
  auto out = open_out(path);
  out << map.x.size();
  for (double x : map.x) out << ' ' << num(x);
  out << '\n';
  for (size_t iz = 0; iz < map.z.size(); ++iz) {
    out << num(map.z[iz]);
    for (size_t ix = 0; ix < map.x.size(); ++ix) {
      out << ' ' << num(map.values[iz * map.x.size() + ix]);
    }
    out << '\n';
  }
  finish(out, path);
}

void write_analyzer_csv(const std::string& path, const std::vector<double>& offsets,
                        const std::vector<double>& signal) {
  if (offsets.size() != signal.size()) {
    throw std::invalid_argument("analyzer offsets and signal disagree in length");
  }
  auto out = open_out(path);
  out << "x0_m,signal\n";
  for (size_t i = 0; i < offsets.size(); ++i) {
    out << num(offsets[i]) << ',' << num(signal[i]) << '\n';
  }
  finish(out, path);
}

void write_reduced_csv(const std::string& path, const std::map<int, double>& eta) {
  auto out = open_out(path);
  out << "order,eta\n";
  for (const auto& [m, v] : eta) out << m << ',' << num(v) << '\n';
  finish(out, path);
}

}  // namespace tribeam::io
