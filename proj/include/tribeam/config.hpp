#pragma once

#include <initializer_list>
#include <map>
#include <string>
#include <vector>

#include "tribeam/instrument.hpp"

namespace tribeam::cfg {

// Flat "section.key = value" text config. Every key has a default; files and
// overrides may only set keys the schema knows (strict mode). Lengths carry a
// required unit suffix (nm/um/mm/cm/m), tilts are degrees, rocking angles are
// milliradians. reduce.region is the one repeatable key.
class Config {
 public:
  static Config defaults();
  static Config load(const std::string& path);  // defaults overlaid with file

  void set(const std::string& key, const std::string& value);
  const std::string& raw(const std::string& key) const;

  double number(const std::string& key) const;
  long integer(const std::string& key) const;
  bool flag(const std::string& key) const;  // on/off (true/false accepted)
  double length(const std::string& key) const;      // unit suffix required
  double angle_deg(const std::string& key) const;   // stored deg, returns rad
  double angle_mrad(const std::string& key) const;  // stored mrad, returns rad
  std::string word(const std::string& key,
                   std::initializer_list<const char*> allowed) const;
  const std::vector<std::string>& regions() const { return regions_; }

  std::string emit() const;  // schema order, reparseable

 private:
  std::map<std::string, std::string> values_;
  std::vector<std::string> regions_;
};

Grating make_grating(const Config& c);
Beam make_beam(const Config& c);
ConvolveOptions make_convolve_options(const Config& c);

}  // namespace tribeam::cfg
