#pragma once

#include <map>
#include <string>
#include <vector>

#include "tribeam/instrument.hpp"
#include "tribeam/zernike.hpp"

namespace tribeam::io {

// Header: theta_mrad,eta_m2,eta_m1,eta_0,eta_p1,eta_p2,sigma. Angles are
// stored in radians internally and converted at the file boundary. The
// reader also accepts the six-column form without sigma.
void write_rocking_csv(const std::string& path, const RockingCurve& curve);
RockingCurve read_rocking_csv(const std::string& path);

// First line "rows cols pixel_pitch_mm", then rows x cols integer counts.
// Regions are not part of the frame file; see parse_region_spec.
DetectorFrame read_frame(const std::string& path);

// "order=m:x0,y0,x1,y1" or "background:x0,y0,x1,y1" (inclusive pixel bounds).
struct RegionSpec {
  bool is_background = false;
  int order = 0;
  FrameRegion region;
};
RegionSpec parse_region_spec(const std::string& text);

void write_intensity_csv(const std::string& path, const IntensityMap& map);
// gnuplot `splot "..." nonuniform matrix`: first row holds the x grid.
void write_intensity_matrix(const std::string& path, const IntensityMap& map);
void write_analyzer_csv(const std::string& path, const std::vector<double>& offsets,
                        const std::vector<double>& signal);
void write_reduced_csv(const std::string& path, const std::map<int, double>& eta);

}  // namespace tribeam::io
