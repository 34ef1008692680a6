#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "doctest.h"
#include "tribeam/config.hpp"
#include "tribeam/io.hpp"

using namespace tribeam;

namespace {

std::string scratch_path(const std::string& name) {
  return "/tmp/tribeam_io_test_" + name;
}

std::string write_text(const std::string& name, const std::string& body) {
  const std::string path = scratch_path(name);
  std::ofstream out(path);
  out << body;
  return path;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::string s((std::istreambuf_iterator<char>(in)),
                std::istreambuf_iterator<char>());
  return s;
}

RockingCurve sample_curve(bool with_sigma) {
  RockingCurve c;
  c.theta = {-1.25e-3, 0.0, 0.8537e-3};
  c.eta = {std::array<double, 5>{0.01, 0.2, 0.5, 0.25, 0.04},
           std::array<double, 5>{0.036, 0.3209, 0.2849, 0.3209, 0.036},
           std::array<double, 5>{0.02, 0.15, 0.3, 0.49, 0.04}};
  if (with_sigma) c.sigma = {0.01, 0.02, 0.013};
  return c;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("rocking curve survives a write/read round trip") {
  for (bool with_sigma : {true, false}) {
    const RockingCurve c = sample_curve(with_sigma);
    const std::string path = scratch_path("roundtrip.csv");
    io::write_rocking_csv(path, c);
    const RockingCurve r = io::read_rocking_csv(path);
    REQUIRE(r.theta.size() == c.theta.size());
    REQUIRE(r.sigma.size() == c.theta.size());  // writer always emits sigma
    for (size_t i = 0; i < c.theta.size(); ++i) {
      CHECK(r.theta[i] == doctest::Approx(c.theta[i]).scale(1e-3).epsilon(1e-9));
      for (int k = 0; k < 5; ++k)
        CHECK(r.eta[i][k] == doctest::Approx(c.eta[i][k]).scale(1.0).epsilon(1e-9));
      const double want = with_sigma ? c.sigma[i] : 0.0;
      CHECK(r.sigma[i] == doctest::Approx(want).scale(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("six-column rocking files are accepted without sigma") {
  const std::string path = write_text(
      "sixcol.csv",
      "theta_mrad,eta_m2,eta_m1,eta_0,eta_p1,eta_p2\n"
      "-1.0,0.01,0.2,0.5,0.25,0.04\n"
      "0.5,0.02,0.15,0.3,0.49,0.04\n");
  const RockingCurve r = io::read_rocking_csv(path);
  REQUIRE(r.theta.size() == 2);
  CHECK(r.sigma.empty());
  CHECK(r.theta[0] == doctest::Approx(-1.0e-3).epsilon(1e-12));
  CHECK(r.eta[1][3] == doctest::Approx(0.49).epsilon(1e-12));
}

TEST_CASE("rocking reader tolerates CRLF endings and blank lines") {
  const std::string path = write_text(
      "crlf.csv",
      "theta_mrad,eta_m2,eta_m1,eta_0,eta_p1,eta_p2,sigma\r\n"
      "-1.0,0.01,0.2,0.5,0.25,0.04,0.01\r\n"
      "\r\n"
      "0.5,0.02,0.15,0.3,0.49,0.04,0.01\r\n");
  const RockingCurve r = io::read_rocking_csv(path);
  CHECK(r.theta.size() == 2);
}

TEST_CASE("rocking reader rejects malformed files") {
  auto expect_reject = [](const std::string& name, const std::string& body) {
    const std::string path = write_text(name, body);
    CHECK_THROWS_AS(io::read_rocking_csv(path), config_error);
  };
  expect_reject("badheader.csv",
                "angle,eta_m2,eta_m1,eta_0,eta_p1,eta_p2,sigma\n"
                "0,0,0,1,0,0,0.01\n");
  expect_reject("descending.csv",
                "theta_mrad,eta_m2,eta_m1,eta_0,eta_p1,eta_p2,sigma\n"
                "0.5,0,0,1,0,0,0.01\n"
                "-1.0,0,0,1,0,0,0.01\n");
  expect_reject("range.csv",
                "theta_mrad,eta_m2,eta_m1,eta_0,eta_p1,eta_p2,sigma\n"
                "0.5,0,0,1.5,0,0,0.01\n");
  expect_reject("garbled.csv",
                "theta_mrad,eta_m2,eta_m1,eta_0,eta_p1,eta_p2,sigma\n"
                "0.5,0,zero,1,0,0,0.01\n");
  expect_reject("short_row.csv",
                "theta_mrad,eta_m2,eta_m1,eta_0,eta_p1,eta_p2,sigma\n"
                "0.5,0,0,1,0\n");
  expect_reject("headeronly.csv",
                "theta_mrad,eta_m2,eta_m1,eta_0,eta_p1,eta_p2,sigma\n");
  expect_reject("empty.csv", "");
  CHECK_THROWS_AS(io::read_rocking_csv("/tmp/tribeam_io_test_does_not_exist"),
                  config_error);
}

TEST_CASE("frame reader parses the header and the pixel grid") {
  const std::string path = write_text("frame.dat",
                                      "2 3 0.5\n"
                                      "1 2 3\n"
                                      "4 5 6\n");
  const DetectorFrame f = io::read_frame(path);
  CHECK(f.rows == 2);
  CHECK(f.cols == 3);
  CHECK(f.pixel_pitch == doctest::Approx(0.5e-3).epsilon(1e-12));
  REQUIRE(f.counts.size() == 6);
  CHECK(f.at(0, 0) == 1);
  CHECK(f.at(2, 1) == 6);
}

TEST_CASE("frame reader rejects malformed files") {
  auto expect_reject = [](const std::string& name, const std::string& body) {
    const std::string path = write_text(name, body);
    CHECK_THROWS_AS(io::read_frame(path), config_error);
  };
  expect_reject("f_extra.dat", "2 3 0.5 junk\n1 2 3\n4 5 6\n");
  expect_reject("f_short.dat", "2 3\n1 2 3\n4 5 6\n");
  expect_reject("f_dims.dat", "0 3 0.5\n");
  expect_reject("f_pitch.dat", "2 3 -0.5\n1 2 3\n4 5 6\n");
  expect_reject("f_neg.dat", "2 3 0.5\n1 -2 3\n4 5 6\n");
  expect_reject("f_trunc.dat", "2 3 0.5\n1 2 3\n4 5\n");
  expect_reject("f_trail.dat", "2 3 0.5\n1 2 3\n4 5 6\n7\n");
  expect_reject("f_word.dat", "2 3 0.5\n1 2 3\n4 x 6\n");
}

TEST_CASE("region atoms parse to labeled rectangles") {
  const io::RegionSpec bg = io::parse_region_spec("background:0,0,51,1");
  CHECK(bg.is_background);
  CHECK(bg.region.x0 == 0);
  CHECK(bg.region.y1 == 1);
  CHECK(bg.region.x1 == 51);

  const io::RegionSpec spot = io::parse_region_spec("order=-2:3,4,7,9");
  CHECK_FALSE(spot.is_background);
  CHECK(spot.order == -2);
  CHECK(spot.region.x0 == 3);
  CHECK(spot.region.y0 == 4);
  CHECK(spot.region.x1 == 7);
  CHECK(spot.region.y1 == 9);

  CHECK_THROWS_AS(io::parse_region_spec("order=1:1,2,3"), config_error);
  CHECK_THROWS_AS(io::parse_region_spec("order=x:1,2,3,4"), config_error);
  CHECK_THROWS_AS(io::parse_region_spec("order=1"), config_error);
  CHECK_THROWS_AS(io::parse_region_spec("spot:1,2,3,4"), config_error);
  CHECK_THROWS_AS(io::parse_region_spec("background:1,2,3,x"), config_error);
}

TEST_CASE("tabular writers emit the documented shapes") {
  IntensityMap map;
  map.x = {0.0, 1e-6};
  map.z = {0.0, 1e-3, 2e-3};
  map.values = {1.0, 2.0, 3.0, 4.0, 5.0, 6.0};

  const std::string csv = scratch_path("map.csv");
  io::write_intensity_csv(csv, map);
  CHECK(slurp(csv) ==
        "x_m,z_m,intensity\n"
        "0,0,1\n1e-06,0,2\n"
        "0,0.001,3\n1e-06,0.001,4\n"
        "0,0.002,5\n1e-06,0.002,6\n");

  const std::string mat = scratch_path("map.dat");
  io::write_intensity_matrix(mat, map);
  CHECK(slurp(mat) ==
        "2 0 1e-06\n"
        "0 1 2\n"
        "0.001 3 4\n"
        "0.002 5 6\n");

  const std::string red = scratch_path("reduced.csv");
  io::write_reduced_csv(red, {{-1, 0.25}, {0, 0.5}, {1, 0.25}});
  CHECK(slurp(red) == "order,eta\n-1,0.25\n0,0.5\n1,0.25\n");

  const std::string ana = scratch_path("analyzer.csv");
  io::write_analyzer_csv(ana, {0.0, 1e-6}, {0.5, 0.25});
  CHECK(slurp(ana) == "x0_m,signal\n0,0.5\n1e-06,0.25\n");
  CHECK_THROWS_AS(io::write_analyzer_csv(ana, {0.0}, {0.5, 0.25}),
                  std::invalid_argument);
}

TEST_CASE("config defaults expose the measured operating point") {
  const cfg::Config c = cfg::Config::defaults();
  CHECK(c.raw("grating.spacing") == "1 um");
  CHECK(c.length("grating.spacing") == doctest::Approx(1e-6).epsilon(1e-12));
  CHECK(c.length("grating.thickness") == doctest::Approx(91e-6).epsilon(1e-12));
  CHECK(c.number("grating.modulation") == doctest::Approx(2.55e-6).epsilon(1e-12));
  CHECK(c.angle_deg("grating.tilt_deg") ==
        doctest::Approx(56.0 * 3.14159265358979 / 180.0).epsilon(1e-9));
  CHECK(c.length("beam.wavelength") == doctest::Approx(1.7e-9).epsilon(1e-12));
  CHECK(c.number("beam.spread") == doctest::Approx(0.10).epsilon(1e-12));
  CHECK(c.integer("rock.points") == 41);
  CHECK(c.angle_mrad("rock.theta_max_mrad") == doctest::Approx(5e-3).epsilon(1e-12));
  CHECK(c.flag("solver.check"));
  CHECK_FALSE(c.flag("fit.offset"));
  CHECK(c.word("solver.engine", {"spectral", "rk4"}) == "spectral");

  const Grating g = cfg::make_grating(c);
  CHECK(g.index_modulation == doctest::Approx(2.55e-6).epsilon(1e-12));
  const Beam b = cfg::make_beam(c);
  CHECK(b.divergence == doctest::Approx(1e-3).epsilon(1e-12));
  const ConvolveOptions opt = cfg::make_convolve_options(c);
  CHECK(opt.nodes == 7);
  CHECK(opt.engine == Engine::spectral);
  CHECK(opt.quadratic_dispersion);
}

TEST_CASE("config files overlay defaults and reject junk") {
  const std::string good = write_text("good.cfg",
                                      "# comment line\n"
                                      "\n"
                                      "grating.spacing = 0.5 um   # trailing note\n"
                                      "beam.wavelength = 8 nm\n"
                                      "solver.engine = rk4\n"
                                      "rock.points = 11\n");
  const cfg::Config c = cfg::Config::load(good);
  CHECK(c.length("grating.spacing") == doctest::Approx(0.5e-6).epsilon(1e-12));
  CHECK(c.length("beam.wavelength") == doctest::Approx(8e-9).epsilon(1e-12));
  CHECK(c.word("solver.engine", {"spectral", "rk4"}) == "rk4");
  CHECK(c.integer("rock.points") == 11);
  CHECK(c.length("grating.thickness") == doctest::Approx(91e-6).epsilon(1e-12));

  auto expect_reject = [](const std::string& name, const std::string& body) {
    const std::string path = write_text(name, body);
    CHECK_THROWS_AS(cfg::Config::load(path), config_error);
  };
  expect_reject("unknown.cfg", "grating.pitch = 1 um\n");
  expect_reject("dup.cfg", "rock.points = 11\nrock.points = 21\n");
  expect_reject("noassign.cfg", "rock.points 11\n");
  expect_reject("emptykey.cfg", " = 11\n");
  CHECK_THROWS_AS(cfg::Config::load("/tmp/tribeam_io_test_missing.cfg"),
                  config_error);
}

TEST_CASE("length values require a recognized unit suffix") {
  cfg::Config c = cfg::Config::defaults();
  c.set("beam.wavelength", "1.7 nm");
  CHECK(c.length("beam.wavelength") == doctest::Approx(1.7e-9).epsilon(1e-12));
  c.set("beam.wavelength", "0.0017 um");
  CHECK(c.length("beam.wavelength") == doctest::Approx(1.7e-9).epsilon(1e-12));
  c.set("beam.wavelength", "0.0017 \xc2\xb5m");  // micro sign
  CHECK(c.length("beam.wavelength") == doctest::Approx(1.7e-9).epsilon(1e-12));
  c.set("grating.thickness", "0.091 mm");
  CHECK(c.length("grating.thickness") == doctest::Approx(91e-6).epsilon(1e-12));
  c.set("zernike.separation", "1 cm");
  CHECK(c.length("zernike.separation") == doctest::Approx(1e-2).epsilon(1e-12));
  c.set("zernike.beam_width", "0.001 m");
  CHECK(c.length("zernike.beam_width") == doctest::Approx(1e-3).epsilon(1e-12));

  c.set("beam.wavelength", "1.7");
  CHECK_THROWS_AS(c.length("beam.wavelength"), config_error);
  c.set("beam.wavelength", "1.7 furlong");
  CHECK_THROWS_AS(c.length("beam.wavelength"), config_error);
}

TEST_CASE("scalar accessors validate their text") {
  cfg::Config c = cfg::Config::defaults();
  c.set("solver.check", "true");
  CHECK(c.flag("solver.check"));
  c.set("solver.check", "off");
  CHECK_FALSE(c.flag("solver.check"));
  c.set("solver.check", "yes");
  CHECK_THROWS_AS(c.flag("solver.check"), config_error);

  c.set("rock.points", "2.5");
  CHECK_THROWS_AS(c.integer("rock.points"), config_error);
  c.set("beam.spread", "ten percent");
  CHECK_THROWS_AS(c.number("beam.spread"), config_error);
  c.set("solver.engine", "exact");
  CHECK_THROWS_AS(c.word("solver.engine", {"spectral", "rk4"}), config_error);
  CHECK_THROWS_AS(c.set("no.such_key", "1"), config_error);
  CHECK_THROWS_AS(c.raw("no.such_key"), config_error);
}

TEST_CASE("solver option bounds are enforced when options are built") {
  cfg::Config c = cfg::Config::defaults();
  c.set("solver.nodes", "0");
  CHECK_THROWS_AS(cfg::make_convolve_options(c), config_error);
  c.set("solver.nodes", "65");
  CHECK_THROWS_AS(cfg::make_convolve_options(c), config_error);
  c.set("solver.nodes", "7");
  c.set("solver.orders", "1");
  CHECK_THROWS_AS(cfg::make_convolve_options(c), config_error);
  c.set("solver.orders", "4");
  c.set("solver.steps", "0");
  CHECK_THROWS_AS(cfg::make_convolve_options(c), config_error);
}

TEST_CASE("repeatable reduce regions accumulate in order") {
  cfg::Config c = cfg::Config::defaults();
  CHECK(c.regions().empty());
  c.set("reduce.region", "background:0,0,51,1");
  c.set("reduce.region", "order=0:2,4,6,7");
  REQUIRE(c.regions().size() == 2);
  CHECK(c.regions()[0] == "background:0,0,51,1");
  CHECK(c.regions()[1] == "order=0:2,4,6,7");
}

TEST_CASE("emitted config reloads to an identical emission") {
  cfg::Config c = cfg::Config::defaults();
  c.set("grating.spacing", "0.75 um");
  c.set("solver.engine", "rk4");
  c.set("reduce.region", "background:0,0,51,1");
  c.set("reduce.region", "order=0:2,4,6,7");
  const std::string first = c.emit();
  const std::string path = write_text("emitted.cfg", first);
  const cfg::Config reloaded = cfg::Config::load(path);
  CHECK(reloaded.emit() == first);
  CHECK(reloaded.length("grating.spacing") == doctest::Approx(0.75e-6).epsilon(1e-12));
  REQUIRE(reloaded.regions().size() == 2);
  CHECK(reloaded.regions()[1] == "order=0:2,4,6,7");
}

}  // TEST_SUITE
