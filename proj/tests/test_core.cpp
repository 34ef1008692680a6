#include <cmath>
#include <numbers>
#include <stdexcept>

#include "doctest.h"
#include "tribeam/core.hpp"

using namespace tribeam;

TEST_SUITE("core") {

TEST_CASE("bragg angle matches direct evaluation") {
  CHECK(bragg_angle(1.7e-9, 1e-6) == doctest::Approx(8.5000001024e-4).epsilon(1e-9));
  CHECK(bragg_angle(1.7e-9, 1e-6) * 1e3 == doctest::Approx(0.850).epsilon(1e-3));
  CHECK(bragg_angle(8e-9, 0.5e-6) * 1e3 == doctest::Approx(8.0).epsilon(1e-4));
  CHECK(bragg_angle(1e-15, 1e-6) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("bragg angle rejects evanescent first order") {
  CHECK_THROWS_AS(bragg_angle(2e-6, 1e-6), std::invalid_argument);
  CHECK_THROWS_AS(bragg_angle(3e-6, 1e-6), std::invalid_argument);
  CHECK_THROWS_AS(bragg_angle(-1e-9, 1e-6), std::invalid_argument);
}

TEST_CASE("bragg angle decreases with spacing") {
  double prev = bragg_angle(1.7e-9, 0.4e-6);
  for (double spacing = 0.5e-6; spacing < 3e-6; spacing += 0.25e-6) {
    const double cur = bragg_angle(1.7e-9, spacing);
    CHECK(cur < prev);
    prev = cur;
  }
}

TEST_CASE("effective thickness") {
  CHECK(effective_thickness(91e-6, 0.0) == 91e-6);
  CHECK(effective_thickness(91e-6, 56.0 * std::numbers::pi / 180.0) ==
        doctest::Approx(162.7e-6).epsilon(5e-4));
  CHECK(effective_thickness(100e-6, 60.0 * std::numbers::pi / 180.0) ==
        doctest::Approx(200e-6).epsilon(1e-12));
  CHECK_THROWS_AS(effective_thickness(91e-6, std::numbers::pi / 2), std::invalid_argument);
  CHECK_THROWS_AS(effective_thickness(91e-6, -std::numbers::pi / 2), std::invalid_argument);
}

TEST_CASE("effective thickness is even and grows with |tilt|") {
  double prev = effective_thickness(50e-6, 0.0);
  for (double deg = 5.0; deg < 90.0; deg += 5.0) {
    const double z = deg * std::numbers::pi / 180.0;
    const double cur = effective_thickness(50e-6, z);
    CHECK(cur > prev);
    CHECK(effective_thickness(50e-6, -z) == cur);
    prev = cur;
  }
}

TEST_CASE("index modulation from material contrast") {
  MaterialModulation zero;
  zero.scattering_length = 5e-15;
  zero.density_modulation = 0.0;
  CHECK(index_modulation(1.7e-9, zero) == 0.0);

  MaterialModulation m;
  m.sld_modulation = 1.0e13;
  CHECK(index_modulation(1.7e-9, m) == doctest::Approx(4.60e-6).epsilon(1e-3));
  CHECK(index_modulation(8e-9, m) == doctest::Approx(1.02e-4).epsilon(1e-2));
  CHECK(index_modulation(8e-9, m) / index_modulation(1.7e-9, m) ==
        doctest::Approx((8.0 / 1.7) * (8.0 / 1.7)).epsilon(1e-12));
}

TEST_CASE("index modulation is exactly quadratic in wavelength") {
  MaterialModulation m;
  m.scattering_length = 4.2e-15;
  m.density_modulation = 2.4e27;
  for (double lam = 0.5e-9; lam < 9e-9; lam *= 1.9) {
    CHECK(index_modulation(2.0 * lam, m) == 4.0 * index_modulation(lam, m));
  }
}

TEST_CASE("index modulation allows negative contrast, rejects junk") {
  MaterialModulation m;
  m.sld_modulation = -1.0e13;
  CHECK(index_modulation(1.7e-9, m) == doctest::Approx(-4.60e-6).epsilon(1e-3));
  MaterialModulation bad;
  bad.sld_modulation = std::nan("");
  CHECK_THROWS_AS(index_modulation(1.7e-9, bad), std::invalid_argument);
  CHECK_THROWS_AS(index_modulation(0.0, m), std::invalid_argument);
}

TEST_CASE("material parts must agree with the combined product") {
  MaterialModulation m;
  m.scattering_length = 5e-15;
  m.density_modulation = 2e27;
  m.sld_modulation = 1.0e13;  // matches 5e-15 * 2e27
  CHECK(m.sld() == doctest::Approx(1.0e13).epsilon(1e-12));
  m.sld_modulation = 2.0e13;
  CHECK_THROWS_AS(m.validate(), std::invalid_argument);
}

TEST_CASE("klein-cook regime parameter") {
  CHECK(klein_cook(1.7e-9, 163e-6, 1e-6) == doctest::Approx(1.74).epsilon(2e-3));
  CHECK(klein_cook(8e-9, 100e-6, 0.5e-6) == doctest::Approx(20.1).epsilon(2e-3));
  CHECK(klein_cook(1.7e-9, 163e-6, 1e3) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(klein_cook(1.7e-9, 163e-6, 1e-6, 2.0) ==
        doctest::Approx(0.5 * klein_cook(1.7e-9, 163e-6, 1e-6)).epsilon(1e-12));
}

TEST_CASE("grating and beam validation") {
  Grating g;
  CHECK_NOTHROW(g.validate());
  g.spacing = 0.0;
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
  g = Grating{};
  g.index_modulation = -1e-6;
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
  g = Grating{};
  g.tilt = std::numbers::pi / 2;
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);

  Beam b;
  CHECK_NOTHROW(b.validate());
  b.relative_spread = 1.0;
  CHECK_THROWS_AS(b.validate(), std::invalid_argument);
  b = Beam{};
  b.divergence = -1e-3;
  CHECK_THROWS_AS(b.validate(), std::invalid_argument);
}

}  // TEST_SUITE
