#include <boost/math/special_functions/airy.hpp>
#include <cmath>
#include <limits>
#include <sstream>

#include "badlands/airy.hpp"
#include "badlands/errors.hpp"
#include "badlands/gravity.hpp"
#include "doctest.h"

using namespace badlands;

TEST_SUITE("gravity") {
  TEST_CASE("Ai matches an independent implementation") {
    for (double x = -30.0; x <= 12.0; x += 0.173) {
      const double ref = boost::math::airy_ai(x);
      CAPTURE(x);
      CHECK(std::abs(airy_ai(x) - ref) < 1e-12 + 1e-10 * std::abs(ref));
    }
    CHECK(airy_ai(0.0) == doctest::Approx(0.355028053887817239).epsilon(1e-15));
  }

  TEST_CASE("Ai zeros match an independent root finder") {
    for (int n = 1; n <= 20; ++n) {
      const double z = airy_zero(n);
      CAPTURE(n);
      CHECK(std::abs(z - boost::math::airy_ai_zero<double>(n)) < 1e-9);
      CHECK(std::abs(airy_ai(z)) < 1e-12);
    }
    CHECK(airy_zero(1) == doctest::Approx(-2.338107410459767).epsilon(1e-14));
    CHECK_THROWS_AS(airy_zero(0), DomainError);
  }

  TEST_CASE("gravitational scales for hydrogen at standard gravity") {
    const GravityConfig cfg;
    CHECK(cfg.weight() * 1e9 == doctest::Approx(102.5).epsilon(0.005));
    CHECK(cfg.length() == doctest::Approx(5870.0).epsilon(0.01));
    CHECK(gbs_energy(cfg, 1) == doctest::Approx(1.407).epsilon(0.01));
  }

  TEST_CASE("energies follow the Airy-zero quantization") {
    const GravityConfig cfg;
    for (int n = 1; n <= 5; ++n) {
      const double x = -gbs_energy(cfg, n) / (cfg.weight() * cfg.length() * 1e3);
      CHECK(std::abs(boost::math::airy_ai(x)) < 1e-9);
    }
  }

  TEST_CASE("energies scale as g^(2/3) and lengths as g^(-1/3)") {
    GravityConfig a, b;
    b.g_bar = 8 * a.g_bar;
    CHECK(gbs_energy(b, 3) / gbs_energy(a, 3) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(b.length() / a.length() == doctest::Approx(0.5).epsilon(1e-12));
  }

  TEST_CASE("scattering-length shift and lifetime") {
    const GravityConfig cfg;
    const std::complex<double> a(0.0, -30.0);
    const auto e = shifted_energy(1.407, a, cfg);
    CHECK(e.real() == doctest::Approx(1.407));
    CHECK(e.imag() == doctest::Approx(-3.08e-3).epsilon(0.005));
    CHECK(gbs_lifetime(a, cfg) == doctest::Approx(0.107).epsilon(0.005));
    // tau |Im a| = hbar / (2 m g) independent of a.
    CHECK(gbs_lifetime({1.0, -7.0}, cfg) * 7.0 == doctest::Approx(gbs_lifetime(a, cfg) * 30.0).epsilon(1e-14));
    CHECK(std::isinf(gbs_lifetime({-3.0, 0.0}, cfg)));
    CHECK_THROWS_AS(shifted_energy(1.0, {0.0, 1.0}, cfg), DomainError);
    GravityConfig half;
    half.g_bar = cfg.g_bar / 2;
    CHECK(gbs_lifetime(a, half) == doctest::Approx(2 * gbs_lifetime(a, cfg)).epsilon(1e-14));
  }

  TEST_CASE("bound states share the width") {
    const GravityConfig cfg;
    const auto states = bound_states(cfg, {0.5, -25.0}, 4);
    REQUIRE(states.size() == 4);
    for (std::size_t i = 0; i < states.size(); ++i) {
      CHECK(states[i].n == static_cast<int>(i) + 1);
      CHECK(states[i].energy_shifted.imag() == doctest::Approx(states[0].energy_shifted.imag()));
      if (i > 0) CHECK(states[i].energy_ideal > states[i - 1].energy_ideal);
    }
  }

  TEST_CASE("lifetime outputs") {
    const std::vector<LifetimeRow> rows{{"perfect", 0.0, {0.0, -30.0}, 0.107}, {"odd", 0.5, {1.0, 0.0},
                                                                                 std::numeric_limits<double>::infinity()}};
    std::ostringstream csv, table;
    write_lifetimes_csv(csv, rows);
    write_lifetimes_table(table, rows);
    CHECK(csv.str().rfind("material,porosity,re_a_nm,im_a_nm,lifetime_s\n", 0) == 0);
    CHECK(csv.str().find(",inf\n") != std::string::npos);
    CHECK(table.str().find("0.11") != std::string::npos);
    CHECK(table.str().find("stable") != std::string::npos);
  }
}
