#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "fixtures.hpp"
#include "isocone/foliation.hpp"
#include "isocone/numerics.hpp"
#include "isocone/reference_profile.hpp"

using namespace isocone;

TEST_CASE("cap geometry on the parabola matches closed forms") {
  // f = x^2: center c = x^2 - 2x^2 = -x^2, radius r = x sqrt(1 + 4x^2)
  GeneratingFunction par;
  par.eval = [](double x) { return x * x; };
  par.deriv = [](double x) { return 2.0 * x; };
  par.deriv2 = [](double) { return 2.0; };
  const BodyOfRevolution body{1, par};
  for (double x : {0.4, 1.0, 3.0}) {
    const FoliationCap cap = cap_at(body, x);
    CHECK(cap.center_height == Catch::Approx(-x * x).epsilon(1e-14));
    CHECK(cap.radius ==
          Catch::Approx(x * std::sqrt(1.0 + 4.0 * x * x)).epsilon(1e-14));
    CHECK(cap.mean_curvature == Catch::Approx(1.0 / cap.radius).epsilon(1e-14));
  }
}

TEST_CASE("apex height derivative matches finite differences") {
  const BodyOfRevolution body{1, make_hyperbolic(1.0, 1.0)};
  auto apex = [&](double x) {
    const FoliationCap cap = cap_at(body, x);
    return cap.center_height + cap.radius;
  };
  for (double x : {0.2, 1.0, 7.0}) {
    const double h = 1e-6 * std::max(1.0, x);
    const double fd = (apex(x + h) - apex(x - h)) / (2.0 * h);
    CHECK(foliation_gprime(body, x) == Catch::Approx(fd).margin(1e-6));
  }
}

TEST_CASE("centers descend: c' = -x f'' within finite-difference error") {
  const BodyOfRevolution body{1, make_hyperbolic(1.0, 2.0)};
  for (double x : {0.5, 2.0, 9.0}) {
    const double h = 1e-6 * std::max(1.0, x);
    const double fd = (cap_at(body, x + h).center_height -
                       cap_at(body, x - h).center_height) /
                      (2.0 * h);
    const double closed = -x * body.profile.deriv2(x);
    CHECK(fd == Catch::Approx(closed).margin(1e-6));
    CHECK(closed <= 0.0);
  }
}

TEST_CASE("foliation threshold: interior sign change on the hinge body") {
  // g' < 0 near the bend at x0, positive far beyond it
  const BodyOfRevolution body{1, fixtures::make_smoothed_hinge(1.0, 5.0, 0.5)};
  const double xm = foliation_threshold(body);
  CHECK(xm > 5.0);
  CHECK(xm < 10.0);
  CHECK(foliation_gprime(body, xm * 0.999) < 0.0);
  CHECK(foliation_gprime(body, xm * 1.001) > 0.0);
  // beyond the threshold the whole probe ladder stays positive
  for (double x = xm * 1.01; x < 1e6; x *= 4.0)
    CHECK(foliation_gprime(body, x) > 0.0);
}

TEST_CASE("foliation threshold: everywhere-foliated bodies start at the "
          "bottom probe") {
  const BodyOfRevolution body{1, make_hyperbolic(1.0, 1.0)};
  const double xm = foliation_threshold(body);
  CHECK(xm <= 0.011);
  for (double x : {0.05, 0.5, 5.0}) CHECK(foliation_gprime(body, x) > 0.0);
}

TEST_CASE("foliation threshold: reported missing when g' never recovers") {
  GeneratingFunction f = fixtures::make_smoothed_hinge(1.0, 5e9, 5e8);
  f.domain_hint = 5e9;  // probe ladder ends inside the negative-g' region
  const BodyOfRevolution body{1, f};
  CHECK_THROWS_AS(foliation_threshold(body), ThresholdNotFoundError);
}

TEST_CASE("cap measures on cones match the sector closed forms") {
  // vertex-centered cap: volume = sigma rho^{n+1}/(n+1), perimeter = sigma rho^n
  for (int n : {1, 2, 3}) {
    for (double a : {0.5, 2.0}) {
      const BodyOfRevolution body{n, make_cone(a)};
      const double sigma = cone_sector_measure(a, n);
      for (double x : {0.7, 3.0}) {
        const FoliationCap cap = cap_at(body, x);
        const double rho = x * std::sqrt(1.0 + a * a);
        CHECK(cap.center_height == Catch::Approx(0.0).margin(1e-14));
        CHECK(cap.radius == Catch::Approx(rho).epsilon(1e-14));
        CHECK(cap.enclosed_volume ==
              Catch::Approx(sigma * std::pow(rho, n + 1) / (n + 1))
                  .epsilon(1e-10));
        CHECK(cap.cap_perimeter ==
              Catch::Approx(sigma * std::pow(rho, n)).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("cap measures on the half-space are hemispheres") {
  for (int n : {1, 2}) {
    const BodyOfRevolution body{n, fixtures::make_flat()};
    const FoliationCap cap = cap_at(body, 1.3);
    const double rho = 1.3;
    CHECK(cap.enclosed_volume ==
          Catch::Approx(0.5 * unit_ball_volume(n + 1) * std::pow(rho, n + 1))
              .epsilon(1e-10));
    CHECK(cap.cap_perimeter ==
          Catch::Approx(0.5 * unit_sphere_area(n + 1) * std::pow(rho, n))
              .epsilon(1e-10));
  }
}

TEST_CASE("chart sampling: volumes and perimeters grow, curvature falls") {
  const BodyOfRevolution body{2, make_hyperbolic(1.0, 1.0)};
  std::vector<double> stations;
  for (double x = 0.05; x <= 60.0; x *= 1.5) stations.push_back(x);
  const FoliationChart chart = sample_chart(body, stations);
  REQUIRE(chart.caps.size() == stations.size());
  for (std::size_t i = 1; i < chart.caps.size(); ++i) {
    CHECK(chart.caps[i].enclosed_volume >
          chart.caps[i - 1].enclosed_volume);
    CHECK(chart.caps[i].cap_perimeter > chart.caps[i - 1].cap_perimeter);
    CHECK(chart.caps[i].mean_curvature < chart.caps[i - 1].mean_curvature);
  }
}

TEST_CASE("chart sampling rejects stations below the threshold") {
  const BodyOfRevolution body{1, fixtures::make_smoothed_hinge(1.0, 5.0, 0.5)};
  const double xm = foliation_threshold(body);
  CHECK_THROWS_AS(sample_chart(body, {0.5 * xm, 2.0 * xm}), ConfigError);
}

TEST_CASE("cap lookup by volume inverts the cap volume map") {
  const BodyOfRevolution body{1, make_hyperbolic(1.0, 1.0)};
  for (double v : {0.01, 1.0, 50.0, 2000.0}) {
    const FoliationCap cap = cap_for_volume(body, v);
    CHECK(cap.enclosed_volume == Catch::Approx(v).epsilon(1e-9));
    // consistency with the forward map
    const FoliationCap again = cap_at(body, cap.station);
    CHECK(again.enclosed_volume == Catch::Approx(v).epsilon(1e-9));
  }
}

TEST_CASE("cap lookup on cones matches the sector radius") {
  const BodyOfRevolution body{2, make_cone(1.0)};
  const double sigma = cone_sector_measure(1.0, 2);
  const double v = 10.0;
  const FoliationCap cap = cap_for_volume(body, v);
  const double rho = std::pow(3.0 * v / sigma, 1.0 / 3.0);
  CHECK(cap.radius == Catch::Approx(rho).epsilon(1e-10));
  CHECK(cap.station == Catch::Approx(rho / std::sqrt(2.0)).epsilon(1e-10));
}

TEST_CASE("cap lookup refuses volumes below the bottom leaf") {
  const BodyOfRevolution body{1, fixtures::make_smoothed_hinge(1.0, 5.0, 0.5)};
  const double xm = foliation_threshold(body);
  const double bottom = cap_at(body, xm).enclosed_volume;
  CHECK_THROWS_AS(cap_for_volume(body, 0.5 * bottom), VolumeTooSmallError);
  // just above the bottom leaf is fine
  const FoliationCap cap = cap_for_volume(body, 1.01 * bottom);
  CHECK(cap.enclosed_volume == Catch::Approx(1.01 * bottom).epsilon(1e-9));
}
