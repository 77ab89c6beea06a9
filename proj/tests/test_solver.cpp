#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "fixtures.hpp"
#include "isocone/solver.hpp"

using namespace isocone;

TEST_CASE("solve_volume on cones reproduces the sector profile") {
  for (int n : {1, 2}) {
    for (double a : {0.5, 2.0}) {
      const BodyOfRevolution body{n, make_cone(a)};
      const ReferenceProfile ref = make_cone_profile(a, n);
      for (double v : {1.0, 25.0}) {
        const IsoperimetricEstimate est = solve_volume(body, v);
        CHECK(est.perimeter_upper_bound ==
              Catch::Approx(ref.perimeter(v)).epsilon(1e-9));
        CHECK(est.volume == v);
      }
    }
  }
}

TEST_CASE("shot route alone matches volume and orthogonality targets") {
  const BodyOfRevolution body{1, make_hyperbolic(1.0, 1.0)};
  for (double v : {0.05, 2.0, 300.0}) {
    const OrthogonalShot os = solve_shot_for_volume(body, v);
    CHECK(os.shot.enclosed_volume == Catch::Approx(v).epsilon(1e-8));
    CHECK(std::abs(os.shot.boundary_angle_defect) < 1e-8);
    // start height is the apex of the matching leaf: below 1/H, above wall
    CHECK(os.t0 <= 1.0 / os.shot.mean_curvature * (1.0 + 1e-9));
    CHECK(os.t0 > 0.0);
  }
}

TEST_CASE("profile scaling law: lambda^n covariance of the perimeter") {
  // I_{lambda C}(lambda^{n+1} v) = lambda^n I_C(v)
  for (int n : {1, 2}) {
    const BodyOfRevolution body{n, make_hyperbolic(1.0, 1.0)};
    const double v0 = 3.0;
    const double p0 = solve_volume(body, v0).perimeter_upper_bound;
    for (double lambda : {2.0, 3.0}) {
      const BodyOfRevolution scaled = scale_body(body, lambda);
      const double v1 = std::pow(lambda, n + 1) * v0;
      const double p1 = solve_volume(scaled, v1).perimeter_upper_bound;
      CHECK(p1 == Catch::Approx(std::pow(lambda, n) * p0).epsilon(1e-7));
    }
  }
}

TEST_CASE("sample_profile demands increasing volumes") {
  const BodyOfRevolution body{1, make_hyperbolic(1.0, 1.0)};
  CHECK_THROWS_AS(sample_profile(body, {1.0, 1.0}), ConfigError);
  CHECK_THROWS_AS(sample_profile(body, {2.0, 1.0}), ConfigError);
}

TEST_CASE("verify_asymptotics accepts the cone's flat ratio curve") {
  const BodyOfRevolution body{1, make_cone(1.0)};
  const ConeOfRevolution cone{1, 1.0, 0.0};
  std::vector<double> volumes;
  for (double v = 1.0; v <= 1.0e4 + 1.0; v *= 10.0) volumes.push_back(v);
  const ProfileCurve curve = sample_profile(body, volumes);
  REQUIRE(curve.failures.empty());
  const AsymptoticsReport rep = verify_asymptotics(curve, cone);
  CHECK(rep.trend_ok);
  CHECK(rep.final_margin_ok);
  CHECK(rep.final_ratio == Catch::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("verify_asymptotics rejects an estimate below the cone bound") {
  ProfileCurve curve;
  curve.n = 1;
  const ConeOfRevolution cone{1, 1.0, 0.0};
  const ReferenceProfile ref = make_cone_profile(1.0, 1);
  for (double v : {1.0, 10.0, 100.0, 1000.0, 10000.0}) {
    ProfileSample s;
    s.volume = v;
    s.estimate.volume = v;
    s.estimate.perimeter_upper_bound = ref.perimeter(v);
    curve.samples.push_back(s);
  }
  curve.samples[2].estimate.perimeter_upper_bound *= 0.9;  // dip below
  CHECK_THROWS_AS(verify_asymptotics(curve, cone), LowerBoundViolatedError);
}

TEST_CASE("verify_asymptotics needs a three-decade span") {
  const BodyOfRevolution body{1, make_cone(1.0)};
  const ConeOfRevolution cone{1, 1.0, 0.0};
  const ProfileCurve curve = sample_profile(body, {1.0, 5.0, 20.0});
  CHECK_THROWS_AS(verify_asymptotics(curve, cone), ConfigError);
}

TEST_CASE("curvature diagnostic is constant on cones and flags outliers") {
  const BodyOfRevolution body{2, make_cone(1.0)};
  std::vector<double> volumes{1.0, 10.0, 100.0};
  ProfileCurve curve = sample_profile(body, volumes);
  const CurvatureBoundReport rep = verify_mean_curvature_bound(curve);
  CHECK(rep.bounded);
  CHECK(rep.max_value == Catch::Approx(rep.median_value).epsilon(1e-9));

  curve.samples[0].estimate.mean_curvature *= 100.0;  // doctored outlier
  CHECK_FALSE(verify_mean_curvature_bound(curve).bounded);
}

TEST_CASE("large-volume caps: dual routes agree on perimeter and circle") {
  const BodyOfRevolution body{1, make_hyperbolic(1.0, 1.0)};
  const CapAgreementReport rep =
      verify_large_volume_caps(body, {10.0, 100.0, 1000.0});
  REQUIRE(rep.rows.size() == 3);
  for (const auto& row : rep.rows) {
    CHECK_FALSE(row.out_of_regime);
    CHECK(row.circle_match);
    CHECK(row.relative_gap < 1e-6);
  }
  CHECK(rep.gaps_decreasing);
  CHECK(rep.final_gap <= 1e-4);
}

TEST_CASE("large-volume caps: below-regime rows are marked, not solved") {
  const BodyOfRevolution body{1, fixtures::make_smoothed_hinge(1.0, 5.0, 0.5)};
  const double bottom =
      cap_at(body, foliation_threshold(body)).enclosed_volume;
  const CapAgreementReport rep = verify_large_volume_caps(
      body, {0.5 * bottom, 4.0 * bottom, 40.0 * bottom});
  REQUIRE(rep.rows.size() == 3);
  CHECK(rep.rows[0].out_of_regime);
  CHECK_FALSE(rep.rows[1].out_of_regime);
  CHECK(rep.rows[1].circle_match);
  CHECK(rep.rows[2].circle_match);
}

TEST_CASE("large-volume caps: unreachable tolerance is reported") {
  const BodyOfRevolution body{1, make_hyperbolic(1.0, 1.0)};
  CHECK_THROWS_AS(verify_large_volume_caps(body, {10.0, 100.0}, 1e-16),
                  CapMismatchError);
}

TEST_CASE("estimates prefer the closed-form cap on ties") {
  const BodyOfRevolution body{1, make_hyperbolic(1.0, 1.0)};
  const IsoperimetricEstimate est = solve_volume(body, 7.0);
  CHECK(est.mechanism == Mechanism::foliation_cap);
  REQUIRE(est.cap_station.has_value());
  const FoliationCap cap = cap_at(body, *est.cap_station);
  CHECK(cap.enclosed_volume == Catch::Approx(7.0).epsilon(1e-8));
}
