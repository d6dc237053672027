#include <catch_amalgamated.hpp>

#include <cmath>

#include "oracles/geodesic_oracle.hpp"
#include "wanderlab/hypgeo.hpp"
#include "wanderlab/rng.hpp"

using namespace wanderlab;
using namespace wanderlab::hypgeo;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const double e = std::exp(1.0);

Complex random_point(Uniform& rng, const CanonicalDomain& d) {
  return std::visit(overloaded{[&](UnitDisk) { return std::polar(0.95 * std::sqrt(rng.next()), rng.between(0, 2 * pi)); },
                               [&](RightHalfPlane) { return Complex{rng.between(0.05, 5.0), rng.between(-5.0, 5.0)}; },
                               [&](HorizontalStrip) { return Complex{rng.between(-4.0, 4.0), rng.between(-1.4, 1.4)}; },
                               [&](const SymmetricAnnulus& a) {
                                 return std::polar(std::exp(rng.between(-0.9, 0.9) * a.log_R()), rng.between(-pi, pi));
                               }},
                    d);
}

template <class F>
void expect_error(Errc code, F&& f) {
  try {
    f();
    FAIL("expected " << to_string(code));
  } catch (const Error& err) {
    CHECK(err.code() == code);
  }
}

}  // namespace

TEST_CASE("density normalization", "[hypgeo]") {
  CHECK(density(UnitDisk{}, 0.0) == 2.0);
  CHECK(density(RightHalfPlane{}, 1.0) == 1.0);
  CHECK(density(HorizontalStrip{}, 0.0) == 1.0);
  const double core = density(SymmetricAnnulus(e), 1.0);
  CHECK_THAT(core, WithinRel(pi / 2, 1e-15));
  // 2 pi * core density = length of the core geodesic.
  CHECK_THAT(2 * pi * core, WithinRel(core_geodesic_length(e, 1), 1e-14));
}

TEST_CASE("density rejects points on or outside the boundary", "[hypgeo]") {
  expect_error(Errc::PointOutsideDomain, [] { density(UnitDisk{}, 1.0); });
  expect_error(Errc::PointOutsideDomain, [] { density(UnitDisk{}, Complex{1.0 - 1e-13, 0.0}); });
  expect_error(Errc::PointOutsideDomain, [] { density(RightHalfPlane{}, Complex{0.0, 3.0}); });
  expect_error(Errc::PointOutsideDomain, [] { density(HorizontalStrip{}, Complex{0.0, pi / 2}); });
  expect_error(Errc::PointOutsideDomain, [] { density(SymmetricAnnulus(2.0), 2.0); });
  expect_error(Errc::PointOutsideDomain, [] { density(SymmetricAnnulus(2.0), 0.5); });
  expect_error(Errc::InvalidParameter, [] { SymmetricAnnulus(1.0); });
}

TEST_CASE("distance examples", "[hypgeo]") {
  CHECK_THAT(distance(UnitDisk{}, 0.0, 0.5), WithinRel(std::log(3.0), 1e-14));
  CHECK_THAT(distance(RightHalfPlane{}, 1.0, 2.0), WithinRel(std::log(2.0), 1e-14));
  const double annulus = distance(SymmetricAnnulus(e * e), 1.0, e);
  CHECK_THAT(annulus, WithinAbs(std::log(std::tan(3 * pi / 8)), 1e-12));
  CHECK_THAT(annulus, WithinAbs(0.88137, 1e-5));
  // The radial segment realises it.
  const double radial = path_length({{1.0, e}, SymmetricAnnulus(e * e)});
  CHECK_THAT(radial, WithinAbs(annulus, 1e-9));
  CHECK(distance(UnitDisk{}, 0.3, 0.3) == 0.0);
}

TEST_CASE("lift_to_strip", "[hypgeo]") {
  CHECK(lift_to_strip(e, {0.0, 0.0}) == Complex{0.0, 0.0});
  CHECK_THAT(lift_to_strip(e, {0.0, 2 * pi}).real(), WithinRel(pi * pi, 1e-15));
  CHECK_THAT(SymmetricAnnulus(e).deck_spacing(), WithinRel(pi * pi, 1e-15));
  const Complex z = lift_to_strip(e * e, {1.0, 0.0});
  CHECK(z.real() == 0.0);
  CHECK_THAT(z.imag(), WithinRel(pi / 4, 1e-15));
  expect_error(Errc::PointOutsideDomain, [] { lift_to_strip(e, {1.0, 0.0}); });
  // Projection recovers the point, including the branch.
  const LogPolarPoint p{0.3, 5.0};
  const Complex s = lift_to_strip(2.0, p);
  const double c = SymmetricAnnulus(2.0).lift_scale();
  CHECK_THAT(s.real() / c, WithinRel(5.0, 1e-15));
  CHECK_THAT(s.imag() / c, WithinRel(0.3, 1e-15));
}

TEST_CASE("LogPolarPoint round trip", "[hypgeo]") {
  Uniform rng(11);
  for (int i = 0; i < 200; ++i) {
    const double u = rng.between(-700.0, 700.0);
    const double t = rng.between(-pi, pi);
    const LogPolarPoint p{u, t};
    const LogPolarPoint q = LogPolarPoint::from_complex(p.to_complex());
    CHECK_THAT(q.u, WithinAbs(u, 4 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(u))));
    CHECK_THAT(q.theta, WithinAbs(t, 1e-15));
  }
}

TEST_CASE("path_length", "[hypgeo]") {
  std::vector<Complex> diameter;
  for (int k = 0; k <= 64; ++k) diameter.push_back(0.5 * k / 64.0);
  CHECK_THAT(path_length({diameter, UnitDisk{}}), WithinAbs(std::log(3.0), 1e-8));

  std::vector<Complex> circle;
  const int n = 4096;
  for (int k = 0; k <= n; ++k) circle.push_back(std::polar(1.0, 2 * pi * k / n));
  CHECK_THAT(path_length({circle, SymmetricAnnulus(e * e)}), WithinAbs(pi * pi / 2, 1e-4));

  CHECK(path_length({{0.2, 0.2}, UnitDisk{}}) == 0.0);
  expect_error(Errc::InvalidParameter, [] { path_length({{0.2}, UnitDisk{}}); });
  // A chord through the hole of the annulus is rejected.
  expect_error(Errc::PointOutsideDomain, [] { path_length({{-1.0, 1.0}, SymmetricAnnulus(2.0)}); });
}

TEST_CASE("core_geodesic_length and degree_bound", "[hypgeo]") {
  CHECK_THAT(core_geodesic_length(e, 1), WithinRel(pi * pi, 1e-15));
  CHECK_THAT(core_geodesic_length(e, -3), WithinRel(3 * pi * pi, 1e-15));
  CHECK_THAT(core_geodesic_length(std::pow(e, 4), 1), WithinRel(pi * pi / 4, 1e-14));
  expect_error(Errc::InvalidWinding, [] { core_geodesic_length(e, 0); });

  CHECK_THAT(degree_bound(2, 8), WithinRel(3.0, 1e-15));
  CHECK(max_winding(2, 8) == 3);
  CHECK(degree_bound(5, 5) == 1.0);
  CHECK_THAT(degree_bound(4, 2), WithinRel(0.5, 1e-15));
  CHECK(max_winding(4, 2) == 0);
}

TEST_CASE("closed forms agree with geodesic quadrature", "[hypgeo][oracle]") {
  Uniform rng(7);
  const auto check_domain = [&](const CanonicalDomain& d, const oracle::Chart& chart) {
    for (int i = 0; i < 100; ++i) {
      const Complex z = random_point(rng, d);
      const Complex w = random_point(rng, d);
      CHECK_THAT(distance(d, z, w), WithinAbs(oracle::geodesic_length(d, chart, z, w), 1e-7));
    }
  };
  check_domain(UnitDisk{}, oracle::disk_chart());
  check_domain(RightHalfPlane{}, oracle::half_plane_chart());
  check_domain(HorizontalStrip{}, oracle::strip_chart());
  for (double R : {1.5, e, 5.0}) {
    const CanonicalDomain d{SymmetricAnnulus(R)};
    for (int i = 0; i < 100; ++i) {
      const Complex z = random_point(rng, d);
      const Complex w = random_point(rng, d);
      CHECK_THAT(distance(d, z, w), WithinAbs(oracle::annulus_geodesic_length(R, z, w), 1e-7));
    }
  }
}

TEST_CASE("metric axioms on samples", "[hypgeo][property]") {
  Uniform rng(3);
  for (const CanonicalDomain& d : {CanonicalDomain{UnitDisk{}}, CanonicalDomain{RightHalfPlane{}},
                                   CanonicalDomain{HorizontalStrip{}}, CanonicalDomain{SymmetricAnnulus(3.0)}}) {
    for (int i = 0; i < 200; ++i) {
      const Complex a = random_point(rng, d);
      const Complex b = random_point(rng, d);
      const Complex c = random_point(rng, d);
      CHECK(distance(d, a, b) == distance(d, b, a));
      CHECK(distance(d, a, c) <= distance(d, a, b) + distance(d, b, c) + 1e-12);
    }
  }
}

TEST_CASE("annulus isometries", "[hypgeo][property]") {
  Uniform rng(5);
  const SymmetricAnnulus A(2.5);
  for (int i = 0; i < 200; ++i) {
    const Complex z = random_point(rng, A);
    const Complex w = random_point(rng, A);
    const double d = distance(A, z, w);
    const Complex rot = std::polar(1.0, rng.between(0, 2 * pi));
    CHECK_THAT(distance(A, rot * z, rot * w), WithinAbs(d, 1e-12));
    CHECK_THAT(distance(A, 1.0 / z, 1.0 / w), WithinAbs(d, 1e-12));
  }
}

TEST_CASE("deck window does not change the annulus distance", "[hypgeo][property]") {
  Uniform rng(9);
  for (double R : {1.5, 5.0}) {
    const SymmetricAnnulus A(R);
    for (int i = 0; i < 100; ++i) {
      const Complex z = random_point(rng, A);
      const Complex w = random_point(rng, A);
      const double base = distance(A, z, w, 1);
      for (int K : {2, 4, 8}) CHECK(distance(A, z, w, K) == base);
    }
  }
}

TEST_CASE("Harnack and boundary-distance density bounds", "[hypgeo][property]") {
  Uniform rng(13);
  for (const CanonicalDomain& d :
       {CanonicalDomain{UnitDisk{}}, CanonicalDomain{RightHalfPlane{}}, CanonicalDomain{HorizontalStrip{}}}) {
    for (int i = 0; i < 300; ++i) {
      const Complex z = random_point(rng, d);
      const Complex w = random_point(rng, d);
      const double dist = distance(d, z, w);
      const double ratio = density(d, z) / density(d, w);
      CHECK(ratio >= std::exp(-2 * dist) * (1 - 1e-12));
      CHECK(ratio <= std::exp(2 * dist) * (1 + 1e-12));
      const double delta = boundary_distance(d, z);
      CHECK(density(d, z) >= 0.5 / delta * (1 - 1e-12));
      CHECK(density(d, z) <= 2.0 / delta * (1 + 1e-12));
    }
  }
}
