#include <catch_amalgamated.hpp>

#include <cmath>

#include "oracles/geodesic_oracle.hpp"
#include "wanderlab/rng.hpp"
#include "wanderlab/tower.hpp"

using namespace wanderlab;
using namespace wanderlab::tower;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const double e = std::exp(1.0);

template <class F>
void expect_error(Errc code, F&& f) {
  try {
    f();
    FAIL("expected " << to_string(code));
  } catch (const Error& err) {
    CHECK(err.code() == code);
  }
}

LogPolarPoint at(double modulus, double theta) { return LogPolarPoint::polar(modulus, theta); }

}  // namespace

TEST_CASE("PowerTower construction", "[tower]") {
  const auto t = PowerTower::constant(2.0, 2, 100);
  CHECK(t.cumulative(0) == 1);
  CHECK(t.cumulative(3) == 8);
  CHECK(t.cumulative(100) == BigInt(1) << 100);
  CHECK(t.degree(1) == 2);
  expect_error(Errc::StageOutOfRange, [&] { t.cumulative(101); });
  expect_error(Errc::InvalidParameter, [] { PowerTower(1.0, {2}); });
  expect_error(Errc::InvalidParameter, [] { PowerTower(2.0, {2, 0}); });
  CHECK_FALSE(PowerTower(2.0, {1, 1}).diverges());
}

TEST_CASE("iterate", "[tower]") {
  const auto t = PowerTower::constant(2.0, 2, 10);
  const TowerPoint p = iterate(t, {0.0, pi / 4}, 3);
  CHECK(p.nu == 0.0);
  CHECK_THAT(p.theta, WithinAbs(0.0, 1e-12));
  CHECK(p.stage == 3);

  const LogPolarPoint z{0.3, 1.0};
  const TowerPoint q = iterate(t, z, 0);
  CHECK(q.nu == 0.3 / std::log(2.0));
  CHECK_THAT(q.theta, WithinAbs(1.0, 1e-15));

  const PowerTower t32(e, {3, 2});
  const TowerPoint r = iterate(t32, {0.5, 0.1}, 2);
  CHECK_THAT(r.nu, WithinRel(0.5, 1e-15));
  CHECK_THAT(r.theta, WithinAbs(0.6, 1e-14));
  CHECK(r.stage == 2);

  expect_error(Errc::PointOutsideDomain, [&] { iterate(t, {std::log(2.0), 0.0}, 1); });
  expect_error(Errc::StageOutOfRange, [&] { iterate(t, {0.0, 0.0}, 11); });
  const auto long_tower = PowerTower::constant(2.0, 2, 70);
  expect_error(Errc::StageOutOfRange, [&] { iterate(long_tower, {0.0, 0.0}, 65); });
}

TEST_CASE("classify_pair", "[tower]") {
  CHECK(classify_pair(at(1.5, 0.0), at(1.5, pi / 3)).tag == PairClass::Tag::SameCircle);
  CHECK(classify_pair(at(1.2, 1.0), at(1.7, 1.0)).tag == PairClass::Tag::SameRay);
  CHECK(classify_pair(at(1.2, 0.0), at(1.7, 1.0)).tag == PairClass::Tag::Generic);
  // Angles agree modulo 2 pi.
  CHECK(classify_pair(at(1.2, 1.0), at(1.7, 1.0 + 2 * pi)).tag == PairClass::Tag::SameRay);
  expect_error(Errc::AmbiguousClassification, [] { classify_pair({0.0, 0.0}, {1e-3, 1e-3}, 1e-2); });
  CHECK(classify_pair({0.1, 0.2}, {0.1, 0.2}).tag == PairClass::Tag::SameCircle);
}

TEST_CASE("pair_distance matches the distance between actual power images", "[tower][oracle]") {
  const auto t = PowerTower::constant(2.0, 2, 6);
  Uniform rng(21);
  for (int i = 0; i < 40; ++i) {
    const LogPolarPoint z{rng.between(-0.6, 0.6), rng.between(-pi, pi)};
    const LogPolarPoint w{rng.between(-0.6, 0.6), rng.between(-pi, pi)};
    for (std::size_t n = 0; n <= 4; ++n) {
      const auto D = t.cumulative(n).convert_to<unsigned long>();
      const double want = oracle::power_image_distance(2.0, D, z.to_complex(), w.to_complex());
      CHECK_THAT(pair_distance(t, z, w, n), WithinAbs(want, 1e-9));
    }
  }
}

TEST_CASE("pair_distance at stage 0 is the annulus distance", "[tower]") {
  const auto t = PowerTower::constant(2.0, 2, 3);
  const LogPolarPoint z{0.2, 0.4};
  const LogPolarPoint w{-0.3, 2.9};
  CHECK_THAT(pair_distance(t, z, w, 0), WithinAbs(hypgeo::distance(t.base(), z.to_complex(), w.to_complex()), 1e-13));
}

TEST_CASE("same-ray pairs keep their distance", "[tower]") {
  const auto t = PowerTower::constant(2.0, 2, 20);
  const LogPolarPoint z = at(1.2, 1.0);
  const LogPolarPoint w = at(1.7, 1.0);
  const double d0 = hypgeo::distance(t.base(), z.to_complex(), w.to_complex());
  for (std::size_t n = 0; n <= 20; ++n) CHECK_THAT(pair_distance(t, z, w, n), WithinAbs(d0, 1e-10));
  CHECK_THAT(limit_distance(t, z, w), WithinAbs(d0, 1e-12));
}

TEST_CASE("same-circle pairs stay under the collapse bound", "[tower]") {
  const auto t = PowerTower::constant(2.0, 2, 20);
  const LogPolarPoint z = at(1.5, 0.0);
  const LogPolarPoint w = at(1.5, pi / 3);
  const double circle = hypgeo::curve_length(
      t.base(), [](double s) { return std::polar(1.5, s); }, [](double s) { return Complex{0, 1.5} * std::polar(1.0, s); },
      0.0, 2 * pi);
  for (std::size_t n = 0; n <= 20; ++n) {
    const double d = pair_distance(t, z, w, n);
    CHECK(d <= circle / std::ldexp(1.0, static_cast<int>(n)) * (1 + 1e-9));
    CHECK(d <= circle_collapse_bound(t, 1.5, n) * (1 + 1e-12));
  }
  CHECK(limit_distance(t, z, w) == 0.0);
}

TEST_CASE("circle_collapse_bound", "[tower]") {
  const PowerTower t(e, {2, 2, 2});
  CHECK_THAT(circle_collapse_bound(t, 1.0, 3), WithinRel(pi * pi / 8, 1e-14));
  CHECK(circle_collapse_bound(t, e * (1 - 1e-9), 0) > 1e8);
  expect_error(Errc::PointOutsideDomain, [&] { circle_collapse_bound(t, e, 0); });
}

TEST_CASE("limit_distance against the vertical-segment oracle", "[tower][oracle]") {
  const auto t = PowerTower::constant(2.0, 2, 48);
  Uniform rng(4);
  const double c = t.base().lift_scale();
  for (int i = 0; i < 50; ++i) {
    const LogPolarPoint z{rng.between(-0.6, 0.6), rng.between(-pi, pi)};
    const LogPolarPoint w{rng.between(-0.6, 0.6), rng.between(-pi, pi)};
    const double lim = limit_distance(t, z, w);
    CHECK_THAT(lim, WithinAbs(oracle::vertical_strip_length(c * z.u, c * w.u), 1e-10));
    CHECK_THAT(pair_distance(t, z, w, 40), WithinAbs(lim, 1e-6));
    PairDistanceOptions exact;
    exact.force_exact = true;
    CHECK_THAT(pair_distance(t, z, w, 40, exact), WithinAbs(lim, 1e-6));
  }
}

TEST_CASE("generic example pair", "[tower]") {
  const auto t = PowerTower::constant(2.0, 2, 48);
  const LogPolarPoint z = at(1.5, 0.0);
  const LogPolarPoint w = at(1.2, pi / 2);
  const double v = limit_distance(t, z, w);
  CHECK(v > 0.0);
  CHECK(v < hypgeo::distance(t.base(), z.to_complex(), w.to_complex()));
  CHECK(pair_distance_detail(t, z, w, 40).asymptotic);
  CHECK_THAT(pair_distance(t, z, w, 40), WithinAbs(v, 1e-6));
}

TEST_CASE("trichotomy_report verdicts", "[tower]") {
  const auto t = PowerTower::constant(2.0, 2, 20);
  const auto circle = trichotomy_report(t, at(1.5, 0.0), at(1.5, 2.0), 20);
  CHECK(circle.verdict == Verdict::Contracting);
  CHECK(circle.trace.entries.back().distance < 1e-4 * circle.trace.entries.front().distance);

  const auto ray = trichotomy_report(t, at(1.2, 1.0), at(0.7, 1.0), 20);
  CHECK(ray.verdict == Verdict::Isometric);
  CHECK(ray.trace.eventually_constant);

  const auto generic = trichotomy_report(t, at(1.3, 0.0), at(0.8, 2 * pi / 3), 20);
  CHECK(generic.verdict == Verdict::SemiContracting);
  CHECK(generic.trace.strictly_decreasing);
  CHECK_THAT(generic.trace.entries.back().distance, WithinAbs(generic.limit, 1e-5));

  expect_error(Errc::InvalidParameter, [&] { trichotomy_report(t, at(1.5, 0.0), at(1.5, 2.0), 0); });
  expect_error(Errc::InvalidParameter,
               [&] { trichotomy_report(PowerTower(2.0, {1, 1}), at(1.5, 0.0), at(1.5, 2.0), 2); });
}

TEST_CASE("h_value", "[tower]") {
  const auto t = PowerTower::constant(e * e * e, 2, 10);
  const LogPolarPoint z0 = at(e * e, 0.3);
  CHECK(h_value(t, z0, z0) == 1.0);
  CHECK_THAT(h_value(t, at(e, 1.0), z0), WithinRel(0.5, 1e-15));
  expect_error(Errc::DegenerateBasePoint, [&] { h_value(t, z0, at(1.0, 0.0)); });
  Uniform rng(8);
  for (int i = 0; i < 50; ++i) {
    const LogPolarPoint z{rng.between(-2.0, 2.0), rng.between(-pi, pi)};
    // Stage independence is exact; the normalized ratio may differ from
    // u_z / u_z0 in the last bits.
    const double h0 = h_value_at_stage(t, z, z0, 0);
    CHECK_THAT(h0, WithinRel(h_value(t, z, z0), 4 * std::numeric_limits<double>::epsilon()));
    for (std::size_t n = 1; n <= 10; ++n) CHECK(h_value_at_stage(t, z, z0, n) == h0);
  }
}

TEST_CASE("Schwarz-Pick monotonicity and the reverse-triangle bound", "[tower][property]") {
  const auto t = PowerTower::constant(2.0, 2, 20);
  Uniform rng(17);
  for (int i = 0; i < 100; ++i) {
    const LogPolarPoint z{rng.between(-0.6, 0.6), rng.between(-pi, pi)};
    const LogPolarPoint w{rng.between(-0.6, 0.6), rng.between(-pi, pi)};
    const auto trace = distance_trace(t, z, w, 20);
    for (std::size_t n = 0; n + 1 < trace.entries.size(); ++n) {
      CHECK(trace.entries[n + 1].distance <= trace.entries[n].distance + 1e-12);
    }
    for (const auto& entry : trace.entries) CHECK(entry.distance >= entry.lower_bound - 1e-12);
  }
}

TEST_CASE("pair classes are exclusive and exhaustive at tol 0", "[tower][property]") {
  Uniform rng(19);
  for (int i = 0; i < 200; ++i) {
    const LogPolarPoint z{rng.between(-0.6, 0.6), rng.between(-pi, pi)};
    const LogPolarPoint circle{z.u, rng.between(-pi, pi)};
    const LogPolarPoint ray{rng.between(-0.6, 0.6), z.theta};
    const LogPolarPoint other{rng.between(-0.6, 0.6), rng.between(-pi, pi)};
    CHECK(classify_pair(z, circle).tag == PairClass::Tag::SameCircle);
    CHECK(classify_pair(z, ray).tag == PairClass::Tag::SameRay);
    CHECK(classify_pair(z, other).tag == PairClass::Tag::Generic);
  }
}

TEST_CASE("collision pairs land on the same point", "[tower][property]") {
  const auto t = PowerTower::constant(2.0, 2, 30);
  Uniform rng(23);
  for (int i = 0; i < 100; ++i) {
    const std::size_t k = 1 + static_cast<std::size_t>(rng.next() * 10);
    const double Dk = t.cumulative_double(k);
    const double j = std::floor(rng.next() * Dk);
    const LogPolarPoint z{rng.between(-0.6, 0.6), rng.between(0.0, 2 * pi)};
    const LogPolarPoint w{z.u, z.theta + 2 * pi * j / Dk};
    const TowerPoint a = iterate(t, z, k);
    const TowerPoint b = iterate(t, w, k);
    CHECK(a.nu == b.nu);
    // Angle tracking multiplies the input rounding by D_k.
    const double budget = 4.0 * Dk * 2 * pi * std::numeric_limits<double>::epsilon() * 4;
    CHECK(angular_gap(a.theta, b.theta) <= budget);
    CHECK(pair_distance(t, z, w, k) <= 1e-9);
  }
}
