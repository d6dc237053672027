#pragma once

// Distance from an orbit to the outer boundary of the domains it visits:
// topological hulls, delta traces with witnesses, the finite-trace
// convergence call, and the Harnack, shadowing and loop-length bounds.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "wanderlab/errors.hpp"
#include "wanderlab/hypgeo.hpp"
#include "wanderlab/polyline.hpp"
#include "wanderlab/regions.hpp"
#include "wanderlab/tower.hpp"
#include "wanderlab/winding.hpp"

namespace wanderlab::boundary {

struct HullDomain {
  regions::Shape base;
  regions::Shape hull;

  /// Distance from z to the hull boundary.
  double boundary_distance(Complex z) const { return regions::nearest_boundary_point(hull, z).distance; }
};

/// The region together with its bounded complementary components.
inline HullDomain topological_hull(const regions::Shape& s) {
  HullDomain out{s, s};
  if (const auto* a = std::get_if<regions::Annulus>(&s)) {
    out.hull = regions::Disk{a->center, a->outer};
  } else if (const auto* p = std::get_if<regions::PolygonWithHoles>(&s)) {
    out.hull = regions::PolygonWithHoles{p->outer, {}};
  } else if (std::holds_alternative<regions::VerticalLine>(s)) {
    fail(Errc::UnsupportedRegion, "a line has no interior");
  }
  return out;
}

inline HullDomain topological_hull(const regions::Region& r) { return topological_hull(r.shape); }
inline HullDomain topological_hull(const hypgeo::CanonicalDomain& d) {
  return topological_hull(regions::from_canonical(d));
}

struct BoundaryEntry {
  long n = 0;
  double delta = 0.0;
  Complex witness;
  Complex orbit;
};

struct BoundaryTrace {
  std::vector<BoundaryEntry> entries;
};

/// Domains U_n, maps U_n -> U_{n+1}, and the canonical domain carrying
/// the hyperbolic metric of U_0.
struct SyntheticSystem {
  std::string label;
  std::function<HullDomain(long)> domain;
  std::function<Complex(long, Complex)> map;
  hypgeo::CanonicalDomain base_metric;
};

/// Orbit of z0 with delta_n = dist(f^n z0, boundary of the hull of U_n).
inline BoundaryTrace delta_sequence(const SyntheticSystem& sys, Complex z0, long N) {
  if (N < 0) fail(Errc::InvalidParameter, "N must be >= 0");
  BoundaryTrace trace;
  Complex z = z0;
  for (long n = 0; n <= N; ++n) {
    const HullDomain U = sys.domain(n);
    if (!is_finite(z) || !(regions::signed_clearance(U.base, z) > 0.0)) {
      fail(Errc::OrbitEscapedDomain, sys.label + ": iterate " + std::to_string(n) + " left U_" + std::to_string(n));
    }
    const auto near = regions::nearest_boundary_point(U.hull, z);
    trace.entries.push_back({n, near.distance, near.point, z});
    if (n < N) z = sys.map(n, z);
  }
  return trace;
}

enum class Case { A, B, C };

inline std::string to_string(Case c) {
  switch (c) {
    case Case::A: return "a";
    case Case::B: return "b";
    case Case::C: return "c";
  }
  return "?";
}

struct ConvergenceCall {
  Case kind = Case::A;
  double threshold = 1e-6;
  std::size_t tail_start = 0;
  /// Tail stages with delta below the threshold.
  std::vector<long> approaching;
  /// Tail stages with delta above threshold * separation.
  std::vector<long> bounded_below;
};

struct ConvergenceOptions {
  double threshold = 1e-6;
  double tail_fraction = 0.25;
  /// Factor between the two subsequences of case (b).
  double separation = 1e3;
};

/// Empirical case on the last quarter of a finite trace; Inconclusive when
/// the tail supports no call.
inline ConvergenceCall convergence_class(const BoundaryTrace& trace, ConvergenceOptions opts = {}) {
  const auto& e = trace.entries;
  if (e.size() < 10) fail(Errc::InsufficientData, "need at least 10 trace entries");
  ConvergenceCall call;
  call.threshold = opts.threshold;
  const auto tail_len = std::max<std::size_t>(
      3, static_cast<std::size_t>(std::ceil(opts.tail_fraction * static_cast<double>(e.size()))));
  call.tail_start = e.size() - tail_len;
  double tail_min = std::numeric_limits<double>::infinity();
  double tail_max = 0.0;
  for (std::size_t i = call.tail_start; i < e.size(); ++i) {
    const double d = e[i].delta;
    tail_min = std::min(tail_min, d);
    tail_max = std::max(tail_max, d);
    if (d < opts.threshold) call.approaching.push_back(e[i].n);
    if (d > opts.threshold * opts.separation) call.bounded_below.push_back(e[i].n);
  }
  if (!call.approaching.empty() && !call.bounded_below.empty()) {
    call.kind = Case::B;
    return call;
  }
  if (tail_max < opts.threshold) {
    call.kind = Case::C;
    return call;
  }
  if (tail_min > opts.threshold) {
    // Least-squares slope of log delta over the tail; a decay that would
    // cross the threshold within one more trace length is not case (a).
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const auto k = static_cast<double>(tail_len);
    for (std::size_t i = call.tail_start; i < e.size(); ++i) {
      const double x = static_cast<double>(e[i].n);
      const double y = std::log(e[i].delta);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double denom = k * sxx - sx * sx;
    const double slope = denom > 0.0 ? (k * sxy - sx * sy) / denom : 0.0;
    const double horizon = static_cast<double>(e.size());
    const double projected = std::log(e.back().delta) + slope * horizon;
    if (!std::isfinite(projected) || projected > std::log(opts.threshold)) {
      call.kind = Case::A;
      return call;
    }
  }
  fail(Errc::Inconclusive, "trace tail supports none of the cases at threshold " + std::to_string(opts.threshold));
}

struct ShadowingEntry {
  long n = 0;
  double separation = 0.0;
  double bound = 0.0;
  double witness_gap = 0.0;
};

struct ShadowingReport {
  double C = 0.0;
  double factor = 0.0;
  std::vector<ShadowingEntry> entries;
};

/// |f^n z0 - f^n z1| <= 2 C e^{2C} delta_n with C = d_{U_0}(z0, z1), and
/// |f^n z1 - w_n| <= |f^n z1 - f^n z0| + delta_n.
inline ShadowingReport shadowing_check(const SyntheticSystem& sys, Complex z0, Complex z1, long N) {
  ShadowingReport rep;
  rep.C = hypgeo::distance(sys.base_metric, z0, z1);
  rep.factor = 2.0 * rep.C * std::exp(2.0 * rep.C);
  const BoundaryTrace t0 = delta_sequence(sys, z0, N);
  const BoundaryTrace t1 = delta_sequence(sys, z1, N);
  for (std::size_t i = 0; i < t0.entries.size(); ++i) {
    const auto& a = t0.entries[i];
    const Complex b = t1.entries[i].orbit;
    ShadowingEntry s{a.n, std::abs(a.orbit - b), rep.factor * a.delta, std::abs(b - a.witness)};
    const double slack = 1e-12 * std::max({1.0, std::abs(a.orbit), std::abs(b), std::abs(a.witness), a.delta});
    if (s.separation > s.bound * (1.0 + 1e-12) + slack) {
      fail(Errc::BoundViolated, sys.label + ": separation " + std::to_string(s.separation) + " exceeds " +
                                    std::to_string(s.bound) + " at stage " + std::to_string(a.n));
    }
    if (s.witness_gap > s.separation + a.delta + slack) {
      fail(Errc::BoundViolated, sys.label + ": witness shadowing fails at stage " + std::to_string(a.n));
    }
    rep.entries.push_back(s);
  }
  return rep;
}

struct HarnackReport {
  double distance = 0.0;
  double ratio = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  /// rho(z) * dist(z, boundary), which lies in [1/2, 2].
  double koebe_z = 0.0;
  double koebe_w = 0.0;
};

/// e^{-2d} <= rho(z)/rho(w) <= e^{2d} on a simply connected canonical domain.
inline HarnackReport harnack_check(const hypgeo::CanonicalDomain& domain, Complex z, Complex w) {
  if (!hypgeo::is_simply_connected(domain)) fail(Errc::UnsupportedRegion, "Harnack sandwich needs a simply connected domain");
  HarnackReport rep;
  rep.distance = hypgeo::distance(domain, z, w);
  rep.ratio = hypgeo::density(domain, z) / hypgeo::density(domain, w);
  rep.lower = std::exp(-2.0 * rep.distance);
  rep.upper = std::exp(2.0 * rep.distance);
  rep.koebe_z = hypgeo::density(domain, z) * hypgeo::boundary_distance(domain, z);
  rep.koebe_w = hypgeo::density(domain, w) * hypgeo::boundary_distance(domain, w);
  constexpr double tol = 1e-12;
  if (rep.ratio < rep.lower * (1.0 - tol) || rep.ratio > rep.upper * (1.0 + tol)) {
    fail(Errc::BoundViolated, "density ratio " + std::to_string(rep.ratio) + " outside the Harnack sandwich");
  }
  for (double k : {rep.koebe_z, rep.koebe_w}) {
    if (k < 0.5 * (1.0 - tol) || k > 2.0 * (1.0 + tol)) {
      fail(Errc::BoundViolated, "rho * dist = " + std::to_string(k) + " outside [1/2, 2]");
    }
  }
  return rep;
}

struct LoopLengthReport {
  double hyperbolic_length = 0.0;
  double euclidean_length = 0.0;
  double max_hull_distance = 0.0;
  double lower_bound = 0.0;
};

/// Hyperbolic length >= Euclidean length / (2 max distance to the hull boundary).
inline LoopLengthReport loop_length_bound(const SampledCurve& curve, const HullDomain& hull,
                                          const hypgeo::CanonicalDomain& domain) {
  if (curve.points.size() < 2) fail(Errc::InvalidParameter, "curve needs at least two samples");
  LoopLengthReport rep;
  rep.hyperbolic_length = hypgeo::path_length({curve.points, domain});
  rep.euclidean_length = geometry::euclidean_length(curve.points);
  double longest = 0.0;
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    rep.max_hull_distance = std::max(rep.max_hull_distance, hull.boundary_distance(curve.points[i]));
    if (i + 1 < curve.points.size()) longest = std::max(longest, std::abs(curve.points[i + 1] - curve.points[i]));
  }
  // Distance to the boundary is 1-Lipschitz, so it can exceed the vertex
  // maximum by at most half a segment.
  rep.max_hull_distance += 0.5 * longest;
  rep.lower_bound = rep.euclidean_length / (2.0 * rep.max_hull_distance);
  if (rep.hyperbolic_length < rep.lower_bound * (1.0 - 1e-9)) {
    fail(Errc::BoundViolated, "hyperbolic length " + std::to_string(rep.hyperbolic_length) + " below " +
                                  std::to_string(rep.lower_bound));
  }
  return rep;
}

/// Reference systems.
namespace systems {

/// T_a(z) = (z - a) / (1 - conj(a) z).
inline Complex mobius(Complex a, Complex z) { return (z - a) / (1.0 - std::conj(a) * z); }
inline Complex mobius_inverse(Complex a, Complex z) { return (z + a) / (1.0 + std::conj(a) * z); }

/// Unit disks with automorphisms carrying 0 along a_n = 1 - 2^{-n}.
inline SyntheticSystem disk_to_boundary() {
  const auto a = [](long n) { return Complex{1.0 - std::ldexp(1.0, static_cast<int>(-n)), 0.0}; };
  return {"disk-mobius",
          [](long) { return topological_hull(hypgeo::CanonicalDomain{hypgeo::UnitDisk{}}); },
          [a](long n, Complex z) { return mobius_inverse(a(n + 1), mobius(a(n), z)); },
          hypgeo::UnitDisk{}};
}

/// Unit disks; 0 alternates between a_n = 1 - 2^{-n} (even n) and 1/2 (odd n).
inline SyntheticSystem disk_alternating() {
  const auto a = [](long n) {
    return n % 2 == 0 ? Complex{1.0 - std::ldexp(1.0, static_cast<int>(-n)), 0.0} : Complex{0.5, 0.0};
  };
  return {"disk-alternating",
          [](long) { return topological_hull(hypgeo::CanonicalDomain{hypgeo::UnitDisk{}}); },
          [a](long n, Complex z) { return mobius_inverse(a(n + 1), mobius(a(n), z)); },
          hypgeo::UnitDisk{}};
}

/// Right half-plane with z -> z/2.
inline SyntheticSystem half_plane_dilation() {
  return {"half-plane-dilation",
          [](long) { return topological_hull(hypgeo::CanonicalDomain{hypgeo::RightHalfPlane{}}); },
          [](long, Complex z) { return 0.5 * z; }, hypgeo::RightHalfPlane{}};
}

/// Strip {|Im z| < pi/2} with z -> z + 1.
inline SyntheticSystem strip_translation() {
  return {"strip-translation",
          [](long) { return topological_hull(hypgeo::CanonicalDomain{hypgeo::HorizontalStrip{}}); },
          [](long, Complex z) { return z + 1.0; }, hypgeo::HorizontalStrip{}};
}

/// Power tower A(R^{D_n}) with z -> z^{d_{n+1}}.
inline SyntheticSystem tower_system(const tower::PowerTower& t) {
  return {"tower",
          [t](long n) {
            const double Rn = std::pow(t.R(), t.cumulative_double(static_cast<std::size_t>(n)));
            return topological_hull(regions::Shape{regions::Annulus{{0.0, 0.0}, 1.0 / Rn, Rn}});
          },
          [t](long n, Complex z) {
            const double d = t.degree(static_cast<std::size_t>(n) + 1);
            return std::polar(std::pow(std::abs(z), d), d * std::arg(z));
          },
          hypgeo::SymmetricAnnulus(t.R())};
}

}  // namespace systems

}  // namespace wanderlab::boundary
