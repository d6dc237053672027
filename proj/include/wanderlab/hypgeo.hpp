#pragma once

// Hyperbolic geometry on the canonical domains: unit disk, right half-plane,
// the strip {|Im z| < pi/2} and the symmetric annulus A(R) = {1/R < |z| < R}.
// All densities are normalized to curvature -1.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "wanderlab/errors.hpp"

namespace wanderlab {

using Complex = std::complex<double>;

inline constexpr double pi = std::numbers::pi;

/// Nonzero complex number as (log-modulus, argument). The argument branch is
/// whatever the caller put there; nothing here reduces it modulo 2*pi.
struct LogPolarPoint {
  double u = 0.0;
  double theta = 0.0;

  static LogPolarPoint from_complex(Complex z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) || z == Complex{0.0, 0.0}) {
      fail(Errc::InvalidParameter, "log-polar coordinates need a finite nonzero point");
    }
    return {std::log(std::abs(z)), std::arg(z)};
  }
  static LogPolarPoint polar(double modulus, double theta) {
    if (!(modulus > 0.0) || !std::isfinite(modulus)) {
      fail(Errc::InvalidParameter, "modulus must be positive and finite");
    }
    return {std::log(modulus), theta};
  }

  double modulus() const { return std::exp(u); }
  Complex to_complex() const { return std::polar(std::exp(u), theta); }
};

inline bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

/// G(y) = log tan(y/2 + pi/4), the hyperbolic height coordinate of the strip.
inline double inverse_gudermannian(double y) { return std::asinh(std::tan(y)); }
inline double gudermannian(double x) { return std::atan(std::sinh(x)); }

namespace hypgeo {

/// Points closer than this to a boundary are rejected.
inline constexpr double boundary_guard = 1e-12;

class SymmetricAnnulus {
 public:
  explicit SymmetricAnnulus(double R) : R_(R) {
    if (!(R > 1.0) || !std::isfinite(R)) fail(Errc::InvalidParameter, "annulus needs R > 1");
  }
  double R() const { return R_; }
  double log_R() const { return std::log(R_); }
  double modulus() const { return 2.0 * std::log(R_); }
  /// Scale of the lift log z -> strip: zeta = c * (theta + i u).
  double lift_scale() const { return pi / (2.0 * log_R()); }
  /// Horizontal spacing of deck translates in the strip.
  double deck_spacing() const { return pi * pi / log_R(); }

  friend bool operator==(const SymmetricAnnulus&, const SymmetricAnnulus&) = default;

 private:
  double R_;
};

struct UnitDisk {
  friend bool operator==(UnitDisk, UnitDisk) = default;
};
struct RightHalfPlane {
  friend bool operator==(RightHalfPlane, RightHalfPlane) = default;
};
/// Fixed as {|Im z| < pi/2}.
struct HorizontalStrip {
  friend bool operator==(HorizontalStrip, HorizontalStrip) = default;
};

using CanonicalDomain = std::variant<UnitDisk, RightHalfPlane, HorizontalStrip, SymmetricAnnulus>;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

inline std::string name(const CanonicalDomain& domain) {
  return std::visit(overloaded{[](UnitDisk) { return std::string("UnitDisk"); },
                               [](RightHalfPlane) { return std::string("RightHalfPlane"); },
                               [](HorizontalStrip) { return std::string("HorizontalStrip"); },
                               [](const SymmetricAnnulus& a) {
                                 return "Annulus(R=" + std::to_string(a.R()) + ")";
                               }},
                    domain);
}

inline bool is_simply_connected(const CanonicalDomain& domain) {
  return !std::holds_alternative<SymmetricAnnulus>(domain);
}

/// Signed Euclidean distance to the boundary (negative outside).
inline double boundary_distance(const CanonicalDomain& domain, Complex z) {
  return std::visit(overloaded{[&](UnitDisk) { return 1.0 - std::abs(z); },
                               [&](RightHalfPlane) { return z.real(); },
                               [&](HorizontalStrip) { return pi / 2.0 - std::abs(z.imag()); },
                               [&](const SymmetricAnnulus& a) {
                                 const double m = std::abs(z);
                                 return std::min(m - 1.0 / a.R(), a.R() - m);
                               }},
                    domain);
}

inline bool contains(const CanonicalDomain& domain, Complex z) {
  return is_finite(z) && boundary_distance(domain, z) > boundary_guard;
}

inline void require_inside(const CanonicalDomain& domain, Complex z) {
  if (!contains(domain, z)) {
    fail(Errc::PointOutsideDomain, "point (" + std::to_string(z.real()) + ", " +
                                       std::to_string(z.imag()) + ") is not inside " + name(domain));
  }
}

inline double density(const CanonicalDomain& domain, Complex z) {
  require_inside(domain, z);
  return std::visit(overloaded{[&](UnitDisk) { return 2.0 / (1.0 - std::norm(z)); },
                               [&](RightHalfPlane) { return 1.0 / z.real(); },
                               [&](HorizontalStrip) { return 1.0 / std::cos(z.imag()); },
                               [&](const SymmetricAnnulus& a) {
                                 const double m = std::abs(z);
                                 return a.lift_scale() / (m * std::cos(a.lift_scale() * std::log(m)));
                               }},
                    domain);
}

/// Strip distance between points at heights y1, y2 whose real parts differ by dx.
/// Monotone increasing in |dx|.
inline double strip_distance_heights(double y1, double y2, double dx) {
  const double sh = std::sinh(dx / 2.0);
  const double sn = std::sin((y1 - y2) / 2.0);
  const double q = (sh * sh + sn * sn) / (std::cos(y1) * std::cos(y2));
  return 2.0 * std::asinh(std::sqrt(q));
}

inline Complex lift_to_strip(const SymmetricAnnulus& annulus, LogPolarPoint p) {
  if (!(std::abs(p.u) < annulus.log_R())) {
    fail(Errc::PointOutsideDomain, "log-modulus outside (-log R, log R)");
  }
  const double c = annulus.lift_scale();
  return {c * p.theta, c * p.u};
}

inline Complex lift_to_strip(double R, LogPolarPoint p) { return lift_to_strip(SymmetricAnnulus(R), p); }

/// Annulus distance by minimizing the strip distance over deck translates
/// k0-window .. k0+window around the nearest translate k0.
inline double annulus_distance(const SymmetricAnnulus& annulus, LogPolarPoint z, LogPolarPoint w,
                               int window = 1) {
  const Complex a = lift_to_strip(annulus, z);
  const Complex b = lift_to_strip(annulus, w);
  const double T = annulus.deck_spacing();
  const double dx = b.real() - a.real();
  const double k0 = std::nearbyint(dx / T);
  double best = std::numeric_limits<double>::infinity();
  for (int k = -window; k <= window; ++k) {
    best = std::min(best, strip_distance_heights(a.imag(), b.imag(), dx - (k0 + k) * T));
  }
  return best;
}

inline double distance(const CanonicalDomain& domain, Complex z, Complex w, int deck_window = 1) {
  require_inside(domain, z);
  require_inside(domain, w);
  return std::visit(
      overloaded{[&](UnitDisk) {
                   const double pseudo = std::abs(z - w) / std::abs(1.0 - std::conj(w) * z);
                   return 2.0 * std::atanh(std::min(pseudo, 1.0));
                 },
                 [&](RightHalfPlane) {
                   return 2.0 * std::asinh(std::abs(z - w) / (2.0 * std::sqrt(z.real() * w.real())));
                 },
                 [&](HorizontalStrip) { return strip_distance_heights(z.imag(), w.imag(), w.real() - z.real()); },
                 [&](const SymmetricAnnulus& a) {
                   return annulus_distance(a, LogPolarPoint::from_complex(z), LogPolarPoint::from_complex(w),
                                           deck_window);
                 }},
      domain);
}

struct QuadratureOptions {
  /// Relative tolerance handed to the Gauss-Kronrod driver.
  double tolerance = 1e-10;
  unsigned max_depth = 25;
};

/// Hyperbolic length of a smooth parametrized curve t -> position(t), t in [t0, t1].
template <class Position, class Velocity>
double curve_length(const CanonicalDomain& domain, Position&& position, Velocity&& velocity, double t0,
                    double t1, QuadratureOptions opts = {}) {
  auto integrand = [&](double t) { return density(domain, position(t)) * std::abs(velocity(t)); };
  return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(integrand, t0, t1, opts.max_depth,
                                                                      opts.tolerance);
}

struct PolylinePath {
  std::vector<Complex> vertices;
  CanonicalDomain ambient;
};

namespace detail {

inline void require_segment_inside(const CanonicalDomain& domain, Complex a, Complex b) {
  require_inside(domain, a);
  require_inside(domain, b);
  // Disk, half-plane and strip are convex; only the annulus can lose a chord.
  if (const auto* ann = std::get_if<SymmetricAnnulus>(&domain)) {
    const Complex d = b - a;
    const double len2 = std::norm(d);
    double t = len2 > 0.0 ? -(a.real() * d.real() + a.imag() * d.imag()) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    if (std::abs(a + t * d) - 1.0 / ann->R() <= boundary_guard) {
      fail(Errc::PointOutsideDomain, "polyline segment crosses the inner boundary of the annulus");
    }
  }
}

}  // namespace detail

/// Hyperbolic length of a polyline, segment by segment with adaptive quadrature.
inline double path_length(const PolylinePath& path, QuadratureOptions opts = {}) {
  if (path.vertices.size() < 2) fail(Errc::InvalidParameter, "a path needs at least two vertices");
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < path.vertices.size(); ++i) {
    const Complex a = path.vertices[i];
    const Complex b = path.vertices[i + 1];
    detail::require_segment_inside(path.ambient, a, b);
    if (a == b) continue;
    total += curve_length(
        path.ambient, [&](double t) { return a + t * (b - a); }, [&](double) { return b - a; }, 0.0, 1.0,
        opts);
  }
  return total;
}

/// Length of the core circle |z| = 1 traversed |n| times: 2 pi^2 |n| / Mod A(R).
inline double core_geodesic_length(double R, long n) {
  const SymmetricAnnulus annulus(R);
  if (n == 0) fail(Errc::InvalidWinding, "winding must be nonzero");
  return 2.0 * pi * pi * static_cast<double>(std::labs(n)) / annulus.modulus();
}

/// Mod A(S) / Mod A(R): bound on |winding| of a holomorphic map A(R) -> A(S).
inline double degree_bound(double R, double S) {
  const SymmetricAnnulus source(R);
  const SymmetricAnnulus target(S);
  return target.modulus() / source.modulus();
}

/// Largest integer winding admitted by degree_bound.
inline long max_winding(double R, double S) {
  return static_cast<long>(std::floor(degree_bound(R, S) * (1.0 + 1e-12)));
}

}  // namespace hypgeo
}  // namespace wanderlab
