#pragma once

// Planar regions used by the model-map scaffolding and the hull machinery.
// Unbounded shapes have exact predicates; boundary samplers take a vertical
// window for them.

#include <algorithm>
#include <cmath>
#include <limits>
#include <complex>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "wanderlab/errors.hpp"
#include "wanderlab/hypgeo.hpp"
#include "wanderlab/phi_component.hpp"
#include "wanderlab/polyline.hpp"

namespace wanderlab::regions {

/// {Re z <= l} when `left`, otherwise {Re z >= l}.
struct HalfPlane {
  double l = 0.0;
  bool left = true;
};
/// {|Re z - center| <= half_width}.
struct VerticalStrip {
  double center = 0.0;
  double half_width = 1.0;
};
/// {|Im z - center| < half_width}.
struct HorizontalStrip {
  double center = 0.0;
  double half_width = 1.0;
};
struct Disk {
  Complex center;
  double radius = 1.0;
};
/// {inner < |z - center| < outer}.
struct Annulus {
  Complex center;
  double inner = 0.5;
  double outer = 2.0;
};
/// Outer ring with polygonal holes; rings are closed (first vertex repeated).
struct PolygonWithHoles {
  std::vector<Complex> outer;
  std::vector<std::vector<Complex>> holes;
};
/// D + center for the traced component D.
struct PhiPreimage {
  double center = 0.0;
  std::shared_ptr<const modelmap::PhiComponent> component;
};
/// {Re z = x}.
struct VerticalLine {
  double x = 0.0;
};

using Shape = std::variant<HalfPlane, VerticalStrip, HorizontalStrip, Disk, Annulus, PolygonWithHoles, PhiPreimage,
                           VerticalLine>;

enum class Role { H, E, G, L, Other };

inline std::string to_string(Role r) {
  switch (r) {
    case Role::H: return "H";
    case Role::E: return "E";
    case Role::G: return "G";
    case Role::L: return "L";
    case Role::Other: return "other";
  }
  return "?";
}

struct Region {
  Shape shape;
  Role role = Role::Other;
  long stage = -1;
};

namespace detail {

inline double polygon_distance(const std::vector<Complex>& ring, Complex z) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
    best = std::min(best, geometry::nearest_on_segment(z, ring[i], ring[i + 1]).distance);
  }
  return best;
}

inline geometry::NearestPoint polygon_nearest(const std::vector<Complex>& ring, Complex z) {
  geometry::NearestPoint best;
  for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
    const auto cand = geometry::nearest_on_segment(z, ring[i], ring[i + 1]);
    if (cand.distance < best.distance) best = cand;
  }
  return best;
}

inline bool polygon_contains(const PolygonWithHoles& p, Complex z) {
  if (!geometry::point_in_polygon(p.outer, z)) return false;
  for (const auto& h : p.holes) {
    if (geometry::point_in_polygon(h, z)) return false;
  }
  return true;
}

inline Complex radial_point(Complex center, double radius, Complex z) {
  const Complex d = z - center;
  const double m = std::abs(d);
  return center + (m > 0.0 ? d / m : Complex{1.0, 0.0}) * radius;
}

}  // namespace detail

/// Euclidean distance to the boundary, positive inside and negative outside.
/// Lines have no interior, so the value is minus the distance.
inline double signed_clearance(const Shape& s, Complex z) {
  return std::visit(
      hypgeo::overloaded{
          [&](const HalfPlane& h) { return h.left ? h.l - z.real() : z.real() - h.l; },
          [&](const VerticalStrip& v) { return v.half_width - std::abs(z.real() - v.center); },
          [&](const HorizontalStrip& v) { return v.half_width - std::abs(z.imag() - v.center); },
          [&](const Disk& d) { return d.radius - std::abs(z - d.center); },
          [&](const Annulus& a) {
            const double m = std::abs(z - a.center);
            return std::min(m - a.inner, a.outer - m);
          },
          [&](const PolygonWithHoles& p) {
            double d = detail::polygon_distance(p.outer, z);
            for (const auto& h : p.holes) d = std::min(d, detail::polygon_distance(h, z));
            return detail::polygon_contains(p, z) ? d : -d;
          },
          [&](const PhiPreimage& p) { return p.component->signed_clearance(z - p.center); },
          [&](const VerticalLine& l) { return -std::abs(z.real() - l.x); },
      },
      s);
}

/// Membership of the closed region (boundary included); lines contain their points.
inline bool contains(const Shape& s, Complex z) {
  if (!is_finite(z)) return false;
  if (const auto* p = std::get_if<PhiPreimage>(&s)) return p->component->contains(z - p->center);
  if (const auto* l = std::get_if<VerticalLine>(&s)) return z.real() == l->x;
  return signed_clearance(s, z) >= 0.0;
}

inline bool is_bounded(const Shape& s) {
  return std::holds_alternative<Disk>(s) || std::holds_alternative<Annulus>(s) ||
         std::holds_alternative<PolygonWithHoles>(s) || std::holds_alternative<PhiPreimage>(s);
}

/// Closest boundary point to z.
inline geometry::NearestPoint nearest_boundary_point(const Shape& s, Complex z) {
  return std::visit(
      hypgeo::overloaded{
          [&](const HalfPlane& h) {
            return geometry::NearestPoint{{h.l, z.imag()}, std::abs(z.real() - h.l)};
          },
          [&](const VerticalStrip& v) {
            const double x = z.real() >= v.center ? v.center + v.half_width : v.center - v.half_width;
            return geometry::NearestPoint{{x, z.imag()}, std::abs(z.real() - x)};
          },
          [&](const HorizontalStrip& v) {
            const double y = z.imag() >= v.center ? v.center + v.half_width : v.center - v.half_width;
            return geometry::NearestPoint{{z.real(), y}, std::abs(z.imag() - y)};
          },
          [&](const Disk& d) {
            const Complex p = detail::radial_point(d.center, d.radius, z);
            return geometry::NearestPoint{p, std::abs(z - p)};
          },
          [&](const Annulus& a) {
            const Complex pi_ = detail::radial_point(a.center, a.inner, z);
            const Complex po = detail::radial_point(a.center, a.outer, z);
            const double di = std::abs(z - pi_);
            const double dout = std::abs(z - po);
            return di <= dout ? geometry::NearestPoint{pi_, di} : geometry::NearestPoint{po, dout};
          },
          [&](const PolygonWithHoles& p) {
            auto best = detail::polygon_nearest(p.outer, z);
            for (const auto& h : p.holes) {
              const auto cand = detail::polygon_nearest(h, z);
              if (cand.distance < best.distance) best = cand;
            }
            return best;
          },
          [&](const PhiPreimage& p) {
            auto n = p.component->nearest_boundary_point(z - p.center);
            n.point += p.center;
            return n;
          },
          [&](const VerticalLine& l) {
            return geometry::NearestPoint{{l.x, z.imag()}, std::abs(z.real() - l.x)};
          },
      },
      s);
}

/// About n boundary points. Unbounded shapes are cut to Im z in
/// [-window, window] (Re z for the horizontal strip).
inline std::vector<Complex> boundary_samples(const Shape& s, std::size_t n, double window = 10.0) {
  if (n < 2) fail(Errc::InvalidParameter, "need at least two boundary samples");
  const auto line = [&](std::vector<Complex>& out, Complex a, Complex b, std::size_t k) {
    for (std::size_t i = 0; i < k; ++i) {
      out.push_back(a + (b - a) * (static_cast<double>(i) / static_cast<double>(k - 1)));
    }
  };
  const auto circle = [&](std::vector<Complex>& out, Complex c, double rad, std::size_t k) {
    for (std::size_t i = 0; i < k; ++i) {
      out.push_back(c + std::polar(rad, 2.0 * pi * static_cast<double>(i) / static_cast<double>(k)));
    }
  };
  std::vector<Complex> out;
  out.reserve(n);
  std::visit(hypgeo::overloaded{
                 [&](const HalfPlane& h) { line(out, {h.l, -window}, {h.l, window}, n); },
                 [&](const VerticalStrip& v) {
                   line(out, {v.center - v.half_width, -window}, {v.center - v.half_width, window}, n / 2);
                   line(out, {v.center + v.half_width, -window}, {v.center + v.half_width, window}, n - n / 2);
                 },
                 [&](const HorizontalStrip& v) {
                   line(out, {-window, v.center - v.half_width}, {window, v.center - v.half_width}, n / 2);
                   line(out, {-window, v.center + v.half_width}, {window, v.center + v.half_width}, n - n / 2);
                 },
                 [&](const Disk& d) { circle(out, d.center, d.radius, n); },
                 [&](const Annulus& a) {
                   circle(out, a.center, a.inner, n / 2);
                   circle(out, a.center, a.outer, n - n / 2);
                 },
                 [&](const PolygonWithHoles& p) {
                   out.insert(out.end(), p.outer.begin(), p.outer.end());
                   for (const auto& h : p.holes) out.insert(out.end(), h.begin(), h.end());
                 },
                 [&](const PhiPreimage& p) {
                   const auto b = p.component->boundary();
                   const std::size_t stride = std::max<std::size_t>(1, b.size() / n);
                   for (std::size_t i = 0; i + 1 < b.size(); i += stride) out.push_back(b[i] + p.center);
                 },
                 [&](const VerticalLine& l) { line(out, {l.x, -window}, {l.x, window}, n); },
             },
             s);
  return out;
}

inline std::string describe(const Shape& s) {
  const auto num = [](double v) { return std::to_string(v); };
  return std::visit(
      hypgeo::overloaded{
          [&](const HalfPlane& h) { return std::string(h.left ? "Re z <= " : "Re z >= ") + num(h.l); },
          [&](const VerticalStrip& v) { return "|Re z - " + num(v.center) + "| <= " + num(v.half_width); },
          [&](const HorizontalStrip& v) { return "|Im z - " + num(v.center) + "| < " + num(v.half_width); },
          [&](const Disk& d) { return "|z - " + num(d.center.real()) + "| <= " + num(d.radius); },
          [&](const Annulus& a) {
            return num(a.inner) + " < |z - " + num(a.center.real()) + "| < " + num(a.outer);
          },
          [&](const PolygonWithHoles& p) {
            return "polygon with " + std::to_string(p.holes.size()) + " holes";
          },
          [&](const PhiPreimage& p) { return "D + " + num(p.center); },
          [&](const VerticalLine& l) { return "Re z = " + num(l.x); },
      },
      s);
}

/// Canonical hyperbolic domains as regions.
inline Shape from_canonical(const hypgeo::CanonicalDomain& d) {
  return std::visit(hypgeo::overloaded{
                        [](hypgeo::UnitDisk) -> Shape { return Disk{{0.0, 0.0}, 1.0}; },
                        [](hypgeo::RightHalfPlane) -> Shape { return HalfPlane{0.0, false}; },
                        [](hypgeo::HorizontalStrip) -> Shape { return HorizontalStrip{0.0, pi / 2.0}; },
                        [](const hypgeo::SymmetricAnnulus& a) -> Shape {
                          return Annulus{{0.0, 0.0}, 1.0 / a.R(), a.R()};
                        },
                    },
                    d);
}

}  // namespace wanderlab::regions
