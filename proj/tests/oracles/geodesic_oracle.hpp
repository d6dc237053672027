#pragma once

// Reference values computed by routes that share no code with the closed
// forms under test: quadrature of the library density along the exact
// geodesic, pushed forward from the upper half-plane H.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <vector>

#include "wanderlab/hypgeo.hpp"
#include "wanderlab/phi_component.hpp"

namespace oracle {

using wanderlab::Complex;
using wanderlab::pi;
namespace hg = wanderlab::hypgeo;

struct Curve {
  std::function<Complex(double)> position;
  std::function<Complex(double)> velocity;
};

/// Geodesic of H from p to q on t in [0, 1]: a vertical segment or an arc of a
/// circle centred on the real axis, both at constant hyperbolic speed so the
/// quadrature sees no endpoint peaks.
inline Curve h_geodesic(Complex p, Complex q) {
  if (std::abs(p.real() - q.real()) < 1e-14 * (1.0 + std::abs(p.real()))) {
    const double a = std::log(p.imag());
    const double b = std::log(q.imag());
    const double x = p.real();
    return {[=](double t) { return Complex{x, std::exp(a + t * (b - a))}; },
            [=](double t) { return Complex{0.0, std::exp(a + t * (b - a)) * (b - a)}; }};
  }
  const double c = (std::norm(q) - std::norm(p)) / (2.0 * (q.real() - p.real()));
  const double rho = std::abs(p - c);
  // Angle alpha on the circle and arclength sigma are related by
  // alpha = 2 atan(exp(-sigma)).
  const auto sigma = [](double alpha) { return -std::log(std::tan(alpha / 2.0)); };
  const double s0 = sigma(std::arg(p - c));
  const double s1 = sigma(std::arg(q - c));
  const auto alpha = [=](double t) { return 2.0 * std::atan(std::exp(-(s0 + t * (s1 - s0)))); };
  return {[=](double t) { return c + std::polar(rho, alpha(t)); },
          [=](double t) {
            const double al = alpha(t);
            return Complex{0.0, 1.0} * std::polar(rho, al) * (-std::sin(al) * (s1 - s0));
          }};
}

/// Holomorphic (or anti-holomorphic) chart from H onto a model domain.
struct Chart {
  std::function<Complex(Complex)> to_h;
  std::function<Complex(Complex)> from_h;
  /// |d from_h| applied to a tangent vector at a point of H.
  std::function<Complex(Complex, Complex)> push;
};

inline Chart half_plane_chart() {
  const Complex i{0.0, 1.0};
  return {[=](Complex z) { return i * z; }, [=](Complex s) { return -i * s; },
          [=](Complex, Complex v) { return -i * v; }};
}

inline Chart disk_chart() {
  const Complex i{0.0, 1.0};
  return {[=](Complex z) { return i * (1.0 + z) / (1.0 - z); }, [=](Complex s) { return (s - i) / (s + i); },
          [=](Complex s, Complex v) { return 2.0 * i / ((s + i) * (s + i)) * v; }};
}

inline Chart strip_chart() {
  const Complex i{0.0, 1.0};
  return {[=](Complex z) { return i * std::exp(z); }, [=](Complex s) { return std::log(-i * s); },
          [=](Complex s, Complex v) { return v / s; }};
}

/// Quadrature of the domain density along the pushed-forward H geodesic.
inline double geodesic_length(const hg::CanonicalDomain& domain, const Chart& chart, Complex z, Complex w) {
  const Curve g = h_geodesic(chart.to_h(z), chart.to_h(w));
  return hg::curve_length(
      domain, [&](double t) { return chart.from_h(g.position(t)); },
      [&](double t) { return chart.push(g.position(t), g.velocity(t)); }, 0.0, 1.0);
}

/// Annulus distance as the shortest of the strip geodesics between one lift
/// of z and the translates of a lift of w, each integrated in the annulus
/// density after projecting back down.
inline double annulus_geodesic_length(double R, Complex z, Complex w, int window = 3) {
  const hg::SymmetricAnnulus A(R);
  const hg::CanonicalDomain domain{A};
  const double c = pi / (2.0 * std::log(R));
  const Complex i{0.0, 1.0};
  const auto lift = [&](Complex p) { return c * Complex{std::arg(p), std::log(std::abs(p))}; };
  const auto down = [&](Complex s) { return std::exp(i * std::conj(s) / c); };
  const Complex a = lift(z);
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> shifts;
  for (int k = -window; k <= window; ++k) shifts.push_back(k);
  const auto offset = [&](int k) { return std::abs((lift(w) + 2.0 * pi * c * static_cast<double>(k) - a).real()); };
  std::sort(shifts.begin(), shifts.end(), [&](int x, int y) { return offset(x) < offset(y); });
  for (int k : shifts) {
    // The strip density is at least 1, so a translate this far away cannot win.
    if (offset(k) >= best) continue;
    const Complex b = lift(w) + 2.0 * pi * c * static_cast<double>(k);
    const Curve g = h_geodesic(i * std::exp(a), i * std::exp(b));
    const auto strip_pos = [&](double t) { return std::log(-i * g.position(t)); };
    const double len = hg::curve_length(
        domain, [&](double t) { return down(strip_pos(t)); },
        [&](double t) {
          const Complex ds = g.velocity(t) / g.position(t);
          return down(strip_pos(t)) * i * std::conj(ds) / c;
        },
        0.0, 1.0);
    best = std::min(best, len);
  }
  return best;
}

/// Distance in A(R^D) between z^D and w^D, evaluated on the actual images.
/// Only meaningful while R^D and the images stay representable.
inline double power_image_distance(double R, unsigned long D, Complex z, Complex w) {
  const double d = static_cast<double>(D);
  const auto power = [&](Complex p) { return std::polar(std::pow(std::abs(p), d), d * std::arg(p)); };
  return hg::distance(hg::SymmetricAnnulus(std::pow(R, d)), power(z), power(w), 2);
}

/// Length of the vertical strip segment between heights y1 and y2; the
/// infimum over horizontal slides of the strip distance.
inline double vertical_strip_length(double y1, double y2) {
  return hg::curve_length(
      hg::HorizontalStrip{}, [&](double t) { return Complex{0.0, y1 + t * (y2 - y1)}; },
      [&](double) { return Complex{0.0, y2 - y1}; }, 0.0, 1.0);
}

/// Boundary of the phi component through its exact parametrization
/// phi^{-1}(+-a + i t), |t| <= t_max.
inline std::vector<Complex> phi_boundary_points(double a, std::size_t n, double t_max = 400.0) {
  std::vector<Complex> out;
  for (double s : {-1.0, 1.0}) {
    for (std::size_t k = 0; k < n; ++k) {
      // sinh spacing puts more points near t = 0 where the boundary bends.
      const double u = -1.0 + 2.0 * static_cast<double>(k) / static_cast<double>(n - 1);
      const double t = std::sinh(u * std::asinh(t_max));
      out.push_back(wanderlab::modelmap::phi_inverse(Complex{s * a, t}));
    }
  }
  return out;
}

/// Min distance from the psi image of the closed annulus 1/r <= |z| <= r to
/// the boundary of D (attained on the outer ellipse), or -1 if the ellipse
/// leaves D.
inline double psi_image_clearance(double lambda, double r, double a, const std::vector<Complex>& bnd,
                                  std::size_t ellipse_samples = 2000) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < ellipse_samples; ++k) {
    const double t = 2.0 * pi * static_cast<double>(k) / static_cast<double>(ellipse_samples);
    const Complex e = wanderlab::modelmap::psi(lambda, std::polar(r, t));
    if (!(std::abs(e) < 1.0 && std::abs(wanderlab::modelmap::phi(e).real()) < a)) return -1.0;
    for (Complex b : bnd) best = std::min(best, std::abs(e - b));
  }
  return best;
}

}  // namespace oracle
