#pragma once

// phi(z) = 1/(z - i) + 1/(z + i) = 2z / (z^2 + 1) and the component D of
// phi^{-1}({|Re w| < a}) inside the unit disk, a = log r - eps. phi is
// injective on the disk (phi(z) = phi(1/z)), so D is exactly
// {|z| < 1, |Re phi(z)| < a}; its boundary is traced by continuation.

#include <cmath>
#include <complex>
#include <memory>
#include <vector>

#include "wanderlab/errors.hpp"
#include "wanderlab/hypgeo.hpp"
#include "wanderlab/polyline.hpp"

namespace wanderlab::modelmap {

inline Complex phi(Complex z) { return 2.0 * z / (z * z + 1.0); }
inline Complex phi_derivative(Complex z) {
  const Complex q = z * z + 1.0;
  return 2.0 * (1.0 - z * z) / (q * q);
}

/// Branch of phi^{-1} landing in the unit disk; continuous on |Re w| < 1.
inline Complex phi_inverse(Complex w) {
  if (w == Complex{0.0, 0.0}) return {0.0, 0.0};
  return (1.0 - std::sqrt(1.0 - w * w)) / w;
}

/// Rescaled Joukowski map lambda (z + 1/z).
inline Complex psi(double lambda, Complex z) { return lambda * (z + 1.0 / z); }

class PhiComponent {
 public:
  PhiComponent(double level, std::vector<Complex> closed_boundary, double step)
      : level_(level), step_(step), index_(std::move(closed_boundary)) {}

  /// a = log r - eps.
  double level() const { return level_; }
  /// Continuation step length used for the trace.
  double step() const { return step_; }
  /// Closed boundary polyline (first vertex repeated last), passing through -i and i.
  std::span<const Complex> boundary() const { return index_.vertices(); }

  bool contains(Complex z) const { return std::abs(z) < 1.0 && std::abs(phi(z).real()) < level_; }

  geometry::NearestPoint nearest_boundary_point(Complex z) const { return index_.nearest(z); }

  /// Distance to the traced boundary, negative outside D.
  double signed_clearance(Complex z) const {
    const double d = index_.distance(z);
    return contains(z) ? d : -d;
  }

 private:
  double level_;
  double step_;
  geometry::SegmentIndex index_;
};

namespace detail {

// One predictor-corrector pass along Re phi = a from the real axis up to i.
inline std::vector<Complex> trace_quarter(double a, double x_start, double h, std::size_t max_steps) {
  const auto residual = [&](Complex z) { return phi(z).real() - a; };
  // grad Re phi = (Re phi', -Im phi'), written as a complex number.
  const auto gradient = [](Complex z) { return std::conj(phi_derivative(z)); };
  const auto correct = [&](Complex z) {
    for (int it = 0; it < 50; ++it) {
      const double f = residual(z);
      if (std::abs(f) < 1e-14 * (1.0 + std::abs(phi(z)))) return z;
      const Complex g = gradient(z);
      z -= f * g / std::norm(g);
    }
    fail(Errc::TraceDiverged, "corrector did not converge");
  };
  const Complex top{0.0, 1.0};
  std::vector<Complex> pts{Complex{x_start, 0.0}};
  Complex tangent{0.0, 1.0};
  for (std::size_t step = 0; step < max_steps; ++step) {
    const Complex z = pts.back();
    if (std::abs(z - top) < 1.5 * h) {
      pts.push_back(top);
      return pts;
    }
    const Complex g = gradient(z);
    Complex t = Complex{0.0, 1.0} * g / std::abs(g);
    if ((t * std::conj(tangent)).real() < 0.0) t = -t;
    tangent = t;
    const Complex next = correct(z + h * t);
    if (!(std::abs(next) < 1.0) || next.imag() < 0.0) {
      fail(Errc::TraceDiverged, "level curve left the upper half of the unit disk");
    }
    pts.push_back(next);
  }
  fail(Errc::TraceDiverged, "level curve did not reach i within the step budget");
}

}  // namespace detail

/// Boundary of D by predictor-corrector continuation on Re phi = a, using
/// the symmetries z -> conj(z) and z -> -z. `resolution` is the approximate
/// vertex count of the closed polyline.
inline PhiComponent trace_phi_component(double r, double eps, std::size_t resolution) {
  const double a = std::log(r) - eps;
  if (!(a > 0.0 && a < 1.0)) fail(Errc::InvalidParameter, "need 0 < log r - eps < 1");
  if (resolution < 64) fail(Errc::InvalidParameter, "resolution must be at least 64");
  const double x_start = (1.0 - std::sqrt(1.0 - a * a)) / a;
  const std::size_t budget = 50 * resolution + 10000;
  // Coarse pass to measure the quarter arc, then the real trace.
  const auto coarse = detail::trace_quarter(a, x_start, 1e-2, budget);
  const double quarter_length = geometry::euclidean_length(coarse);
  const double h = quarter_length / (static_cast<double>(resolution) / 4.0);
  const auto quarter = detail::trace_quarter(a, x_start, h, budget);

  // Right arc from -i through x_start to i, then its negative back to -i.
  std::vector<Complex> right;
  right.reserve(2 * quarter.size());
  for (auto it = quarter.rbegin(); it != quarter.rend(); ++it) right.push_back(std::conj(*it));
  right.insert(right.end(), quarter.begin() + 1, quarter.end());
  std::vector<Complex> ring = right;
  for (std::size_t i = 1; i < right.size(); ++i) ring.push_back(-right[i]);

  // Closest approach to the unit circle away from the endpoints must sit next to +-i.
  std::size_t closest = 1;
  for (std::size_t i = 1; i + 1 < ring.size(); ++i) {
    if (std::abs(ring[i] - Complex{0.0, 1.0}) == 0.0 || std::abs(ring[i] + Complex{0.0, 1.0}) == 0.0) continue;
    if (std::abs(ring[i]) > std::abs(ring[closest])) closest = i;
  }
  const double to_pole = std::min(std::abs(ring[closest] - Complex{0.0, 1.0}), std::abs(ring[closest] + Complex{0.0, 1.0}));
  if (to_pole > 10.0 * h) fail(Errc::TraceDiverged, "closest approach to the unit circle is not at +-i");
  return PhiComponent(a, std::move(ring), h);
}

}  // namespace wanderlab::modelmap
