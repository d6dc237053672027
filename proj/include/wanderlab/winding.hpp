#pragma once

// Winding numbers of image curves by continuous argument tracking.

#include <cmath>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "wanderlab/errors.hpp"
#include "wanderlab/hypgeo.hpp"

namespace wanderlab {

struct SampledCurve {
  std::vector<Complex> points;
  bool closed = true;

  /// Circle |z - center| = radius with n samples, counterclockwise, closed
  /// (the first sample is repeated at the end).
  static SampledCurve circle(Complex center, double radius, std::size_t n) {
    SampledCurve c;
    c.points.reserve(n + 1);
    for (std::size_t k = 0; k < n; ++k) {
      c.points.push_back(center + std::polar(radius, 2.0 * pi * static_cast<double>(k) / static_cast<double>(n)));
    }
    c.points.push_back(c.points.front());
    return c;
  }

  bool endpoints_match(double tol = 1e-12) const {
    return points.size() >= 2 && std::abs(points.front() - points.back()) <= tol;
  }
};

using ComplexMap = std::function<Complex(Complex)>;

struct WindingOptions {
  /// Maximum argument change accepted across one refined segment.
  double max_turn = pi / 8.0;
  /// The image must stay farther from the target than this many image steps.
  double separation_factor = 10.0;
  int max_depth = 24;
};

namespace detail {

struct WindingWalker {
  const ComplexMap& map;
  Complex target;
  WindingOptions opts;

  Complex image(Complex z) const {
    const Complex w = map(z);
    if (!is_finite(w)) fail(Errc::TargetOnCurve, "map has a pole on the curve");
    if (std::abs(w - target) <= 1e-12 * (1.0 + std::abs(target))) {
      fail(Errc::TargetOnCurve, "image curve passes through the target");
    }
    return w;
  }

  // Accumulated argument change of map(z) - target along the segment a -> b.
  double segment(Complex a, Complex fa, Complex b, Complex fb, int depth) const {
    const Complex va = fa - target;
    const Complex vb = fb - target;
    const double turn = std::arg(vb / va);
    const double step = std::abs(fb - fa);
    const double clearance = std::min(std::abs(va), std::abs(vb));
    if (std::abs(turn) <= opts.max_turn && opts.separation_factor * step < clearance) return turn;
    if (depth >= opts.max_depth) {
      fail(Errc::ResolutionInsufficient, "argument tracking did not settle after " +
                                             std::to_string(opts.max_depth) + " refinements");
    }
    const Complex m = 0.5 * (a + b);
    const Complex fm = image(m);
    return segment(a, fa, m, fm, depth + 1) + segment(m, fm, b, fb, depth + 1);
  }
};

}  // namespace detail

/// Number of turns of map(curve) about target. Segments between samples are
/// refined by bisection until the argument change per piece is small and
/// the image stays well separated from the target.
inline long winding_number(const ComplexMap& map, const SampledCurve& curve, Complex target,
                           const WindingOptions& opts = {}) {
  if (!curve.closed || !curve.endpoints_match()) fail(Errc::InvalidParameter, "winding needs a closed curve");
  detail::WindingWalker walker{map, target, opts};
  double total = 0.0;
  Complex prev = curve.points.front();
  Complex fprev = walker.image(prev);
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    const Complex cur = curve.points[i];
    const Complex fcur = walker.image(cur);
    total += walker.segment(prev, fprev, cur, fcur, 0);
    prev = cur;
    fprev = fcur;
  }
  const double turns = total / (2.0 * pi);
  const double rounded = std::nearbyint(turns);
  if (std::abs(turns - rounded) > 1e-6) {
    fail(Errc::ResolutionInsufficient, "accumulated argument is not a whole number of turns");
  }
  return static_cast<long>(rounded);
}

}  // namespace wanderlab
