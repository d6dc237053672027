#pragma once

// Closed polylines: nearest-point queries through a uniform grid of
// segment buckets, and even-odd point-in-polygon.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "wanderlab/errors.hpp"
#include "wanderlab/hypgeo.hpp"

namespace wanderlab::geometry {

struct NearestPoint {
  Complex point;
  double distance = std::numeric_limits<double>::infinity();
};

inline NearestPoint nearest_on_segment(Complex z, Complex a, Complex b) {
  const Complex d = b - a;
  const double len2 = std::norm(d);
  double t = len2 > 0.0 ? ((z - a) * std::conj(d)).real() / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  const Complex p = a + t * d;
  return {p, std::abs(z - p)};
}

/// Even-odd rule; `ring` need not repeat its first vertex.
inline bool point_in_polygon(std::span<const Complex> ring, Complex z) {
  bool inside = false;
  const std::size_t n = ring.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Complex a = ring[i];
    const Complex b = ring[j];
    if ((a.imag() > z.imag()) != (b.imag() > z.imag())) {
      const double x = a.real() + (z.imag() - a.imag()) * (b.real() - a.real()) / (b.imag() - a.imag());
      if (z.real() < x) inside = !inside;
    }
  }
  return inside;
}

/// Bucketed segments of a polyline for nearest-point queries.
class SegmentIndex {
 public:
  SegmentIndex() = default;

  /// Segments are (pts[i], pts[i+1]); pass a closed ring with the first
  /// vertex repeated at the end to cover the closing edge.
  explicit SegmentIndex(std::vector<Complex> pts, std::size_t cells_per_side = 64) : pts_(std::move(pts)) {
    if (pts_.size() < 2) fail(Errc::InvalidParameter, "segment index needs at least two vertices");
    double x0 = pts_[0].real(), x1 = x0, y0 = pts_[0].imag(), y1 = y0;
    for (Complex p : pts_) {
      x0 = std::min(x0, p.real());
      x1 = std::max(x1, p.real());
      y0 = std::min(y0, p.imag());
      y1 = std::max(y1, p.imag());
    }
    cell_ = std::max({x1 - x0, y1 - y0, 1e-12}) / static_cast<double>(cells_per_side);
    x0_ = x0;
    y0_ = y0;
    nx_ = static_cast<long>(std::floor((x1 - x0) / cell_)) + 1;
    ny_ = static_cast<long>(std::floor((y1 - y0) / cell_)) + 1;
    cells_.assign(static_cast<std::size_t>(nx_ * ny_), {});
    for (std::size_t i = 0; i + 1 < pts_.size(); ++i) {
      const Complex a = pts_[i];
      const Complex b = pts_[i + 1];
      const long cx0 = cell_x(std::min(a.real(), b.real()));
      const long cx1 = cell_x(std::max(a.real(), b.real()));
      const long cy0 = cell_y(std::min(a.imag(), b.imag()));
      const long cy1 = cell_y(std::max(a.imag(), b.imag()));
      for (long cx = cx0; cx <= cx1; ++cx) {
        for (long cy = cy0; cy <= cy1; ++cy) cells_[index(cx, cy)].push_back(static_cast<std::uint32_t>(i));
      }
    }
  }

  std::span<const Complex> vertices() const { return pts_; }

  NearestPoint nearest(Complex z) const {
    const long cx = static_cast<long>(std::floor((z.real() - x0_) / cell_));
    const long cy = static_cast<long>(std::floor((z.imag() - y0_) / cell_));
    NearestPoint best;
    auto visit = [&](long x, long y) {
      if (x < 0 || y < 0 || x >= nx_ || y >= ny_) return;
      for (std::uint32_t s : cells_[index(x, y)]) {
        const NearestPoint cand = nearest_on_segment(z, pts_[s], pts_[s + 1]);
        if (cand.distance < best.distance) best = cand;
      }
    };
    const long first = std::max({0L, -cx, cx - (nx_ - 1), -cy, cy - (ny_ - 1)});
    const long last = first + std::max(nx_, ny_);
    for (long ring = first; ring <= last; ++ring) {
      // Anything in ring r or beyond is at least (r - 1) cells away.
      if (best.distance <= static_cast<double>(ring - 1) * cell_) break;
      for (long dx = -ring; dx <= ring; ++dx) {
        if (std::abs(dx) == ring) {
          for (long dy = -ring; dy <= ring; ++dy) visit(cx + dx, cy + dy);
        } else {
          visit(cx + dx, cy - ring);
          if (ring != 0) visit(cx + dx, cy + ring);
        }
      }
    }
    return best;
  }

  double distance(Complex z) const { return nearest(z).distance; }

 private:
  long cell_x(double x) const { return std::clamp(static_cast<long>(std::floor((x - x0_) / cell_)), 0L, nx_ - 1); }
  long cell_y(double y) const { return std::clamp(static_cast<long>(std::floor((y - y0_) / cell_)), 0L, ny_ - 1); }
  std::size_t index(long x, long y) const { return static_cast<std::size_t>(y * nx_ + x); }

  std::vector<Complex> pts_;
  double x0_ = 0.0, y0_ = 0.0, cell_ = 1.0;
  long nx_ = 1, ny_ = 1;
  std::vector<std::vector<std::uint32_t>> cells_;
};

/// Euclidean length of a polyline.
inline double euclidean_length(std::span<const Complex> pts) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) total += std::abs(pts[i + 1] - pts[i]);
  return total;
}

}  // namespace wanderlab::geometry
