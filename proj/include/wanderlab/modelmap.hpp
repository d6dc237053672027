#pragma once

// Model map laboratory: parameter generation, the regions H_n, E_n, G_n,
// L_n, the four stage maps, and sampled certification of g(G_n) in G_{n+1}.

#include <cmath>
#include <complex>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include "wanderlab/errors.hpp"
#include "wanderlab/hypgeo.hpp"
#include "wanderlab/phi_component.hpp"
#include "wanderlab/regions.hpp"
#include "wanderlab/silhouette.hpp"
#include "wanderlab/winding.hpp"

namespace wanderlab::modelmap {

inline constexpr std::size_t calibration_samples = 4096;
inline constexpr std::size_t default_trace_resolution = 10000;
inline constexpr double pole_guard = 1e-12;
/// Relative shortfall below eps tolerated in sampled clearances; stages 2
/// and 3 attain eps exactly on the boundary.
inline constexpr double rounding_allowance = 1e-7;

struct ModelParams {
  double r = 2.5;
  double eps = 1e-3;
  double lambda = 0.0;
  double R = 0.0;
  double Rp = 0.0;
  double delta = 0.0;
  /// l_0 .. l_{stages+1}
  std::vector<double> l;
  /// m_0 .. m_{stages+1}
  std::vector<double> m;
  /// x_0 .. x_stages
  std::vector<double> x;
  int stages = 8;

  /// Half-width (n = 0, 3 mod 4) or radius (n = 1, 2 mod 4) of E_n.
  double e_extent(std::size_t n) const {
    switch (n % 4) {
      case 0: return std::log(2.0 * Rp);
      case 1: return R;
      case 2: return 1.0 + delta;
      default: return std::log(r);
    }
  }

  /// Named violated inequalities; empty when valid.
  std::vector<std::string> violations() const;

  void validate() const {
    const auto v = violations();
    if (!v.empty()) fail(Errc::InfeasibleParameters, "violates " + v.front());
  }
};

namespace detail {

inline std::string idx(const char* name, std::size_t n) { return std::string(name) + "_" + std::to_string(n); }

// Inequalities that only involve r and eps.
inline std::vector<std::string> scalar_violations(double r, double eps) {
  std::vector<std::string> out;
  if (!(r > 2.0)) out.emplace_back("2 < r");
  if (!(r < std::numbers::e)) out.emplace_back("r < e");
  if (!(eps > 0.0)) out.emplace_back("0 < eps");
  if (!(eps < 1.0 / r)) out.emplace_back("eps < 1/r");
  if (!(eps < std::log(r))) out.emplace_back("eps < log r");
  if (!(std::log(r) + 2.0 * eps < 1.0)) out.emplace_back("log r + 2 eps < 1");
  return out;
}

// Offset between l_n and m_n, and between m_n and l_{n+1}.
inline double spacing(const ModelParams& p, std::size_t n) {
  switch (n % 4) {
    case 0: return std::log(2.0 * p.Rp);
    case 1: return p.R;
    case 2: return 1.0 + p.delta;
    default: return std::log(p.r) + 1.0;
  }
}

}  // namespace detail

inline std::vector<std::string> ModelParams::violations() const {
  auto out = detail::scalar_violations(r, eps);
  const double log_r = std::log(r);
  if (!(lambda > 0.0 && lambda < 0.5)) out.emplace_back("0 < lambda < 1/2");
  if (!(eps < 1.0 / (2.0 * Rp))) out.emplace_back("eps < 1/(2 Rp)");
  if (!(1.0 / R > eps)) out.emplace_back("1/R > eps");
  if (!(1.0 / Rp + eps < 1.0 / R)) out.emplace_back("1/Rp + eps < 1/R");
  if (!(Rp - eps > R)) out.emplace_back("Rp - eps > R");
  if (!(delta > eps)) out.emplace_back("delta > eps");
  if (stages < 1) out.emplace_back("stages >= 1");
  const auto S = static_cast<std::size_t>(std::max(stages, 0));
  if (l.size() != S + 2 || m.size() != S + 2 || x.size() != S + 1) {
    out.emplace_back("sequence lengths l, m = stages + 2 and x = stages + 1");
    return out;
  }
  if (l[0] != 1.0) out.emplace_back("l_0 = 1");
  for (std::size_t n = 0; n < m.size(); ++n) {
    const double s = detail::spacing(*this, n);
    const char* tag[] = {"log(2Rp)", "R", "1 + delta", "log r + 1"};
    if (!(m[n] - s > l[n])) {
      out.push_back(n % 4 == 3 ? detail::idx("m", n) + " > " + detail::idx("l", n) + " + log r + 1"
                               : detail::idx("m", n) + " - " + tag[n % 4] + " > " + detail::idx("l", n));
    }
    if (n + 1 < l.size() && !(l[n + 1] > m[n] + s)) {
      out.push_back(detail::idx("l", n + 1) + " > " + detail::idx("m", n) + " + " + tag[n % 4]);
    }
  }
  for (std::size_t n = 0; n < x.size(); ++n) {
    if (n % 4 == 2) {
      if (!(l[n + 1] < x[n] && x[n] < m[n + 1])) {
        out.push_back(detail::idx("l", n + 1) + " < " + detail::idx("x", n) + " < " + detail::idx("m", n + 1));
      }
      if (!(m[n + 1] - x[n] < log_r + eps)) {
        out.push_back(detail::idx("m", n + 1) + " - " + detail::idx("x", n) + " < log r + eps");
      }
    } else {
      if (!(m[n] < x[n] && x[n] < l[n + 1])) {
        out.push_back(detail::idx("m", n) + " < " + detail::idx("x", n) + " < " + detail::idx("l", n + 1));
      }
      if (n % 4 == 3 && !(x[n] - m[n] < log_r + eps)) {
        out.push_back(detail::idx("x", n) + " - " + detail::idx("m", n) + " < log r + eps");
      }
    }
    // L_n avoids every E_j and lies right of H_n.
    if (!(x[n] > l[n])) out.push_back(detail::idx("x", n) + " > " + detail::idx("l", n));
    for (std::size_t j = 0; j < m.size(); ++j) {
      if (std::abs(x[n] - m[j]) <= e_extent(j)) {
        out.push_back("L_" + std::to_string(n) + " disjoint from " + detail::idx("E", j));
      }
    }
  }
  return out;
}

struct Calibration {
  double lambda = 0.0;
  double R = 0.0;
  double Rp = 0.0;
};

namespace detail {

// Minimum of f over both circles |z| = rho, 1/rho with n samples each.
template <class F>
double min_on_circles(double rho, std::size_t n, F&& f) {
  double best = std::numeric_limits<double>::infinity();
  for (double rad : {rho, 1.0 / rho}) {
    for (std::size_t k = 0; k < n; ++k) {
      const double t = 2.0 * pi * static_cast<double>(k) / static_cast<double>(n);
      best = std::min(best, f(std::polar(rad, t)));
    }
  }
  return best;
}

// Bound on |d psi / d theta| on |z| = rho times half the angular spacing.
inline double psi_padding(double lambda, double rho, std::size_t n) {
  return lambda * (rho + 1.0 / rho) * pi / static_cast<double>(n);
}

}  // namespace detail

/// lambda, R and R' for the given component D.
inline Calibration calibrate(double r, double eps, const PhiComponent& D, std::size_t samples = calibration_samples) {
  const auto bad = detail::scalar_violations(r, eps);
  if (!bad.empty()) fail(Errc::InfeasibleParameters, "violates " + bad.front());
  Calibration c;

  // lambda: largest with psi(closed annulus) inside {z in D : dist(z, dD) > eps}.
  const auto lambda_ok = [&](double lambda) {
    const double clearance =
        detail::min_on_circles(r, samples, [&](Complex z) { return D.signed_clearance(psi(lambda, z)); });
    return clearance - detail::psi_padding(lambda, r, samples) > eps;
  };
  double lo = 0.0, hi = 0.5;
  if (!lambda_ok(1e-12) || lambda_ok(hi)) fail(Errc::CalibrationFailed, "cannot bracket lambda in (0, 1/2)");
  while (hi - lo > 1e-9) {
    const double mid = 0.5 * (lo + hi);
    (lambda_ok(mid) ? lo : hi) = mid;
  }
  c.lambda = lo;
  if (!(c.lambda > 0.0 && c.lambda < 0.5)) fail(Errc::CalibrationFailed, "lambda must lie in (0, 1/2)");

  // R: smallest with |psi| > 1 + eps on both boundary circles of A_R.
  const auto R_ok = [&](double rho) {
    const double low = detail::min_on_circles(rho, samples, [&](Complex z) { return std::abs(psi(c.lambda, z)); });
    return low - detail::psi_padding(c.lambda, rho, samples) > 1.0 + eps;
  };
  lo = 1.0;
  hi = 2.0;
  while (!R_ok(hi)) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e6) fail(Errc::CalibrationFailed, "no R with |psi| > 1 + eps on the boundary of A_R");
  }
  while (hi - lo > 1e-9 * hi) {
    const double mid = 0.5 * (lo + hi);
    (R_ok(mid) ? hi : lo) = mid;
  }
  c.R = hi;
  if (!(c.R * eps < 1.0)) fail(Errc::CalibrationFailed, "1/R > eps fails");

  c.Rp = c.R + std::max(10.0 * eps, 2.0 * eps / (1.0 - c.R * eps));
  for (int it = 0; !(1.0 / c.Rp + eps < 1.0 / c.R && c.Rp - eps > c.R); ++it) {
    if (it > 100000) fail(Errc::CalibrationFailed, "no admissible R'");
    c.Rp += 10.0 * eps;
  }
  return c;
}

/// Parameters together with the traced component D.
class ModelLab {
 public:
  ModelLab(ModelParams params, std::shared_ptr<const PhiComponent> component)
      : params_(std::move(params)), component_(std::move(component)) {
    params_.validate();
  }

  /// Calibrates and greedily places l_n, m_n, x_n, each `margin` past its binding bound.
  static ModelLab build(double r, double eps, double margin, int stages = 8,
                        std::size_t resolution = default_trace_resolution) {
    const auto bad = detail::scalar_violations(r, eps);
    if (!bad.empty()) fail(Errc::InfeasibleParameters, "violates " + bad.front());
    if (!(margin > 0.0)) fail(Errc::InvalidParameter, "margin must be positive");
    if (stages < 1) fail(Errc::InvalidParameter, "stages must be >= 1");
    auto D = std::make_shared<const PhiComponent>(trace_phi_component(r, eps, resolution));
    const Calibration c = calibrate(r, eps, *D);
    ModelParams p;
    p.r = r;
    p.eps = eps;
    p.lambda = c.lambda;
    p.R = c.R;
    p.Rp = c.Rp;
    p.delta = 2.0 * eps;
    p.stages = stages;
    const auto S = static_cast<std::size_t>(stages);
    p.l.assign(1, 1.0);
    for (std::size_t n = 0; n < S + 2; ++n) {
      const double s = detail::spacing(p, n);
      p.m.push_back(p.l[n] + s + margin);
      if (n + 1 < S + 2) p.l.push_back(p.m[n] + s + margin);
    }
    const double log_r = std::log(r);
    for (std::size_t n = 0; n <= S; ++n) {
      switch (n % 4) {
        case 0:
        case 1: p.x.push_back(0.5 * (p.m[n] + p.e_extent(n) + p.l[n + 1])); break;
        case 2: p.x.push_back(p.m[n + 1] - log_r - 0.5 * eps); break;
        default: p.x.push_back(p.m[n] + log_r + 0.5 * eps); break;
      }
    }
    return ModelLab(std::move(p), std::move(D));
  }

  const ModelParams& params() const { return params_; }
  const PhiComponent& component() const { return *component_; }
  std::shared_ptr<const PhiComponent> component_ptr() const { return component_; }

  void check_stage(long n, long last) const {
    if (n < 0 || n > last) {
      fail(Errc::StageOutOfRange, "stage " + std::to_string(n) + " outside [0, " + std::to_string(last) + "]");
    }
  }

  regions::Region H(long n) const {
    check_stage(n, params_.stages + 1);
    return {regions::HalfPlane{params_.l[static_cast<std::size_t>(n)], true}, regions::Role::H, n};
  }

  regions::Region E(long n) const {
    check_stage(n, params_.stages + 1);
    const auto k = static_cast<std::size_t>(n);
    const double c = params_.m[k];
    const double e = params_.e_extent(k);
    if (k % 4 == 0 || k % 4 == 3) return {regions::VerticalStrip{c, e}, regions::Role::E, n};
    return {regions::Disk{{c, 0.0}, e}, regions::Role::E, n};
  }

  regions::Region G(long n) const {
    check_stage(n, params_.stages + 1);
    const auto k = static_cast<std::size_t>(n);
    const double c = params_.m[k];
    const double log_r = std::log(params_.r);
    switch (k % 4) {
      case 0: return {regions::VerticalStrip{c, log_r}, regions::Role::G, n};
      case 1: return {regions::Annulus{{c, 0.0}, 1.0 / params_.r, params_.r}, regions::Role::G, n};
      case 2: return {regions::PhiPreimage{c, component_}, regions::Role::G, n};
      default: return {regions::VerticalStrip{c, log_r}, regions::Role::G, n};
    }
  }

  regions::Region L(long n) const {
    check_stage(n, params_.stages);
    return {regions::VerticalLine{params_.x[static_cast<std::size_t>(n)]}, regions::Role::L, n};
  }

  /// Stage-n map: tau, psi, phi, sigma by n mod 4, recentred at m_n and m_{n+1}.
  Complex stage_map(long n, Complex z) const {
    check_stage(n, params_.stages);
    const auto k = static_cast<std::size_t>(n);
    const Complex u = z - params_.m[k];
    const double next = params_.m[k + 1];
    const double log_r = std::log(params_.r);
    switch (k % 4) {
      case 0: return std::exp(u / 2.0) + next;
      case 1:
        if (std::abs(u) <= pole_guard) fail(Errc::PoleHit, "stage " + std::to_string(n) + " pole at m_n");
        return psi(params_.lambda, u) + next;
      case 2:
        if (std::abs(u - Complex{0.0, 1.0}) <= pole_guard || std::abs(u + Complex{0.0, 1.0}) <= pole_guard) {
          fail(Errc::PoleHit, "stage " + std::to_string(n) + " pole at m_n +- i");
        }
        return phi(u) + next;
      default: return u * (log_r - params_.eps) / log_r + next;
    }
  }

  struct Pole {
    long stage;
    Complex point;
  };

  /// Poles of the stage maps: m_{4k+1} and m_{4k+2} +- i.
  std::vector<Pole> poles() const {
    std::vector<Pole> out;
    for (long n = 0; n <= params_.stages; ++n) {
      const double c = params_.m[static_cast<std::size_t>(n)];
      if (n % 4 == 1) out.push_back({n, {c, 0.0}});
      if (n % 4 == 2) {
        out.push_back({n, {c, 1.0}});
        out.push_back({n, {c, -1.0}});
      }
    }
    return out;
  }

 private:
  ModelParams params_;
  std::shared_ptr<const PhiComponent> component_;
};

/// Validated parameters from the greedy construction.
inline ModelParams generate_params(double r, double eps, double margin, int stages = 8) {
  return ModelLab::build(r, eps, margin, stages).params();
}

/// Evaluates stage n of the model map for the given parameters.
inline Complex stage_map(const ModelLab& lab, long n, Complex z) { return lab.stage_map(n, z); }

struct ContainmentReport {
  long stage = 0;
  std::size_t samples = 0;
  /// Smallest Euclidean clearance of an image inside G_{n+1}.
  double min_clearance = 0.0;
  /// Worst-case loss between samples; 0 for stages with exact extremal sets.
  double padding = 0.0;
  double certified_clearance = 0.0;
  std::string method;
  double eps = 0.0;
  /// eps / 10^n, recorded only.
  double eps_n = 0.0;
  /// Bound on the total approximation error, sum of eps_m^3.
  double budget = 0.0;
  Complex worst_point;
  Complex worst_image;
  bool passed = false;
};

namespace detail {

inline std::vector<Complex> grid(double x0, double x1, double y0, double y1, std::size_t count) {
  const auto side = static_cast<std::size_t>(std::max(2.0, std::floor(std::sqrt(static_cast<double>(count)))));
  std::vector<Complex> out;
  out.reserve(side * side);
  for (std::size_t i = 0; i < side; ++i) {
    for (std::size_t j = 0; j < side; ++j) {
      // Cell centres stay off the edges.
      const double s = (static_cast<double>(i) + 0.5) / static_cast<double>(side);
      const double t = (static_cast<double>(j) + 0.5) / static_cast<double>(side);
      out.emplace_back(x0 + s * (x1 - x0), y0 + t * (y1 - y0));
    }
  }
  return out;
}

inline std::vector<Complex> segment(Complex a, Complex b, std::size_t count) {
  std::vector<Complex> out;
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(a + (b - a) * (static_cast<double>(i) / static_cast<double>(count - 1)));
  }
  return out;
}

}  // namespace detail

/// Maps boundary and interior samples of G_n through stage n and checks the
/// images against G_{n+1}. Throws ContainmentViolated with a witness.
inline ContainmentReport verify_containment(const ModelLab& lab, long n, std::size_t samples) {
  const ModelParams& p = lab.params();
  if (n < 0 || n >= p.stages) fail(Errc::StageOutOfRange, "stage " + std::to_string(n) + " has no certified target");
  if (samples < 1000) fail(Errc::InvalidParameter, "need at least 1000 samples");
  const auto k = static_cast<std::size_t>(n);
  const double c = p.m[k];
  const double log_r = std::log(p.r);
  const regions::Region target = lab.G(n + 1);

  ContainmentReport rep;
  rep.stage = n;
  rep.eps = p.eps;
  rep.eps_n = p.eps / std::pow(10.0, static_cast<double>(n));
  rep.budget = std::pow(p.eps, 3) * 1000.0 / 999.0;

  std::vector<Complex> pts;
  switch (k % 4) {
    case 0: {
      // |tau| depends on Re z only and tau has period 4 pi i: the edges carry the extremes.
      const std::size_t edge = samples / 4;
      for (double s : {-1.0, 1.0}) {
        const auto e = detail::segment({c + s * log_r, 0.0}, {c + s * log_r, 4.0 * pi}, edge);
        pts.insert(pts.end(), e.begin(), e.end());
      }
      const auto g = detail::grid(c - log_r, c + log_r, 0.0, 4.0 * pi, samples - pts.size());
      pts.insert(pts.end(), g.begin(), g.end());
      rep.method = "exact-radial";
      break;
    }
    case 1: {
      const std::size_t per_circle = 3 * samples / 8;
      for (double rad : {1.0 / p.r, p.r}) {
        for (std::size_t j = 0; j < per_circle; ++j) {
          pts.push_back(Complex{c, 0.0} +
                        std::polar(rad, 2.0 * pi * static_cast<double>(j) / static_cast<double>(per_circle)));
        }
      }
      // Interior grid in (log |z - m_n|, arg).
      for (Complex q : detail::grid(-log_r, log_r, 0.0, 2.0 * pi, samples - pts.size())) {
        pts.push_back(Complex{c, 0.0} + std::polar(std::exp(q.real()), q.imag()));
      }
      rep.method = "lipschitz";
      rep.padding = detail::psi_padding(p.lambda, p.r, per_circle);
      break;
    }
    case 2: {
      constexpr double image_window = 20.0;
      // sup |Re phi| over D is attained on dD, where it equals log r - eps.
      const auto ring = lab.component().boundary();
      const std::size_t want = samples / 2;
      const std::size_t stride = std::max<std::size_t>(1, ring.size() / want);
      for (std::size_t j = 0; j + 1 < ring.size(); j += stride) {
        const Complex z = ring[j];
        // Near +-i the recentring error is amplified by |phi'|; keep the image window of the grid.
        if (std::abs(z - Complex{0.0, 1.0}) < 1e-9 || std::abs(z + Complex{0.0, 1.0}) < 1e-9) continue;
        if (std::abs(phi(z)) > image_window) continue;
        pts.push_back(z + c);
      }
      const double a = lab.component().level();
      for (Complex w : detail::grid(-a, a, -image_window, image_window, samples - pts.size())) pts.push_back(phi_inverse(w) + c);
      rep.method = "maximum-principle";
      break;
    }
    default: {
      const std::size_t edge = samples / 4;
      for (double s : {-1.0, 1.0}) {
        const auto e = detail::segment({c + s * log_r, -10.0}, {c + s * log_r, 10.0}, edge);
        pts.insert(pts.end(), e.begin(), e.end());
      }
      const auto g = detail::grid(c - log_r, c + log_r, -10.0, 10.0, samples - pts.size());
      pts.insert(pts.end(), g.begin(), g.end());
      rep.method = "affine";
      break;
    }
  }

  const regions::Region source = lab.G(n);
  rep.min_clearance = std::numeric_limits<double>::infinity();
  for (Complex z : pts) {
    if (k % 4 == 2 ? !lab.component().contains(z - c) && std::abs(regions::signed_clearance(source.shape, z)) > 1e-9
                   : regions::signed_clearance(source.shape, z) < -1e-12) {
      fail(Errc::ContainmentViolated, "sample outside G_" + std::to_string(n));
    }
    const Complex w = lab.stage_map(n, z);
    const double cl = regions::signed_clearance(target.shape, w);
    if (cl < rep.min_clearance) {
      rep.min_clearance = cl;
      rep.worst_point = z;
      rep.worst_image = w;
    }
  }
  rep.samples = pts.size();
  rep.certified_clearance = rep.min_clearance - rep.padding;
  const auto witness = [&] {
    return " at z = (" + std::to_string(rep.worst_point.real()) + ", " + std::to_string(rep.worst_point.imag()) +
           "), image clearance " + std::to_string(rep.min_clearance);
  };
  if (!(rep.min_clearance >= 0.0)) {
    fail(Errc::ContainmentViolated, "image leaves G_" + std::to_string(n + 1) + witness());
  }
  if (!(rep.min_clearance >= p.eps * (1.0 - rounding_allowance))) {
    fail(Errc::ContainmentViolated, "clearance below eps in G_" + std::to_string(n + 1) + witness());
  }
  if (!(rep.certified_clearance > rep.budget)) {
    fail(Errc::ContainmentViolated, "padded clearance does not cover the approximation budget" + witness());
  }
  rep.passed = true;
  return rep;
}

struct AuditFact {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool passed = false;
};

struct StageAudit {
  long stage = 0;
  std::string expected;
  bool bounded = false;
  silhouette::Connectivity connectivity;
  std::vector<AuditFact> facts;
};

struct ConnectivityAudit {
  std::vector<StageAudit> stages;

  silhouette::ConnectivitySignature signature() const {
    silhouette::ConnectivitySignature sig;
    sig.source = "modelmap connectivity audit";
    for (const auto& s : stages) sig.entries.push_back({s.connectivity, s.bounded});
    return sig;
  }
};

/// Expected topology of U_{4j+i}, j < k, with the numeric facts behind it.
inline ConnectivityAudit connectivity_audit(const ModelLab& lab, long k) {
  const ModelParams& p = lab.params();
  if (k < 1 || 4 * k > p.stages) {
    fail(Errc::StageOutOfRange, "k = " + std::to_string(k) + " needs 4k <= stages = " + std::to_string(p.stages));
  }
  ConnectivityAudit out;
  const auto add = [](StageAudit& s, std::string name, double value, double threshold, bool ok) {
    s.facts.push_back({std::move(name), value, threshold, ok});
  };
  for (long n = 0; n < 4 * k; ++n) {
    const auto idx = static_cast<std::size_t>(n);
    const double c = p.m[idx];
    StageAudit s;
    s.stage = n;
    s.bounded = regions::is_bounded(lab.G(n).shape);
    switch (n % 4) {
      case 0: {
        s.expected = "unbounded simply connected";
        s.connectivity = 1;
        // E_n edges map to |w - m_{n+1}| = (2R')^{-1/2} or (2R')^{1/2}.
        double closest = std::numeric_limits<double>::infinity();
        const double hw = p.e_extent(idx);
        for (double side : {-1.0, 1.0}) {
          for (Complex z : detail::segment({c + side * hw, 0.0}, {c + side * hw, 4.0 * pi}, 2048)) {
            closest = std::min(closest, std::abs(lab.stage_map(n, z) - p.m[idx + 1]));
          }
        }
        const double floor = 1.0 / (2.0 * p.Rp);
        add(s, "min |tau(dE_n) - m_{n+1}|", closest, floor,
            closest > floor && closest >= (1.0 - 1e-12) / std::sqrt(2.0 * p.Rp));
        add(s, "G_n unbounded", s.bounded ? 0.0 : 1.0, 1.0, !s.bounded);
        break;
      }
      case 1: {
        s.expected = "bounded doubly connected";
        s.connectivity = 2;
        const auto core = SampledCurve::circle({c, 0.0}, 1.0, 256);
        const long w = winding_number([](Complex z) { return z; }, core, {c, 0.0});
        add(s, "core curve winding about pole m_n", static_cast<double>(w), 1.0, w == 1);
        add(s, "G_n bounded", s.bounded ? 1.0 : 0.0, 1.0, s.bounded);
        break;
      }
      case 2: {
        s.expected = "bounded simply connected";
        s.connectivity = 1;
        const regions::Region g = lab.G(n);
        const auto ring = lab.component().boundary();
        SampledCurve inset;
        for (Complex z : ring) inset.points.push_back(0.99 * z + c);
        for (double sgn : {1.0, -1.0}) {
          const Complex pole{c, sgn};
          add(s, sgn > 0 ? "pole m_n + i outside G_n" : "pole m_n - i outside G_n", 0.0, 0.0,
              !regions::contains(g.shape, pole));
          const long w = winding_number([](Complex z) { return z; }, inset, pole);
          add(s, sgn > 0 ? "boundary winding about m_n + i" : "boundary winding about m_n - i",
              static_cast<double>(w), 0.0, w == 0);
        }
        const long around_center = winding_number([](Complex z) { return z; }, inset, {c, 0.0});
        add(s, "boundary winding about m_n", static_cast<double>(around_center), 1.0, around_center == 1);
        add(s, "G_n bounded", s.bounded ? 1.0 : 0.0, 1.0, s.bounded);
        break;
      }
      default: {
        s.expected = "unbounded simply connected";
        s.connectivity = 1;
        const double log_r = std::log(p.r);
        const double before = c - p.x[idx - 1];
        const double after = p.x[idx] - c;
        add(s, "m_n - x_{n-1}", before, log_r + p.eps, before < log_r + p.eps && before > log_r);
        add(s, "x_n - m_n", after, log_r + p.eps, after < log_r + p.eps && after > log_r);
        add(s, "G_n unbounded", s.bounded ? 0.0 : 1.0, 1.0, !s.bounded);
        break;
      }
    }
    for (const auto& f : s.facts) {
      if (!f.passed) {
        fail(Errc::AuditFailed, "stage " + std::to_string(n) + ": " + f.name + " = " + std::to_string(f.value));
      }
    }
    out.stages.push_back(std::move(s));
  }
  return out;
}

}  // namespace wanderlab::modelmap
