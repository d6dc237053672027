#pragma once

// Connectivity bookkeeping for wandering domains: the Riemann-Hurwitz
// relation, modulus growth along a doubly connected orbit, eventual
// connectivity of a finite signature, and the decision table from
// (eventual connectivity, moduli, Baker flag) to internal dynamics.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wanderlab/errors.hpp"

namespace wanderlab::silhouette {

/// Element of N u {infinity}.
class Connectivity {
 public:
  constexpr Connectivity() = default;
  constexpr Connectivity(std::uint64_t k) : value_(k) {}  // NOLINT(google-explicit-constructor)
  static constexpr Connectivity infinite() {
    Connectivity c;
    c.infinite_ = true;
    return c;
  }

  constexpr bool is_infinite() const { return infinite_; }
  constexpr std::uint64_t value() const {
    if (infinite_) fail(Errc::InvalidParameter, "infinite connectivity has no finite value");
    return value_;
  }

  friend constexpr bool operator==(const Connectivity&, const Connectivity&) = default;

  std::string str() const { return infinite_ ? std::string("inf") : std::to_string(value_); }

 private:
  std::uint64_t value_ = 1;
  bool infinite_ = false;
};

struct RHInstance {
  Connectivity c_V;     ///< connectivity of the image domain
  Connectivity degree;  ///< degree of f restricted to U
  std::uint64_t delta = 0;  ///< critical points of f in U, with multiplicity
};

/// c(U) - 2 = n (c(V) - 2) + delta.
inline Connectivity riemann_hurwitz(const RHInstance& inst) {
  if (inst.degree.is_infinite()) {
    fail(Errc::InfiniteDegree, "infinite degree: f covers every value of V infinitely often; "
                               "c(V) >= 3 then forces c(U) = infinity");
  }
  const std::uint64_t n = inst.degree.value();
  if (n == 0) fail(Errc::InvalidParameter, "degree must be >= 1");
  if (inst.c_V.is_infinite()) return Connectivity::infinite();
  const std::uint64_t cV = inst.c_V.value();
  if (cV == 0) fail(Errc::InvalidParameter, "connectivity must be >= 1");
  // Signed arithmetic: c(V) = 1 makes the first term negative.
  const long double cU = static_cast<long double>(n) * (static_cast<long double>(cV) - 2.0L) +
                         static_cast<long double>(inst.delta) + 2.0L;
  if (cU < 1.0L) {
    fail(Errc::InfeasibleSurgery, "Riemann-Hurwitz yields c(U) = " + std::to_string(static_cast<long long>(cU)));
  }
  return Connectivity(static_cast<std::uint64_t>(cU));
}

/// All (degree m >= 1, delta >= 0) with k - 2 = m (k - 2) + delta.
inline std::vector<std::pair<std::uint64_t, std::uint64_t>> feasible_degrees(std::uint64_t k) {
  if (k <= 2) fail(Errc::OutOfScope, "k <= 2 leaves the degree free; use classify_silhouette");
  std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
  const std::uint64_t rhs = k - 2;
  for (std::uint64_t m = 1; m * rhs <= rhs; ++m) out.emplace_back(m, rhs - m * rhs);
  return out;
}

/// Mod U_n = D_n * mod0.
inline std::vector<double> modulus_growth(double mod0, const std::vector<unsigned>& degrees) {
  if (!(mod0 > 0.0)) fail(Errc::InvalidParameter, "initial modulus must be positive");
  std::vector<double> out{mod0};
  out.reserve(degrees.size() + 1);
  for (unsigned d : degrees) {
    if (d == 0) fail(Errc::InvalidParameter, "degrees must be >= 1");
    out.push_back(out.back() * d);
  }
  return out;
}

struct SignatureEntry {
  Connectivity connectivity;
  bool bounded = true;
};

struct ConnectivitySignature {
  std::vector<SignatureEntry> entries;
  std::string source;
};

struct EventualConnectivity {
  /// Set when a constant suffix was found.
  std::optional<Connectivity> k;
  /// Minimal period of the suffix when it is not constant.
  std::optional<std::size_t> period;
  std::size_t suffix_length = 0;
  /// Boundedness flags over one period of the detected suffix.
  std::vector<bool> boundedness_pattern;
};

inline constexpr std::size_t min_signature_length = 8;

/// Finds the p-periodic suffix that explains the most data, requiring at
/// least two full repetitions and at least half of the signature. Ties go
/// to the smaller period; p = 1 means eventual connectivity exists.
inline EventualConnectivity eventual_connectivity(const ConnectivitySignature& sig) {
  const auto& e = sig.entries;
  const std::size_t n = e.size();
  if (n < min_signature_length) {
    fail(Errc::InsufficientData, "need at least " + std::to_string(min_signature_length) + " entries, got " +
                                     std::to_string(n));
  }
  std::size_t best_period = 0;
  std::size_t best_length = 0;
  for (std::size_t p = 1; 2 * p <= n; ++p) {
    std::size_t start = n - p;
    while (start > 0 && e[start - 1].connectivity == e[start - 1 + p].connectivity) --start;
    const std::size_t length = n - start;
    if (length >= 2 * p && 2 * length >= n && length > best_length) {
      best_period = p;
      best_length = length;
    }
  }
  EventualConnectivity out;
  if (best_period == 0) return out;
  out.suffix_length = best_length;
  for (std::size_t i = n - best_period; i < n; ++i) out.boundedness_pattern.push_back(e[i].bounded);
  if (best_period == 1) {
    out.k = e.back().connectivity;
  } else {
    out.period = best_period;
  }
  return out;
}

enum class DynamicsClass { Contracting, SemiContracting, EventuallyIsometric, Bimodal, Trimodal };

inline std::string to_string(DynamicsClass c) {
  switch (c) {
    case DynamicsClass::Contracting: return "Contracting";
    case DynamicsClass::SemiContracting: return "SemiContracting";
    case DynamicsClass::EventuallyIsometric: return "EventuallyIsometric";
    case DynamicsClass::Bimodal: return "Bimodal";
    case DynamicsClass::Trimodal: return "Trimodal";
  }
  return "?";
}

struct DynamicsVerdict {
  DynamicsClass cls = DynamicsClass::EventuallyIsometric;
  std::optional<std::string> contracting_lamination;
  std::optional<std::string> isometric_lamination;
  Connectivity eventual;
  std::string rule;
};

inline const std::string contracting_leaves =
    "pullbacks of the round circles C_r (level sets of h); pairs on one leaf contract";
inline const std::string isometric_leaves = "pullbacks of the radial segments L_theta; pairs on one leaf keep distance";

enum class ModuliTrend { Constant, Divergent, Other };

inline ModuliTrend moduli_trend(const std::vector<double>& moduli, double rel_tol = 1e-12) {
  if (moduli.empty()) return ModuliTrend::Other;
  const double first = moduli.front();
  const bool constant = std::all_of(moduli.begin(), moduli.end(),
                                    [&](double m) { return std::abs(m - first) <= rel_tol * std::abs(first); });
  if (constant) return ModuliTrend::Constant;
  const bool nondecreasing = std::is_sorted(moduli.begin(), moduli.end());
  return nondecreasing && moduli.back() > first ? ModuliTrend::Divergent : ModuliTrend::Other;
}

inline DynamicsVerdict classify_silhouette(const ConnectivitySignature& sig,
                                           const std::optional<std::vector<double>>& moduli, bool baker) {
  const EventualConnectivity ev = eventual_connectivity(sig);
  if (!ev.k) {
    fail(Errc::NoEventualConnectivity,
         ev.period ? "signature is periodic with period " + std::to_string(*ev.period) : "no stable suffix found");
  }
  const Connectivity k = *ev.k;
  DynamicsVerdict v;
  v.eventual = k;
  if (baker) {
    if (k.is_infinite()) {
      v.cls = DynamicsClass::Bimodal;
      v.contracting_lamination = contracting_leaves;
      v.rule = "Baker domain with infinite eventual connectivity";
    } else {
      v.cls = DynamicsClass::Trimodal;
      v.contracting_lamination = contracting_leaves;
      v.isometric_lamination = isometric_leaves;
      v.rule = "Baker domain with finite eventual connectivity";
    }
    return v;
  }
  if (k.is_infinite() || k.value() == 1) {
    fail(Errc::Unclassifiable, "eventual connectivity " + k.str() + " is outside the finite multiply connected table");
  }
  if (k.value() >= 3) {
    v.cls = DynamicsClass::EventuallyIsometric;
    v.rule = "eventual connectivity >= 3";
    return v;
  }
  if (!moduli) fail(Errc::Unclassifiable, "eventual connectivity 2 needs the modulus sequence");
  switch (moduli_trend(*moduli)) {
    case ModuliTrend::Constant:
      v.cls = DynamicsClass::EventuallyIsometric;
      v.rule = "eventual connectivity 2, constant moduli";
      return v;
    case ModuliTrend::Divergent:
      v.cls = DynamicsClass::Trimodal;
      v.contracting_lamination = contracting_leaves;
      v.isometric_lamination = isometric_leaves;
      v.rule = "eventual connectivity 2, moduli -> infinity";
      return v;
    case ModuliTrend::Other: break;
  }
  fail(Errc::Unclassifiable, "moduli are neither constant nor increasing");
}

}  // namespace wanderlab::silhouette
