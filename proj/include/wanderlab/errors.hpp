#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wanderlab {

enum class Errc {
  InvalidParameter,
  PointOutsideDomain,
  InvalidWinding,
  StageOutOfRange,
  AmbiguousClassification,
  VerdictMismatch,
  DegenerateBasePoint,
  InfeasibleSurgery,
  InfiniteDegree,
  OutOfScope,
  InsufficientData,
  NoEventualConnectivity,
  Unclassifiable,
  InfeasibleParameters,
  CalibrationFailed,
  PoleHit,
  TraceDiverged,
  ContainmentViolated,
  TargetOnCurve,
  ResolutionInsufficient,
  AuditFailed,
  UnsupportedRegion,
  OrbitEscapedDomain,
  BoundViolated,
  Inconclusive,
  ConfigError,
  IOError,
};

constexpr std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::InvalidParameter: return "InvalidParameter";
    case Errc::PointOutsideDomain: return "PointOutsideDomain";
    case Errc::InvalidWinding: return "InvalidWinding";
    case Errc::StageOutOfRange: return "StageOutOfRange";
    case Errc::AmbiguousClassification: return "AmbiguousClassification";
    case Errc::VerdictMismatch: return "VerdictMismatch";
    case Errc::DegenerateBasePoint: return "DegenerateBasePoint";
    case Errc::InfeasibleSurgery: return "InfeasibleSurgery";
    case Errc::InfiniteDegree: return "InfiniteDegree";
    case Errc::OutOfScope: return "OutOfScope";
    case Errc::InsufficientData: return "InsufficientData";
    case Errc::NoEventualConnectivity: return "NoEventualConnectivity";
    case Errc::Unclassifiable: return "Unclassifiable";
    case Errc::InfeasibleParameters: return "InfeasibleParameters";
    case Errc::CalibrationFailed: return "CalibrationFailed";
    case Errc::PoleHit: return "PoleHit";
    case Errc::TraceDiverged: return "TraceDiverged";
    case Errc::ContainmentViolated: return "ContainmentViolated";
    case Errc::TargetOnCurve: return "TargetOnCurve";
    case Errc::ResolutionInsufficient: return "ResolutionInsufficient";
    case Errc::AuditFailed: return "AuditFailed";
    case Errc::UnsupportedRegion: return "UnsupportedRegion";
    case Errc::OrbitEscapedDomain: return "OrbitEscapedDomain";
    case Errc::BoundViolated: return "BoundViolated";
    case Errc::Inconclusive: return "Inconclusive";
    case Errc::ConfigError: return "ConfigError";
    case Errc::IOError: return "IOError";
  }
  return "Unknown";
}

/// Single exception type for the library; `code()` carries the failure kind.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace wanderlab
