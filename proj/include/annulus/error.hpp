#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace annulus {

enum class Errc {
  NotSquare,
  NotNormal,
  NoConvergence,
  Singular,
  DimensionMismatch,
  NotIsometric,
  BadRadius,
  RootInClosedDisk,
  RootOutsideInnerDisk,
  PoleHit,
  InvalidRational,
  NotInvertible,
  SeriesDivergent,
  SpectrumOnContour,
  PoleInsideContour,
  NoSpectralGap,
  NotArUnitary,
  NotUnitary,
  NotContraction,
  NotContractions,
  NotCommuting,
  BudgetExceeded,
  Parse,
};

inline const char* to_string(Errc code) {
  switch (code) {
    case Errc::NotSquare: return "NotSquare";
    case Errc::NotNormal: return "NotNormal";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::Singular: return "Singular";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::NotIsometric: return "NotIsometric";
    case Errc::BadRadius: return "BadRadius";
    case Errc::RootInClosedDisk: return "RootInClosedDisk";
    case Errc::RootOutsideInnerDisk: return "RootOutsideInnerDisk";
    case Errc::PoleHit: return "PoleHit";
    case Errc::InvalidRational: return "InvalidRational";
    case Errc::NotInvertible: return "NotInvertible";
    case Errc::SeriesDivergent: return "SeriesDivergent";
    case Errc::SpectrumOnContour: return "SpectrumOnContour";
    case Errc::PoleInsideContour: return "PoleInsideContour";
    case Errc::NoSpectralGap: return "NoSpectralGap";
    case Errc::NotArUnitary: return "NotArUnitary";
    case Errc::NotUnitary: return "NotUnitary";
    case Errc::NotContraction: return "NotContraction";
    case Errc::NotContractions: return "NotContractions";
    case Errc::NotCommuting: return "NotCommuting";
    case Errc::BudgetExceeded: return "BudgetExceeded";
    case Errc::Parse: return "Parse";
  }
  return "Unknown";
}

/// Every failure in the toolkit is reported as an Error carrying a code.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// Short %g rendering for messages.
inline std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace annulus
