#pragma once

#include <stdexcept>
#include <string>

namespace thinfilm {

enum class Errc {
  InvalidGeometry,
  InvalidProfile,
  OutOfDomain,
  AtKnot,
  TooFewComponents,
  TooFewPoints,
  SingularMatrix,
  NonFlatInlet,
  SpacingMismatch,
  GridMismatch,
  BadConfig,
  IoError,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& msg)
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) { throw Error(code, msg); }

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::InvalidGeometry: return "InvalidGeometry";
    case Errc::InvalidProfile: return "InvalidProfile";
    case Errc::OutOfDomain: return "OutOfDomain";
    case Errc::AtKnot: return "AtKnot";
    case Errc::TooFewComponents: return "TooFewComponents";
    case Errc::TooFewPoints: return "TooFewPoints";
    case Errc::SingularMatrix: return "SingularMatrix";
    case Errc::NonFlatInlet: return "NonFlatInlet";
    case Errc::SpacingMismatch: return "SpacingMismatch";
    case Errc::GridMismatch: return "GridMismatch";
    case Errc::BadConfig: return "BadConfig";
    case Errc::IoError: return "IoError";
  }
  return "Error";
}

}  // namespace thinfilm
