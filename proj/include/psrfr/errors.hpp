#pragma once

#include <stdexcept>
#include <string>

namespace psrfr {

// Stable failure codes shared by the whole library. The Monte Carlo harness
// records these per replicate and the CLI prints them, so names must not
// change once released.
enum class ErrorCode {
  InsufficientRows,
  TooFewRows,
  DimensionTooSmall,
  ShapeMismatch,
  LengthMismatch,
  NotSymmetric,
  NotPositiveDefinite,
  IllConditioned,
  RankDeficient,
  DegenerateSpectrum,
  ZeroVariance,
  IoError,
  ParseError,
  MissingColumn,
  ConfigInvalid,
};

inline const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InsufficientRows:    return "InsufficientRows";
    case ErrorCode::TooFewRows:          return "TooFewRows";
    case ErrorCode::DimensionTooSmall:   return "DimensionTooSmall";
    case ErrorCode::ShapeMismatch:       return "ShapeMismatch";
    case ErrorCode::LengthMismatch:      return "LengthMismatch";
    case ErrorCode::NotSymmetric:        return "NotSymmetric";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::IllConditioned:      return "IllConditioned";
    case ErrorCode::RankDeficient:       return "RankDeficient";
    case ErrorCode::DegenerateSpectrum:  return "DegenerateSpectrum";
    case ErrorCode::ZeroVariance:        return "ZeroVariance";
    case ErrorCode::IoError:             return "IoError";
    case ErrorCode::ParseError:          return "ParseError";
    case ErrorCode::MissingColumn:       return "MissingColumn";
    case ErrorCode::ConfigInvalid:       return "ConfigInvalid";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(error_code_name(code)) +
                           (detail.empty() ? "" : ": " + detail)),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  const char* code_name() const noexcept { return error_code_name(code_); }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& detail = "") {
  throw Error(code, detail);
}

}  // namespace psrfr
