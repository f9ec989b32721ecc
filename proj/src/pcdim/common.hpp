#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pcdim {

enum class Status {
  Ok = 0,
  InvalidArgument = 1,
  TooFewObservations = 2,
  ZeroVariance = 3,
  DegenerateVariance = 4,
  NonConvergence = 5,
  RankDeficient = 6,
  ParseError = 7,
  MissingValue = 8,
  RaggedRows = 9,
  EmptyInput = 10,
  OutOfRange = 11,
  IoError = 12,
  SpikeBelowNoise = 13,
  DegenerateResiduals = 14,
};

class Error : public std::runtime_error {
 public:
  Error(Status code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Status code() const { return code_; }

 private:
  Status code_;
};

inline const char* status_name(Status s) {
  switch (s) {
    case Status::Ok: return "ok";
    case Status::InvalidArgument: return "invalid_argument";
    case Status::TooFewObservations: return "too_few_observations";
    case Status::ZeroVariance: return "zero_variance";
    case Status::DegenerateVariance: return "degenerate_variance";
    case Status::NonConvergence: return "non_convergence";
    case Status::RankDeficient: return "rank_deficient";
    case Status::ParseError: return "parse_error";
    case Status::MissingValue: return "missing_value";
    case Status::RaggedRows: return "ragged_rows";
    case Status::EmptyInput: return "empty_input";
    case Status::OutOfRange: return "out_of_range";
    case Status::IoError: return "io_error";
    case Status::SpikeBelowNoise: return "spike_below_noise";
    case Status::DegenerateResiduals: return "degenerate_residuals";
  }
  return "unknown";
}

[[noreturn]] inline void fail(Status code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, Status code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace pcdim
