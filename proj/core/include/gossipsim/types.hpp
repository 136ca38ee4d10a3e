#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace gossipsim {

using NodeId = std::uint32_t;
using TokenId = std::uint32_t;

/// Round index. Round 0 is the initial configuration; the first executed
/// round is round 1.
using Round = std::int32_t;

inline constexpr Round kNoArrival = -1;

/// Raised when a transfer plan violates the round model (a protocol bug).
class PlanError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Raised on malformed schedule files or schedules that violate the model.
class ScheduleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when generator or scheduler parameters are out of range.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace gossipsim
