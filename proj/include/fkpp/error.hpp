#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fkpp {

enum class ErrorCode {
  DisconnectedGraph,
  NoPendant,
  NonpositiveLength,
  MalformedGraph,
  InvalidDomain,
  OrbitNotClosed,
  LoopTooLong,
  MeshTooCoarse,
  BelowThreshold,
  OutsideRegion,
  NewtonStalled,
  StepTooLarge,
  LinearSolveFailure,
  NegativeInitialData,
  ComparisonViolated,
  NotAFlower,
  ParseError,
};

std::string_view to_string(ErrorCode code);

/// Exception carrying a machine-readable code; every module throws this.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace fkpp
