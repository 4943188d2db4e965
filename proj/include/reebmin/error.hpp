#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace reebmin {

// Stable error codes. The numeric values are part of the CLI contract and are
// echoed in JSON reports; append new codes, never renumber.
enum class ErrorCode {
  RankError = 10,
  NotStrictlyConvex = 20,
  RedundantNormal = 21,
  NonPrimitive = 22,
  NotQGorenstein = 23,
  NotSimplyConnected = 24,
  WrongDimension = 25,
  ReebNotInterior = 30,
  NotGorenstein = 31,
  ConvergenceFailure = 32,
  BoundaryPoint = 33,
  NotHomologySphere = 40,
  UnsupportedDimension = 41,
  NotFano = 50,
  BadWeights = 51,
  BadParams = 60,
  DegenerateChartPoint = 61,
  StepTooLarge = 62,
  SchemaError = 70,
};

std::string_view error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace reebmin
