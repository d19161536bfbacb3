#pragma once

#include <stdexcept>
#include <string>

namespace lfl3 {

enum class ErrorCode {
  UndeclaredSymbol,
  DomainViolation,
  TailAnalysisFailed,
  ParseError,
  SchemaError,
  DomainError,
  PreconditionUnverifiable,
  InvariantViolated,
  HypothesisFailed,
  NoBoundExtractable,
  ConversionSlackTooLarge,
  ProfileUnsupported,
  DenominatorNonpositive,
  NoConstantUBound,
  ProviderHypothesisFailed,
  NoFeasibleParams,
  ScaleExceeded,
  NonlinearShape,
  Internal,
};

const char* to_string(ErrorCode c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace lfl3
