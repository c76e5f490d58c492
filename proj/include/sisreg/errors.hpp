#pragma once

#include <stdexcept>
#include <string>

namespace sisreg {

enum class ErrorCode {
  BadInput,
  ConstantColumn,
  RankDeficient,
  LengthMismatch,
  BadSize,
  SingularSystem,
  OneClassOnly,
  BadSpec,
  BadRho,
  Infeasible,
  Unbounded,
  PivotLimit,
  TargetSizeUnreachable,
  ConfigError,
  IoError,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) {
  throw Error(code, msg);
}

}  // namespace sisreg
