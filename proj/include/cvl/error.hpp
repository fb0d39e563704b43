#pragma once

#include <stdexcept>
#include <string>

namespace cvl {

enum class ErrorCode {
  kEmptyInput,
  kTransformLengthUnsupported,
  kBoundExceedsPrimeCapacity,
  kOrderUnavailable,
  kModuliNotCoprime,
  kParse,
  kEncoding,
  kParityViolation,
  kCorruptedConvolution,
  kDimensionMismatch,
  kInternalBound,
  kInvalidArgument,
  kIo,
};

const char* to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above; the
// message is meant for humans and may change.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cvl
