#pragma once

#include <stdexcept>
#include <string>

namespace symdyn {

enum class ErrorKind {
  kSchema,            // malformed input documents
  kPrecondition,      // caller violated an operation contract
  kWindowExceedsDepth,
  kUncertifiedTail,
  kHorizonTooSmall,
  kNotOneStep,
  kResolutionTooCoarse,
  kInadmissibleWord,
  kInadmissibleInput,
  kKExceedsDepth,
  kDepthMismatch,
  kZeroMass,
  kNotMixing,
  kZeroEntropyAmbient,
  kSourceCapacityExceeded,
  kNonConvergence,
  kTargetOutOfRange,
  kSourceUnavailable,
  kNotSurjective,
  kEnumerationTooLarge,
  kInternal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) {
  throw Error(kind, msg);
}

const char* error_kind_name(ErrorKind k);

}  // namespace symdyn
