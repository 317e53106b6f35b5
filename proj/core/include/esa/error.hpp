// Error taxonomy shared by loaders, learners and the CLI.

#pragma once

#include <stdexcept>
#include <string>

namespace esa {

enum class ErrorKind {
  // input validation
  MalformedRecord,
  DanglingLabel,
  OverlappingMentions,
  TokenMismatch,
  CyclicTree,
  MalformedRow,
  DisjointnessViolation,
  EmptyText,
  UnknownEntity,
  // learning
  SingleClassData,
  NegativeCount,
  InsufficientClassSupport,
  // everything else
  Internal,
};

// True for kinds caused by bad user input rather than a bug; the CLI
// maps these to exit code 2, all others to 1.
constexpr bool isValidationError(ErrorKind k) {
  return k != ErrorKind::Internal;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message)
      : std::runtime_error(std::move(message)), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace esa
