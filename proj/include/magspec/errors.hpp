#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace magspec {

// Domain-level failure with a stable machine-readable code. The CLI maps
// these onto exit code 3 and an error JSON on stderr, so the code strings
// are part of the output contract and must not change casually.
class DomainError : public std::runtime_error {
 public:
  DomainError(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

struct DegenerateLevel : DomainError {
  explicit DegenerateLevel(const std::string& m) : DomainError("degenerate_level", m) {}
};

struct EmptyLevel : DomainError {
  explicit EmptyLevel(const std::string& m) : DomainError("empty_level", m) {}
};

struct NoBracket : DomainError {
  explicit NoBracket(const std::string& m) : DomainError("no_bracket", m) {}
};

struct StepTooLarge : DomainError {
  explicit StepTooLarge(const std::string& m) : DomainError("step_too_large", m) {}
};

struct SpanTooShort : DomainError {
  explicit SpanTooShort(const std::string& m) : DomainError("span_too_short", m) {}
};

struct NotIsolated : DomainError {
  explicit NotIsolated(const std::string& m) : DomainError("not_isolated", m) {}
};

struct CrossingDetected : DomainError {
  explicit CrossingDetected(const std::string& m) : DomainError("crossing_detected", m) {}
};

struct WindowInvalid : DomainError {
  explicit WindowInvalid(const std::string& m) : DomainError("window_invalid", m) {}
};

struct ResourceLimit : DomainError {
  explicit ResourceLimit(const std::string& m) : DomainError("resource_limit", m) {}
};

struct DomainNotClosed : DomainError {
  explicit DomainNotClosed(const std::string& m) : DomainError("domain_not_closed", m) {}
};

struct PreconditionViolated : DomainError {
  explicit PreconditionViolated(const std::string& m) : DomainError("precondition_violated", m) {}
};

}  // namespace magspec
