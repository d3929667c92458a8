#pragma once

#include <stdexcept>
#include <string>

namespace bigbang {

// Every failure carries a machine-readable reason code next to the message.
class Error : public std::runtime_error {
 public:
  Error(std::string reason, const std::string& what)
      : std::runtime_error(what), reason_(std::move(reason)) {}
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::string reason_;
};

// Malformed or out-of-contract input (zero denominator, (p,q) outside the set, ...).
class RejectedInput : public Error {
 public:
  using Error::Error;
};

// Evaluation outside an operation's domain, e.g. a <= 0 in the physical chart.
class DomainError : public Error {
 public:
  using Error::Error;
};

// The collision manifold has no physical preimage.
class SingularChartError : public Error {
 public:
  using Error::Error;
};

// Real power of a negative base with an even root index.
class ImaginaryBranchError : public Error {
 public:
  using Error::Error;
};

// Requested continuation through a = 0 for a non branch-regularizable w.
class NoExtensionError : public Error {
 public:
  using Error::Error;
};

class IntegrationFailure : public Error {
 public:
  using Error::Error;
};

class FitQualityError : public Error {
 public:
  using Error::Error;
};

class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

}  // namespace bigbang
