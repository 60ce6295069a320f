// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace hst {

// Invalid or unknown configuration. The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Filter or solver breakdown (non-PD covariance, singular system). Exit code 3.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InsufficientAnchors : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InitializationFailed : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

}  // namespace hst
