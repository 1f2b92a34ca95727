#pragma once

#include <stdexcept>
#include <string>

namespace anticoord {

// Bad user-supplied parameters or scenario configuration. Maps to CLI exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A caller broke a documented precondition.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// The worst-agent-last scheme has no per-agent back-off probability; callers
// must go through resolve_worst_agent_last instead.
class UnsupportedScheme : public ContractViolation {
 public:
  using ContractViolation::ContractViolation;
};

// The quantity is mathematically undefined for the given input.
class UndefinedInput : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Maps to CLI exit code 3.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace anticoord
