#pragma once

#include <stdexcept>
#include <string>

namespace dtplace {

// Invalid user-facing configuration (maps to CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// No SAA-feasible placement could be produced (CLI exit code 3).
class NoFeasibleState : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SizeCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Violated precondition of a library call.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace dtplace
