#pragma once

#include <stdexcept>
#include <string>

namespace nlos {

// Precondition / malformed-input violations. The CLI maps these to exit code 2.
struct ContractError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Non-finite values encountered during training or inference. CLI exit code 3.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw ContractError(msg);
}

}  // namespace nlos
