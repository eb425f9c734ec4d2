#pragma once

#include <stdexcept>
#include <string>

namespace bonnet {

/// Invalid input: violated precondition, bad parameter, malformed config.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical certificate failed and the operation refused to continue
/// (non-closed form, rank defect, sign-continuity break).
class NumericalRefusal : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bonnet
