#pragma once

#include <stdexcept>

namespace hpm {

/// A solver or protocol precondition is violated (for example the contraction
/// condition gamma < 1 fails, or required RIP constants are missing). The CLI
/// maps this to exit code 2; plain usage errors map to exit code 1.
class ContractViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hpm
