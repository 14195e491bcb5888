#pragma once

#include <stdexcept>

namespace gaptooth {

/// A computation produced non-finite values, blew up, or failed to converge.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace gaptooth
