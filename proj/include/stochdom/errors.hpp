#pragma once

#include <stdexcept>
#include <string>

namespace stochdom {

/// Operation not defined for this Dist alternative (e.g. pdf of an atom list).
class UnsupportedVariant : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// v_1 == v_S: the Dirichlet-weighted value is a point mass.
class DegenerateBelief : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A regional certifier was called outside its parameter region.
class RegionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace stochdom
