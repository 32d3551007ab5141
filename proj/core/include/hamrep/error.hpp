#pragma once

#include <stdexcept>
#include <string>

namespace hamrep {

/// Malformed arguments: dimension mismatches, empty inputs, bad grids.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A function that is required to be proper has no finite value.
class PropernessError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A query point falls outside the window of an epigraph section, or a
/// constructed body touches the artificial cap of that window.
class WindowError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The construction needs an upper bound lambda(t,x) of the Lagrangian on its
/// effective domain, and the model does not supply one.
class BlcRequiredError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hamrep
