#pragma once

#include <stdexcept>
#include <string>

namespace hubbard {

/// Lattice parameters outside what a construction supports (odd L for a
/// plaquette partition, L < 4, FFFT sizes that are not tabulated, ...).
class UnsupportedLattice : public std::invalid_argument {
 public:
  explicit UnsupportedLattice(const std::string& what)
      : std::invalid_argument(what) {}
};

/// A caller broke a documented precondition of an operation.
class ContractViolation : public std::logic_error {
 public:
  explicit ContractViolation(const std::string& what)
      : std::logic_error(what) {}
};

}  // namespace hubbard
