#pragma once

#include <stdexcept>
#include <string>

namespace cpa {

/// Scattering observables are undefined at k = 0 (threshold).
class DegenerateKError : public std::runtime_error {
public:
  DegenerateKError() : std::runtime_error("k = 0: scattering amplitudes are undefined at threshold") {}
};

/// The integrator state stopped being finite; `x` is where it happened.
class NonFiniteStateError : public std::runtime_error {
public:
  explicit NonFiniteStateError(double x)
      : std::runtime_error("integration state became non-finite at x = " + std::to_string(x)), x(x) {}
  double x;
};

/// Left and right solves disagreed on the transmission amplitude beyond
/// tolerance, which signals a misconfigured integrator.
class TransmissionMismatchError : public std::runtime_error {
public:
  TransmissionMismatchError(double k, double rel)
      : std::runtime_error("left/right transmission amplitudes disagree at k = " + std::to_string(k) +
                           " (relative difference " + std::to_string(rel) + ")"),
        k(k), relative_difference(rel) {}
  double k;
  double relative_difference;
};

/// Malformed potential/run configuration (bad file, unknown field, ...).
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cpa
