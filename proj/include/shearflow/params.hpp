#pragma once

#include <stdexcept>

namespace shearflow {

/// Physical parameters.  The paper's scaling fixes mu = g = 1; both are kept
/// configurable for residual checks.  Domain dimensions live on the Grid.
struct Params {
  double sigma = 0.0;   // surface tension coefficient, >= 0
  double gamma = 0.0;   // tangential forcing, >= 0
  double g = 1.0;       // gravity, > 0
  double mu = 1.0;      // viscosity, > 0
  double P_ext = 0.0;   // constant external pressure

  void validate() const {
    if (sigma < 0 || gamma < 0)
      throw std::invalid_argument("Params: sigma, gamma must be >= 0");
    if (g <= 0 || mu <= 0)
      throw std::invalid_argument("Params: g, mu must be > 0");
  }
};

}  // namespace shearflow
