#pragma once

#include <string_view>
#include <vector>

#include "routerlab/types.hpp"

namespace routerlab {

/// Which implementation of a sweep to run. Both produce bit-identical results;
/// the serial path is the reference the OpenMP kernels are tested against.
enum class Execution { kSerial, kParallel };

/// Inclusive grid start, start+step, ..., end. Values are rounded to 12
/// decimals so that 0.1-steps print as 0.3 rather than 0.30000000000000004.
std::vector<double> tau_grid(double start, double end, double step);

/// {0.0, 0.1, ..., 1.0}
std::vector<double> default_tau_grid();

/// Parses "start:end:step".
std::vector<double> parse_tau_grid(std::string_view spec);

struct SweepResult {
  Curve curve;
  std::vector<double> taus;
  /// outcomes[t][i]: question i (dataset order) at taus[t].
  std::vector<std::vector<RoutingOutcome>> outcomes;
};

/// Sets the OpenMP worker count for parallel sweeps; 0 keeps the runtime default.
void set_worker_count(int jobs);

}  // namespace routerlab
