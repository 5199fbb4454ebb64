#include "routerlab/sweep.hpp"

#include <cmath>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace routerlab {

std::vector<double> tau_grid(double start, double end, double step) {
  if (!(start >= 0.0 && end <= 1.0 && start <= end)) {
    throw ValidationError("tau grid must satisfy 0 <= start <= end <= 1");
  }
  if (!(step > 0.0)) throw ValidationError("tau grid step must be positive");
  const auto count = static_cast<std::size_t>(std::floor((end - start) / step + 1e-9)) + 1;
  std::vector<double> grid;
  grid.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    grid.push_back(std::round((start + static_cast<double>(i) * step) * 1e12) / 1e12);
  }
  return grid;
}

std::vector<double> default_tau_grid() { return tau_grid(0.0, 1.0, 0.1); }

std::vector<double> parse_tau_grid(std::string_view spec) {
  double parts[3];
  std::size_t pos = 0;
  for (int i = 0; i < 3; ++i) {
    const std::size_t next = i < 2 ? spec.find(':', pos) : spec.size();
    if (next == std::string_view::npos) {
      throw ValidationError("tau grid must look like start:end:step, got '" + std::string(spec) + "'");
    }
    const std::string field(spec.substr(pos, next - pos));
    try {
      std::size_t used = 0;
      parts[i] = std::stod(field, &used);
      if (used != field.size()) throw std::invalid_argument(field);
    } catch (const std::exception&) {
      throw ValidationError("tau grid field '" + field + "' is not a number");
    }
    pos = next + 1;
  }
  return tau_grid(parts[0], parts[1], parts[2]);
}

void set_worker_count(int jobs) {
#ifdef _OPENMP
  if (jobs > 0) omp_set_num_threads(jobs);
#else
  (void)jobs;
#endif
}

}  // namespace routerlab
