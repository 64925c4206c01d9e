#include "dtwin/reservoir/config.hpp"

#include <cmath>
#include <sstream>

#include "dtwin/error.hpp"

namespace dtwin::reservoir {

void ReservoirConfig::validate() const {
  auto bad = [](const std::string& what) {
    fail(ErrorKind::config, "reservoir: " + what);
  };
  if (size < 1) bad("size must be >= 1");
  if (input_dim < 1) bad("input dimension must be >= 1");
  if (input_dim != output_dim) bad("input and output dimension must match");
  if (!(spectral_radius > 0.0) || !std::isfinite(spectral_radius))
    bad("spectral radius must be > 0");
  if (!(density > 0.0 && density <= 1.0)) bad("density must lie in (0, 1]");
  if (!(leak_rate > 0.0 && leak_rate <= 1.0)) bad("leak rate must lie in (0, 1]");
  if (!(ridge >= 0.0) || !std::isfinite(ridge)) bad("ridge must be >= 0");
  if (!(input_noise >= 0.0) || !std::isfinite(input_noise))
    bad("input_noise must be >= 0");
  for (double s : {input_scaling, param_scaling, bias_scaling})
    if (!(s >= 0.0) || !std::isfinite(s)) bad("scalings must be >= 0");
}

std::vector<std::string> ReservoirConfig::warnings() const {
  std::vector<std::string> out;
  if (size < 10 * input_dim) {
    std::ostringstream msg;
    msg << "reservoir size " << size << " is below 10x the input dimension "
        << input_dim;
    out.push_back(msg.str());
  }
  return out;
}

}  // namespace dtwin::reservoir
