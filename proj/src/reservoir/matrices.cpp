#include "dtwin/reservoir/matrices.hpp"

#include <vector>

#include "dtwin/error.hpp"
#include "dtwin/reservoir/spectral.hpp"
#include "dtwin/rng.hpp"

namespace dtwin::reservoir {

ReservoirMatrices build_reservoir(const ReservoirConfig& config) {
  config.validate();
  const auto n = static_cast<Eigen::Index>(config.size);
  const auto m = static_cast<Eigen::Index>(config.input_dim);
  Rng rng(config.seed);

  // Row-major draw order: pattern and weight of entry (i, j) come from the
  // same position in the stream, so the matrix is a pure function of seed.
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(static_cast<std::size_t>(
      config.density * static_cast<double>(n) * static_cast<double>(n) * 1.1) + 16);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (rng.bernoulli(config.density))
        entries.emplace_back(i, j, rng.uniform(-1.0, 1.0));

  ReservoirMatrices mats;
  mats.recurrent.resize(n, n);
  mats.recurrent.setFromTriplets(entries.begin(), entries.end());
  mats.recurrent.makeCompressed();

  mats.input.resize(n, m);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < m; ++j)
      mats.input(i, j) = rng.uniform(-config.input_scaling, config.input_scaling);
  mats.param.resize(n);
  for (Eigen::Index i = 0; i < n; ++i)
    mats.param[i] = rng.uniform(-config.param_scaling, config.param_scaling);
  mats.bias.resize(n);
  for (Eigen::Index i = 0; i < n; ++i)
    mats.bias[i] = rng.uniform(-config.bias_scaling, config.bias_scaling);

  const double radius = mats.recurrent.nonZeros() == 0
                            ? 0.0
                            : spectral_radius(mats.recurrent);
  if (!(radius > 1e-300))
    fail(ErrorKind::degenerate_reservoir,
         "recurrent matrix has zero spectral radius; increase size or density");
  mats.recurrent *= config.spectral_radius / radius;
  return mats;
}

}  // namespace dtwin::reservoir
