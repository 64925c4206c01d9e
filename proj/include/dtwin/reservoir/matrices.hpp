#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "dtwin/reservoir/config.hpp"

namespace dtwin::reservoir {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Fixed random weights of the network; never modified after generation.
struct ReservoirMatrices {
  Eigen::MatrixXd input;      // W_in, N x M
  Eigen::VectorXd param;      // W_p, N x 1
  SparseMatrix recurrent;     // W_r, N x N
  Eigen::VectorXd bias;       // b, N

  std::size_t size() const { return static_cast<std::size_t>(bias.size()); }
};

/// Draws all matrices from config.seed. W_r has an Erdos-Renyi pattern of
/// the configured density with U[-1, 1] weights, rescaled to the configured
/// spectral radius. Throws degenerate_reservoir if the drawn W_r has zero
/// spectral radius.
ReservoirMatrices build_reservoir(const ReservoirConfig& config);

}  // namespace dtwin::reservoir
