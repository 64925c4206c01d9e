#pragma once

#include <cstddef>

#include "dtwin/reservoir/matrices.hpp"

namespace dtwin::reservoir {

struct SpectralOptions {
  /// Matrices up to this size use a dense eigenvalue solve.
  std::size_t dense_limit = 300;
  /// Relative residual accepted for the dominant Ritz pair.
  double tolerance = 1e-12;
  std::size_t krylov_dim = 160;
  std::size_t max_restarts = 200;
};

/// Largest eigenvalue modulus. Dense solve up to the dense limit, restarted
/// Arnoldi above it.
double spectral_radius(const SparseMatrix& w, const SpectralOptions& opt = {});

/// Dense route (real Schur form of the full matrix, eigenvalues only).
double spectral_radius_dense(const SparseMatrix& w);

/// Arnoldi with explicit restarts from the dominant Ritz vector. Stops when
/// the Ritz residual drops below tolerance * |theta|; throws numerical if it
/// does not within max_restarts.
double spectral_radius_arnoldi(const SparseMatrix& w, const SpectralOptions& opt = {});

/// Power iteration from the normalized all-ones vector. Each iterate is
/// fitted to a two-term recurrence so a dominant complex-conjugate pair
/// converges as well as a dominant real eigenvalue. Throws numerical on
/// non-convergence. Slow when the leading moduli are close.
double spectral_radius_power(const SparseMatrix& w, double tolerance,
                             std::size_t max_iterations);

}  // namespace dtwin::reservoir
