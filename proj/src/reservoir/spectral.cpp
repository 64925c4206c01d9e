#include "dtwin/reservoir/spectral.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>

#include "dtwin/error.hpp"

namespace dtwin::reservoir {

double spectral_radius_dense(const SparseMatrix& w) {
  if (w.rows() == 0) return 0.0;
  Eigen::EigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(w), false);
  if (es.info() != Eigen::Success)
    fail(ErrorKind::numerical, "dense eigenvalue solve did not converge");
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

double spectral_radius_arnoldi(const SparseMatrix& w, const SpectralOptions& opt) {
  const auto n = w.rows();
  if (n == 0) return 0.0;
  const auto m = static_cast<Eigen::Index>(std::min<std::size_t>(
      opt.krylov_dim, static_cast<std::size_t>(n)));
  Eigen::MatrixXd v(n, m + 1);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(m + 1, m);
  Eigen::VectorXd start = Eigen::VectorXd::Ones(n);

  for (std::size_t restart = 0; restart <= opt.max_restarts; ++restart) {
    v.col(0) = start.normalized();
    h.setZero();
    Eigen::Index k = m;  // Krylov dimension actually built
    for (Eigen::Index j = 0; j < m; ++j) {
      Eigen::VectorXd q = w * v.col(j);
      const double scale = q.norm();
      // Two Gram-Schmidt passes keep the basis orthogonal to working precision.
      for (int pass = 0; pass < 2; ++pass) {
        const Eigen::VectorXd c = v.leftCols(j + 1).transpose() * q;
        q.noalias() -= v.leftCols(j + 1) * c;
        h.col(j).head(j + 1) += c;
      }
      const double beta = q.norm();
      h(j + 1, j) = beta;
      if (beta <= 1e-14 * std::max(scale, 1e-300)) {  // invariant subspace
        k = j + 1;
        break;
      }
      v.col(j + 1) = q / beta;
    }

    Eigen::EigenSolver<Eigen::MatrixXd> es(h.topLeftCorner(k, k), true);
    if (es.info() != Eigen::Success)
      fail(ErrorKind::numerical, "Arnoldi: projected eigenvalue solve failed");
    Eigen::Index best = 0;
    es.eigenvalues().cwiseAbs().maxCoeff(&best);
    const std::complex<double> theta = es.eigenvalues()[best];
    if (std::abs(theta) == 0.0) return 0.0;
    Eigen::VectorXcd y = es.eigenvectors().col(best);
    y.normalize();
    const double residual = k < m || k == n ? 0.0 : h(k, k - 1) * std::abs(y[k - 1]);
    if (residual <= opt.tolerance * std::abs(theta)) return std::abs(theta);

    const Eigen::VectorXcd ritz = v.leftCols(k) * y;
    start = ritz.real() + ritz.imag();
  }
  fail(ErrorKind::numerical, "Arnoldi iteration did not converge within " +
                                 std::to_string(opt.max_restarts) + " restarts");
}

double spectral_radius_power(const SparseMatrix& w, double tolerance,
                             std::size_t max_iterations) {
  const auto n = w.rows();
  if (n == 0) return 0.0;
  // Three consecutive iterates x, y = W x, z = W y. Near convergence they lie
  // in the dominant invariant subspace, where z = a y + b x and the dominant
  // eigenvalues solve lambda^2 = a lambda + b.
  Eigen::VectorXd x = Eigen::VectorXd::Ones(n) / std::sqrt(static_cast<double>(n));
  Eigen::VectorXd y = w * x;
  double previous = -1.0;
  for (std::size_t it = 0; it < max_iterations; ++it) {
    const double ny = y.norm();
    if (!(ny > 0.0)) return 0.0;
    Eigen::VectorXd z = w * y;

    const double xx = x.dot(x), xy = x.dot(y), yy = y.dot(y);
    const double det = yy * xx - xy * xy;
    double estimate = z.norm() / ny;
    if (det > 1e-12 * yy * xx) {
      const double zy = z.dot(y), zx = z.dot(x);
      const double a = (zy * xx - zx * xy) / det;
      const double b = (zx * yy - zy * xy) / det;
      const double disc = a * a + 4.0 * b;
      estimate = disc >= 0.0
                     ? std::max(std::abs(0.5 * (a + std::sqrt(disc))),
                                std::abs(0.5 * (a - std::sqrt(disc))))
                     : std::sqrt(-b);
    }
    if (previous >= 0.0 && std::abs(estimate - previous) <= tolerance * estimate)
      return estimate;
    previous = estimate;
    x = y / ny;
    y = z / ny;
  }
  fail(ErrorKind::numerical,
       "power iteration did not converge within " +
           std::to_string(max_iterations) + " iterations");
}

double spectral_radius(const SparseMatrix& w, const SpectralOptions& opt) {
  if (static_cast<std::size_t>(w.rows()) <= opt.dense_limit)
    return spectral_radius_dense(w);
  return spectral_radius_arnoldi(w, opt);
}

}  // namespace dtwin::reservoir
