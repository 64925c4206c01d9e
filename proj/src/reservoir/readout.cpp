#include "dtwin/reservoir/readout.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "dtwin/error.hpp"

namespace dtwin::reservoir {

NormalEquations::NormalEquations(std::size_t features, std::size_t outputs)
    : gram_(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(features),
                                  static_cast<Eigen::Index>(features))),
      cross_(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(features),
                                   static_cast<Eigen::Index>(outputs))) {}

void NormalEquations::add(const dynsys::Samples& states,
                          const dynsys::Samples& targets) {
  if (states.rows() != targets.rows())
    fail(ErrorKind::invalid_input, "fit_readout: states/targets length mismatch");
  if (states.cols() != gram_.rows() || targets.cols() != cross_.cols())
    fail(ErrorKind::invalid_input, "fit_readout: dimension mismatch");
  if (!states.allFinite() || !targets.allFinite())
    fail(ErrorKind::invalid_input, "fit_readout: non-finite data");
  gram_.selfadjointView<Eigen::Lower>().rankUpdate(states.transpose());
  cross_.noalias() += states.transpose() * targets;
  rows_ += static_cast<std::size_t>(states.rows());
}

Readout NormalEquations::solve(double ridge) const {
  if (!(ridge >= 0.0)) fail(ErrorKind::invalid_input, "ridge must be >= 0");
  if (rows_ == 0) fail(ErrorKind::invalid_input, "fit_readout: no data");
  Eigen::MatrixXd a = gram_.selfadjointView<Eigen::Lower>();
  a.diagonal().array() += ridge;

  Eigen::LDLT<Eigen::MatrixXd> ldlt(a);
  const auto d = ldlt.vectorD();
  const double dmax = d.cwiseAbs().maxCoeff();
  const double dmin = d.minCoeff();
  const double floor = static_cast<double>(a.rows()) *
                       std::numeric_limits<double>::epsilon() * dmax;
  if (ldlt.info() != Eigen::Success || !(dmin > 0.0) ||
      (ridge == 0.0 && dmin <= floor)) {
    fail(ErrorKind::rank_deficiency,
         "normal matrix of reservoir states is singular; use a ridge "
         "coefficient > 0");
  }
  Readout out;
  out.weights = ldlt.solve(cross_).transpose();
  if (!out.weights.allFinite())
    fail(ErrorKind::numerical, "readout solve produced non-finite weights");
  return out;
}

double readout_residual(const Readout& readout, const dynsys::Samples& states,
                        const dynsys::Samples& targets) {
  if (states.rows() == 0) return 0.0;
  const Eigen::MatrixXd err =
      states * readout.weights.transpose() - Eigen::MatrixXd(targets);
  return std::sqrt(err.squaredNorm() / static_cast<double>(err.size()));
}

FitResult fit_readout(const dynsys::Samples& states,
                      const dynsys::Samples& targets, double ridge) {
  NormalEquations eq(static_cast<std::size_t>(states.cols()),
                     static_cast<std::size_t>(targets.cols()));
  eq.add(states, targets);
  FitResult result;
  if (states.rows() <= states.cols()) {
    std::ostringstream msg;
    msg << "fit_readout: " << states.rows() << " samples for " << states.cols()
        << " features; more samples than features are recommended";
    result.warnings.push_back(msg.str());
  }
  result.readout = eq.solve(ridge);
  result.residual = readout_residual(result.readout, states, targets);
  return result;
}

}  // namespace dtwin::reservoir
