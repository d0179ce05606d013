#include "deepvqe/rhf.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

#include "deepvqe/errors.hpp"

namespace deepvqe {

namespace {

Eigen::MatrixXd two_electron_part(const IntegralSet& ints, const Eigen::MatrixXd& p) {
  const int n = ints.n_spatial();
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
  for (int mu = 0; mu < n; ++mu)
    for (int nu = 0; nu < n; ++nu) {
      double acc = 0.0;
      for (int la = 0; la < n; ++la)
        for (int si = 0; si < n; ++si) {
          acc += p(la, si) * (ints.chem(mu, nu, si, la) - 0.5 * ints.chem(mu, la, si, nu));
        }
      g(mu, nu) = acc;
    }
  return g;
}

Eigen::MatrixXd density_from(const Eigen::MatrixXd& f, const Eigen::MatrixXd& s, int n_occ,
                             Eigen::VectorXd& eps, Eigen::MatrixXd& c) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(f, s);
  if (es.info() != Eigen::Success) throw NumericalError("generalized eigensolver failed in SCF");
  eps = es.eigenvalues();
  c = es.eigenvectors();
  const auto occ = c.leftCols(n_occ);
  return 2.0 * occ * occ.transpose();
}

}  // namespace

RhfResult rhf(const IntegralSet& ints, const Eigen::MatrixXd& s, int n_electrons, const RhfOptions& opt) {
  const int n = ints.n_spatial();
  if (n_electrons < 0 || n_electrons % 2 != 0) throw ValidationError("RHF requires an even electron count");
  if (n_electrons > 2 * n) throw ValidationError("too many electrons for the orbital space");
  if (s.rows() != n || s.cols() != n) throw ValidationError("overlap matrix has wrong shape");
  const int n_occ = n_electrons / 2;

  RhfResult r;
  Eigen::MatrixXd p = density_from(ints.h1, s, n_occ, r.orbital_energies, r.coefficients);
  double e_old = 0.0;
  for (int it = 1; it <= opt.max_iterations; ++it) {
    const Eigen::MatrixXd f = ints.h1 + two_electron_part(ints, p);
    const double e = 0.5 * (p.cwiseProduct(ints.h1 + f)).sum() + ints.e_nuc;
    const Eigen::MatrixXd p_new = density_from(f, s, n_occ, r.orbital_energies, r.coefficients);
    const double dp = (p_new - p).cwiseAbs().maxCoeff();
    r.energy = e;
    r.iterations = it;
    if (it > 1 && std::abs(e - e_old) < opt.energy_tolerance && dp < opt.density_tolerance) {
      r.density = p;
      return r;
    }
    p = opt.damping * p + (1.0 - opt.damping) * p_new;
    e_old = e;
  }
  std::ostringstream msg;
  msg.precision(12);
  msg << "SCF did not converge in " << opt.max_iterations << " iterations (last energy " << r.energy << ")";
  throw NumericalError(msg.str());
}

}  // namespace deepvqe
