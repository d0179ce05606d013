#include "deepvqe/lowdin.hpp"

#include <Eigen/Eigenvalues>
#include <array>

#include "deepvqe/errors.hpp"

namespace deepvqe {

Eigen::MatrixXd inverse_sqrt(const Eigen::MatrixXd& s, double floor) {
  if (s.rows() != s.cols()) throw ValidationError("overlap matrix is not square");
  if (s.size() > 0 && (s - s.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw ValidationError("overlap matrix is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
  const Eigen::VectorXd& w = es.eigenvalues();
  if (w.size() > 0 && w.minCoeff() <= floor) {
    throw NumericalError("overlap matrix is nearly singular (smallest eigenvalue " +
                         std::to_string(w.minCoeff()) + ")");
  }
  return es.eigenvectors() * w.cwiseSqrt().cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
}

IntegralSet transform_orbitals(const IntegralSet& in, const Eigen::MatrixXd& c) {
  const int n = in.n_spatial();
  const int m = static_cast<int>(c.cols());
  if (c.rows() != n) throw ValidationError("coefficient matrix has wrong row count");

  IntegralSet out(m);
  out.h1 = c.transpose() * in.h1 * c;
  out.h1 = 0.5 * (out.h1 + out.h1.transpose());
  out.e_nuc = in.e_nuc;
  out.n_electrons = in.n_electrons;
  out.ms2 = in.ms2;
  out.orbital_basis_label = in.orbital_basis_label;

  // Four quarter transformations in chemist order (ab|cd).
  std::vector<double> t0(static_cast<std::size_t>(n) * n * n * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int cc = 0; cc < n; ++cc)
        for (int d = 0; d < n; ++d) t0[((std::size_t(a) * n + b) * n + cc) * n + d] = in.chem(a, b, cc, d);

  // Each pass contracts the leading index and rotates it to the back.
  std::vector<double> cur = std::move(t0);
  std::array<int, 4> dims = {n, n, n, n};
  for (int pass = 0; pass < 4; ++pass) {
    const int d0 = dims[0];
    const std::size_t rest = static_cast<std::size_t>(dims[1]) * dims[2] * dims[3];
    std::vector<double> next(rest * m, 0.0);
    for (std::size_t r = 0; r < rest; ++r)
      for (int p = 0; p < m; ++p) {
        double acc = 0.0;
        for (int a = 0; a < d0; ++a) acc += c(a, p) * cur[a * rest + r];
        next[r * m + p] = acc;
      }
    cur = std::move(next);
    dims = {dims[1], dims[2], dims[3], m};
  }
  for (int p = 0; p < m; ++p)
    for (int q = 0; q < m; ++q)
      for (int r = 0; r < m; ++r)
        for (int s = 0; s < m; ++s)
          out.set_chem(p, q, r, s, cur[((std::size_t(p) * m + q) * m + r) * m + s]);
  return out;
}

LowdinResult lowdin_orthogonalize(const IntegralSet& ao, const Eigen::MatrixXd& s) {
  if (s.rows() != ao.n_spatial()) throw ValidationError("overlap and integral dimensions differ");
  Eigen::MatrixXd c = inverse_sqrt(s);
  IntegralSet out = transform_orbitals(ao, c);
  out.orbital_basis_label = "lowdin";
  return {std::move(out), std::move(c)};
}

}  // namespace deepvqe
