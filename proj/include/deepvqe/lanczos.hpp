#pragma once

#include <Eigen/Core>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "deepvqe/errors.hpp"

namespace deepvqe {

struct LanczosOptions {
  int max_basis = 48;      // Krylov vectors held before a thick restart
  int keep = 10;           // Ritz vectors retained across a restart
  double tolerance = 1e-10;  // residual bound relative to max(1, |theta|)
  long max_matvecs = 50000;
  unsigned seed = 12345;
};

template <class Scalar>
struct LanczosResult {
  std::vector<double> values;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> vectors;  // columns
  std::vector<double> residuals;
  long matvecs = 0;
};

namespace detail {

template <class Scalar>
void fill_random(Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& v, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if constexpr (std::is_same_v<Scalar, double>) {
      v[i] = nd(rng);
    } else {
      v[i] = Scalar(nd(rng), nd(rng));
    }
  }
}

// Two passes of classical Gram-Schmidt against the columns of `basis` and `locked`.
template <class Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> orthogonalize(
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& w,
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& basis, Eigen::Index n_basis,
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& locked) {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> coeff = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(n_basis);
  for (int pass = 0; pass < 2; ++pass) {
    if (locked.cols() > 0) w.noalias() -= locked * (locked.adjoint() * w);
    if (n_basis > 0) {
      const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> h = basis.leftCols(n_basis).adjoint() * w;
      w.noalias() -= basis.leftCols(n_basis) * h;
      coeff += h;
    }
  }
  return coeff;
}

}  // namespace detail

/// Lowest `k` eigenpairs of the Hermitian operator `op` (out = A * in) of
/// dimension `dim`. Krylov-Schur style thick-restart Lanczos with full
/// reorthogonalization; each converged pair is locked and deflated so that
/// degenerate partners are found from fresh random directions.
template <class Scalar, class Op>
LanczosResult<Scalar> lanczos_lowest(Op&& op, Eigen::Index dim, int k,
                                     const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& start,
                                     const LanczosOptions& opt = {}) {
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (k < 1 || k > dim) throw ValidationError("requested eigenpair count out of range");

  LanczosResult<Scalar> res;
  res.vectors.resize(dim, 0);
  std::mt19937_64 rng(opt.seed);
  const int max_basis = static_cast<int>(std::min<Eigen::Index>(opt.max_basis, dim));

  Vec v = start.size() == dim ? start : Vec::Zero(dim);
  while (static_cast<int>(res.values.size()) < k) {
    const Eigen::Index n_locked = res.vectors.cols();
    const int basis_cap = static_cast<int>(std::min<Eigen::Index>(max_basis, dim - n_locked));
    Mat V(dim, basis_cap);
    Mat T = Mat::Zero(basis_cap, basis_cap);
    int m = 0;

    detail::orthogonalize<Scalar>(v, V, 0, res.vectors);
    if (v.norm() < 1e-8) {
      detail::fill_random<Scalar>(v, rng);
      detail::orthogonalize<Scalar>(v, V, 0, res.vectors);
    }
    v /= v.norm();

    double theta = 0.0, resid = INFINITY;
    Vec ritz, next_start;
    Vec w(dim);
    while (true) {
      V.col(m) = v;
      op(v, w);
      ++res.matvecs;
      const Vec h = detail::orthogonalize<Scalar>(w, V, m + 1, res.vectors);
      T.col(m).head(m + 1) = h;
      T.row(m).head(m + 1) = h.adjoint();
      T(m, m) = std::real(h[m]);
      ++m;
      const double beta = w.norm();

      Eigen::SelfAdjointEigenSolver<Mat> es(T.topLeftCorner(m, m));
      theta = es.eigenvalues()[0];
      resid = beta * std::abs(es.eigenvectors()(m - 1, 0));
      if (resid < opt.tolerance * std::max(1.0, std::abs(theta)) || m == dim - n_locked) {
        ritz = V.leftCols(m) * es.eigenvectors().col(0);
        if (m > 1) next_start = V.leftCols(m) * es.eigenvectors().col(1);
        break;
      }
      if (res.matvecs >= opt.max_matvecs) {
        std::ostringstream msg;
        msg << "Lanczos did not converge within " << opt.max_matvecs << " products (residual " << resid << ")";
        throw NumericalError(msg.str());
      }
      if (m == basis_cap) {
        // Thick restart: keep the lowest Ritz vectors; couplings to the next
        // vector are recomputed when it is orthogonalized.
        const int keep = std::min(opt.keep, m - 1);
        const Mat vk = V.leftCols(m) * es.eigenvectors().leftCols(keep);
        V.leftCols(keep) = vk;
        T.setZero();
        for (int j = 0; j < keep; ++j) T(j, j) = es.eigenvalues()[j];
        m = keep;
      }
      v = w / beta;
    }

    Vec x = ritz;
    detail::orthogonalize<Scalar>(x, V, 0, res.vectors);
    x /= x.norm();
    Vec ax(dim);
    op(x, ax);
    ++res.matvecs;
    const double e = std::real(x.dot(ax));
    res.values.push_back(e);
    res.residuals.push_back((ax - e * x).norm());
    res.vectors.conservativeResize(dim, n_locked + 1);
    res.vectors.col(n_locked) = x;

    // Next target: the second Ritz vector plus a random component so that
    // degenerate partners of the locked vector are reachable.
    detail::fill_random<Scalar>(v, rng);
    v /= v.norm();
    if (next_start.size() == dim) v = next_start + 0.1 * v;
  }

  // Sort the locked pairs; deflation can occasionally deliver them out of order.
  std::vector<int> order(res.values.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return res.values[a] < res.values[b]; });
  LanczosResult<Scalar> sorted;
  sorted.matvecs = res.matvecs;
  sorted.vectors.resize(dim, k);
  for (int i = 0; i < k; ++i) {
    sorted.values.push_back(res.values[order[i]]);
    sorted.residuals.push_back(res.residuals[order[i]]);
    sorted.vectors.col(i) = res.vectors.col(order[i]);
  }
  return sorted;
}

}  // namespace deepvqe
