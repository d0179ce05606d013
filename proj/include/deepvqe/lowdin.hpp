#pragma once

#include <Eigen/Core>

#include "deepvqe/integral_set.hpp"

namespace deepvqe {

/// S^{-1/2} by symmetric eigendecomposition. Throws NumericalError when an
/// eigenvalue of S is at or below `floor` (near-linear dependence).
Eigen::MatrixXd inverse_sqrt(const Eigen::MatrixXd& s, double floor = 1e-10);

/// Rotate h1 and h2 into the orbitals given by the columns of `c`.
IntegralSet transform_orbitals(const IntegralSet& integrals, const Eigen::MatrixXd& c);

struct LowdinResult {
  IntegralSet integrals;  // label "lowdin"
  Eigen::MatrixXd coefficients;  // C = S^{-1/2}, AO rows, orbital columns
};

LowdinResult lowdin_orthogonalize(const IntegralSet& ao, const Eigen::MatrixXd& s);

}  // namespace deepvqe
