#pragma once

#include <Eigen/Core>

#include "deepvqe/integral_set.hpp"

namespace deepvqe {

struct RhfOptions {
  double damping = 0.5;  // weight of the previous density in each update
  int max_iterations = 500;
  double energy_tolerance = 1e-9;
  double density_tolerance = 1e-7;
};

struct RhfResult {
  double energy = 0.0;  // total, including e_nuc
  int iterations = 0;
  Eigen::VectorXd orbital_energies;
  Eigen::MatrixXd coefficients;
  Eigen::MatrixXd density;  // closed-shell density, trace(P S) = n_electrons
};

/// Closed-shell SCF with damped density mixing from a core-Hamiltonian guess.
/// Throws ValidationError for odd electron counts and NumericalError, carrying
/// the last energy, when the SCF does not converge.
RhfResult rhf(const IntegralSet& integrals, const Eigen::MatrixXd& s, int n_electrons,
              const RhfOptions& options = {});

inline double rhf_energy(const IntegralSet& integrals, const Eigen::MatrixXd& s, int n_electrons,
                         const RhfOptions& options = {}) {
  return rhf(integrals, s, n_electrons, options).energy;
}

}  // namespace deepvqe
