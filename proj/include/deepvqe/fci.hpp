#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <vector>

#include "deepvqe/integral_set.hpp"
#include "deepvqe/lanczos.hpp"

namespace deepvqe {

struct FciOptions {
  int n_roots = 1;
  std::size_t memory_budget_bytes = std::size_t{2} << 30;
  LanczosOptions lanczos{};
};

struct FciResult {
  double energy = 0.0;             // lowest root, including e_nuc
  std::vector<double> energies;    // all requested roots
  std::vector<double> residuals;   // ||H c - E c|| per root; E - residual bounds an eigenvalue from below
  long matvecs = 0;
  std::size_t dimension = 0;
  int n_alpha = 0;
  int n_beta = 0;
  Eigen::VectorXd ground_state;    // alpha-string major determinant coefficients
};

/// Determinant-space configuration interaction in the (n_alpha, n_beta)
/// sector, with matrix-free sigma vectors built from the integrals directly.
/// Throws ValidationError when the working arrays exceed the memory budget.
FciResult fci(const IntegralSet& integrals, int n_alpha, int n_beta, const FciOptions& options = {});

/// Sector (N + MS2)/2, (N - MS2)/2 taken from the integral set.
FciResult fci(const IntegralSet& integrals, const FciOptions& options = {});

/// Bytes needed by fci() for the given sector.
std::size_t fci_memory_estimate(int n_orbitals, int n_alpha, int n_beta);

}  // namespace deepvqe
