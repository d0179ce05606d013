#pragma once

#include <Eigen/Core>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "deepvqe/basis_builder.hpp"
#include "deepvqe/lanczos.hpp"
#include "deepvqe/partition.hpp"

namespace deepvqe {

/// Projected Hamiltonian sum_i H_i^eff + sum_mu lambda^mu (x)_i V_{mu,i}^eff + constant
/// on the product space of the subsystem bases. Distinct factor strings are
/// projected once per subsystem and referenced by index.
struct EffectiveHamiltonian {
  struct Term {
    double lambda = 0.0;
    std::vector<int> factors;  // index into factor_matrices[i], -1 for identity
  };

  std::vector<int> dims;                                  // K_i
  std::vector<Eigen::MatrixXcd> local;                    // H_i^eff
  std::vector<std::vector<PauliString>> factor_strings;   // per subsystem
  std::vector<std::vector<Eigen::MatrixXcd>> factor_matrices;
  std::vector<Term> interactions;
  double constant = 0.0;

  int n_subsystems() const noexcept { return static_cast<int>(dims.size()); }
  std::size_t product_dimension() const;
  /// m_i = ceil(log2 K_i).
  std::vector<int> qubits() const;
  int total_qubits() const;
  /// Identity for index -1.
  Eigen::MatrixXcd factor(int i, int index) const;
};

/// <b_k| op |b_l> by applying the operator to each basis vector.
Eigen::MatrixXcd project_operator(const QubitHamiltonian& op, const Eigen::MatrixXcd& basis);
Eigen::MatrixXcd project_operator(const PauliString& op, const Eigen::MatrixXcd& basis);

EffectiveHamiltonian assemble(const PartitionedHamiltonian& ph, const std::vector<SubsystemBasis>& bases);

struct DiagonalizedFactor {
  Eigen::VectorXcd eigenvalues;  // sorted descending (by real part, then imaginary)
  Eigen::MatrixXcd unitary;      // U with V = U^dagger diag(eigenvalues) U
  /// max |U^dagger diag U - V|.
  double reconstruction_error(const Eigen::MatrixXcd& v) const;
};

/// Eigendecomposition of a normal matrix. Eigenvector columns (rows of U)
/// are phase-fixed so their largest-magnitude entry is real and positive.
/// Throws NumericalError for non-normal input.
DiagonalizedFactor diagonalize_factor(const Eigen::MatrixXcd& v, double normal_tol = 1e-10);

struct EffectiveSolveOptions {
  std::size_t max_dimension = 4'000'000;
  int dense_max_dimension = 256;
  LanczosOptions lanczos{64, 16, 1e-9, 20000, 2024};
  double start_noise = 1e-3;
};

struct EffectiveSolution {
  double energy = 0.0;
  Eigen::VectorXcd coefficients;  // index ((k_0 K_1 + k_1) K_2 + k_2) ...
  long matvecs = 0;
  bool real_arithmetic = false;
};

EffectiveSolution solve_effective(const EffectiveHamiltonian& eff, const EffectiveSolveOptions& options = {});

/// sum_i <G_i|H_i|G_i> + sum_mu lambda^mu prod_i <G_i|V_{mu,i}|G_i> + constant.
double combined_subsystem_energy(const PartitionedHamiltonian& ph, const std::vector<Eigen::VectorXcd>& ground_states);

struct MeasurementPlan {
  struct Entry {
    double lambda = 0.0;
    std::vector<int> factors;  // references into per-subsystem tables, -1 identity
  };
  std::vector<std::vector<PauliString>> factor_strings;
  std::vector<std::vector<DiagonalizedFactor>> tables;
  std::vector<Entry> entries;
  /// Largest reconstruction error over every table.
  double max_reconstruction_error = 0.0;
};

MeasurementPlan emit_measurement_plan(const EffectiveHamiltonian& eff);
void write_measurement_plan(std::ostream& out, const MeasurementPlan& plan);

/// H_i^eff padded to 2^{m_i} with `penalty` on the padding diagonal.
Eigen::MatrixXcd padded_local(const EffectiveHamiltonian& eff, int i, double penalty = 1e3);
/// Factor padded with zeros to 2^{m_i}.
Eigen::MatrixXcd padded_factor(const EffectiveHamiltonian& eff, int i, int index);

/// Writes header.txt, matrices.bin, interactions.txt into `dir`.
void write_effective_hamiltonian(const std::filesystem::path& dir, const EffectiveHamiltonian& eff);
EffectiveHamiltonian read_effective_hamiltonian(const std::filesystem::path& dir);

}  // namespace deepvqe
