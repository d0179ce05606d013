#pragma once

#include <string>
#include <vector>

#include "deepvqe/integral_set.hpp"
#include "deepvqe/pauli.hpp"
#include "deepvqe/qubit_hamiltonian.hpp"

namespace deepvqe {

/// Bijection (spatial orbital p, spin s) -> qubit, with s = 0 for alpha and 1 for beta.
class SpinOrbitalOrdering {
 public:
  /// `qubit_of[2p + s]` is the qubit hosting spin orbital (p, s).
  SpinOrbitalOrdering(int n_spatial, std::vector<int> qubit_of);

  /// Qubit 2p + s.
  static SpinOrbitalOrdering interleaved(int n_spatial);
  /// Spatial orbitals laid out group by group in the listed order, alpha and
  /// beta adjacent; groups must cover every orbital exactly once.
  static SpinOrbitalOrdering grouped(int n_spatial, const std::vector<std::vector<int>>& groups);

  int n_spatial() const noexcept { return n_spatial_; }
  int n_qubits() const noexcept { return 2 * n_spatial_; }
  int qubit(int p, int spin) const { return qubit_of_[2 * p + spin]; }
  int spatial_of(int qubit) const { return orbital_of_[qubit] / 2; }
  int spin_of(int qubit) const { return orbital_of_[qubit] % 2; }
  /// Qubits hosting alpha (spin 0) or beta (spin 1) orbitals as a bit mask.
  std::uint64_t spin_mask(int spin) const;
  /// Human-readable layout, e.g. "q0=0a q1=0b ...".
  std::string describe() const;

 private:
  int n_spatial_;
  std::vector<int> qubit_of_;
  std::vector<int> orbital_of_;
};

/// JW images a_q and a_q^dagger on an n-qubit register.
PauliSum jw_annihilation(int qubit, int n_qubits);
PauliSum jw_creation(int qubit, int n_qubits);

/// Sum_q (I - Z_q)/2 over the qubits in `mask`.
PauliSum number_operator(int n_qubits, std::uint64_t mask);
/// (N_alpha - N_beta)/2 under the given ordering.
PauliSum sz_operator(const SpinOrbitalOrdering& ordering);

/// Molecular Hamiltonian mapped to qubits; the identity coefficient includes e_nuc.
QubitHamiltonian jordan_wigner(const IntegralSet& integrals, const SpinOrbitalOrdering& ordering,
                               double drop_tol = kDropTolerance);

}  // namespace deepvqe
