#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "deepvqe/pauli.hpp"

namespace deepvqe {

inline constexpr double kDropTolerance = 1e-12;

struct QubitTerm {
  PauliString ops;
  double coefficient = 0.0;
};

/// Hermitian qubit operator with real coefficients, unique strings, no term
/// below the drop tolerance, and terms kept in pauli_less order.
class QubitHamiltonian {
 public:
  explicit QubitHamiltonian(int n_qubits = 0);
  /// Throws NumericalError if any merged coefficient has |Im| > 1e-12.
  static QubitHamiltonian from_sum(const PauliSum& sum, double drop_tol = kDropTolerance);
  /// Merges duplicates and sorts; terms may be given in any order.
  static QubitHamiltonian from_terms(int n_qubits, const std::vector<QubitTerm>& terms,
                                     double drop_tol = kDropTolerance);

  int n_qubits() const noexcept { return n_; }
  const std::vector<QubitTerm>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }

  /// Coefficient of the identity string (0 if absent).
  double constant() const;
  PauliSum to_sum() const;

 private:
  int n_;
  std::vector<QubitTerm> terms_;
};

/// One "coefficient word" line per term after a "# n_qubits N" header.
void write_qubit_hamiltonian(std::ostream& out, const QubitHamiltonian& h);
QubitHamiltonian read_qubit_hamiltonian(std::istream& in);
void write_qubit_hamiltonian(const std::filesystem::path& path, const QubitHamiltonian& h);
QubitHamiltonian read_qubit_hamiltonian(const std::filesystem::path& path);

}  // namespace deepvqe
