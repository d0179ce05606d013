#pragma once

#include <Eigen/Core>
#include <filesystem>
#include <iosfwd>

#include "deepvqe/pauli.hpp"
#include "deepvqe/qubit_hamiltonian.hpp"

namespace deepvqe {

/// Computational basis index b has qubit q in state (b >> q) & 1.
struct StateVector {
  int n_qubits = 0;
  Eigen::VectorXcd amplitudes;

  StateVector() = default;
  StateVector(int n, Eigen::VectorXcd amps);
  static StateVector basis_state(int n, std::uint64_t index);

  double norm() const { return amplitudes.norm(); }
  /// Throws ValidationError unless the norm is one within `tol`.
  void check_normalized(double tol = 1e-12) const;
};

/// out += c * P * in.
void apply_pauli_add(const PauliString& p, cplx c, const Eigen::VectorXcd& in, Eigen::VectorXcd& out);
Eigen::VectorXcd apply(const PauliString& p, const Eigen::VectorXcd& v);
Eigen::VectorXcd apply(const QubitHamiltonian& h, const Eigen::VectorXcd& v);
Eigen::VectorXcd apply(const PauliSum& h, const Eigen::VectorXcd& v);
double expectation(const QubitHamiltonian& h, const Eigen::VectorXcd& v);

/// Binary layout: int32 n_qubits, then 2^n pairs of little-endian float64 (re, im).
void write_state(std::ostream& out, const StateVector& s);
StateVector read_state(std::istream& in);
void write_state(const std::filesystem::path& path, const StateVector& s);
StateVector read_state(const std::filesystem::path& path);

}  // namespace deepvqe
