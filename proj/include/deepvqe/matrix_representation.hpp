#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <vector>

#include "deepvqe/qubit_hamiltonian.hpp"

namespace deepvqe {

/// Maps a string on the global register onto `subset` (local qubit j is
/// global qubit subset[j]). Throws ValidationError if the string acts outside.
PauliString restrict_to(const PauliString& p, const std::vector<int>& subset);

/// 2^k x 2^k matrix of h on the qubit subset; local qubit 0 is the least
/// significant bit of the row index. An empty subset means all qubits.
Eigen::MatrixXcd dense_matrix(const QubitHamiltonian& h, const std::vector<int>& subset = {});
Eigen::SparseMatrix<cplx> sparse_matrix(const QubitHamiltonian& h, const std::vector<int>& subset = {});
Eigen::MatrixXcd dense_matrix(const PauliString& p, int n_qubits);

}  // namespace deepvqe
