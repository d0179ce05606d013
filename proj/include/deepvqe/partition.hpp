#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "deepvqe/qubit_hamiltonian.hpp"

namespace deepvqe {

/// Disjoint qubit blocks covering the register. Local qubit j of block i is
/// global qubit blocks()[i][j].
class SubsystemPartition {
 public:
  SubsystemPartition() = default;
  SubsystemPartition(int n_qubits, std::vector<std::vector<int>> blocks);
  /// Contiguous blocks of the given sizes.
  static SubsystemPartition contiguous(const std::vector<int>& sizes);

  int n_qubits() const noexcept { return n_qubits_; }
  int n_subsystems() const noexcept { return static_cast<int>(blocks_.size()); }
  const std::vector<std::vector<int>>& blocks() const noexcept { return blocks_; }
  int size(int i) const { return static_cast<int>(blocks_.at(i).size()); }
  std::vector<int> sizes() const;
  int subsystem_of(int qubit) const { return assignment_.at(qubit); }
  int local_index(int qubit) const { return local_.at(qubit); }
  std::uint64_t block_mask(int i) const { return masks_.at(i); }

 private:
  int n_qubits_ = 0;
  std::vector<std::vector<int>> blocks_;
  std::vector<int> assignment_;
  std::vector<int> local_;
  std::vector<std::uint64_t> masks_;
};

/// lambda * (factors[0] (x) factors[1] (x) ...), each factor on its block's
/// local qubits. At least two factors are non-identity.
struct InteractionTerm {
  double lambda = 0.0;
  std::vector<PauliString> factors;
};

struct PartitionedHamiltonian {
  SubsystemPartition partition;
  std::vector<QubitHamiltonian> locals;        // on local qubit indices, no identity term
  std::vector<InteractionTerm> interactions;  // |lambda| descending, then factor order
  double constant = 0.0;
};

/// Routes every term to its block, to the interaction list, or to the constant.
PartitionedHamiltonian partition(const QubitHamiltonian& h, const SubsystemPartition& p);

/// Inverse of partition(): embeds everything back into one register.
QubitHamiltonian reassemble(const PartitionedHamiltonian& ph);

/// Embeds a local string of block i into the global register.
PauliString embed(const SubsystemPartition& p, int i, const PauliString& local);

enum class EdgeSelection {
  NearTieUnion,   // union over all interactions within tie_tolerance of max |lambda|
  SingleStrongest // first interaction in deterministic order
};

/// Local qubits A_i touched by the strongest interaction(s). Throws
/// ValidationError when there are no interactions.
std::vector<std::vector<int>> strongest_interaction_qubits(const PartitionedHamiltonian& ph,
                                                           EdgeSelection mode = EdgeSelection::NearTieUnion,
                                                           double tie_tolerance = 1e-6);

/// Copy keeping only interactions with |lambda| > epsilon, order preserved.
PartitionedHamiltonian filter_interactions(const PartitionedHamiltonian& ph, double epsilon);

void write_partitioned(std::ostream& out, const PartitionedHamiltonian& ph);
PartitionedHamiltonian read_partitioned(std::istream& in);

}  // namespace deepvqe
