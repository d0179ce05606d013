#pragma once

#include <Eigen/Core>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "deepvqe/partition.hpp"
#include "deepvqe/subsystem_solver.hpp"

namespace deepvqe {

enum class BasisKind {
  Interactions,
  InteractionsExcited,
  InteractionsFixQubits,
  SinglePauli,
  SinglePauliExcited,
  SinglePauliEdge,
  ParticleConserving,
  ParticleConservingEdge,
};

std::string to_string(BasisKind k);
/// Accepts the enum spelling ("ParticleConservingEdge") case-insensitively.
BasisKind parse_basis_kind(const std::string& s);
bool is_interaction_kind(BasisKind k);
bool is_edge_kind(BasisKind k);

struct BasisStrategy {
  BasisKind kind = BasisKind::ParticleConserving;
  std::optional<double> epsilon;            // interaction kinds other than fix-qubits
  std::optional<int> total_qubit_budget;    // fix-qubits kind: N_tot, split by distribute_qubit_budget
  std::vector<int> qubit_budgets;           // fix-qubits kind: explicit per-subsystem m_i (overrides the total)
  std::vector<int> start_counts;            // l_i per subsystem
  double gs_tolerance = 1e-8;
  EdgeSelection edge_selection = EdgeSelection::NearTieUnion;
  double edge_tie_tolerance = 1e-6;

  /// Throws ValidationError when parameters do not match the kind.
  void validate(int n_subsystems) const;
  /// e.g. "ParticleConservingEdge(2222)".
  std::string label() const;
};

/// Excitation operator acting on a subsystem's local register.
struct LocalOperator {
  enum class Type { Pauli, Annihilate, Create, Swap } type = Type::Pauli;
  PauliString pauli;
  int s = 0, t = 0;
  double weight = 0.0;  // |lambda| for interaction operators
  std::string label;
};

Eigen::VectorXcd apply(const LocalOperator& op, const Eigen::VectorXcd& v);

struct ProvenanceEntry {
  std::string operator_label;  // "start" for starting vectors
  std::string start_label;
  bool kept = false;
  double residual = 0.0;
};

struct SubsystemBasis {
  int subsystem = 0;
  int n_qubits = 0;
  Eigen::MatrixXcd vectors;  // 2^n x K, orthonormal columns
  std::vector<ProvenanceEntry> provenance;
  std::optional<double> epsilon_adapt;  // fix-qubits kind only
  int operator_count = 0;

  int dimension() const noexcept { return static_cast<int>(vectors.cols()); }
  /// ceil(log2 K); zero for K = 1.
  int qubits_needed() const noexcept;
  /// All entries real (to rounding).
  bool is_real(double tol = 1e-13) const;
};

int qubits_for_dimension(int k);

struct GramSchmidtResult {
  Eigen::MatrixXcd basis;
  std::vector<double> residuals;
  std::vector<bool> kept;
};

/// Modified Gram-Schmidt with one reorthogonalization pass, in candidate
/// order; residual norms below `tolerance` are discarded. Candidates are
/// phase-fixed first so real inputs up to a global phase yield real output.
GramSchmidtResult gram_schmidt(const std::vector<Eigen::VectorXcd>& candidates, double tolerance = 1e-8);

/// Edge sets A_i for the strategy's edge selection rule.
std::vector<std::vector<int>> edge_sets(const BasisStrategy& strategy, const PartitionedHamiltonian& ph);

/// Operators B_{i,k} in deterministic order. `edges` is used by edge kinds.
std::vector<LocalOperator> excitation_operators(const BasisStrategy& strategy, const PartitionedHamiltonian& ph,
                                                int i, const std::vector<std::vector<int>>& edges);

/// Interaction factors V_{mu,i} that are non-identity on subsystem i with
/// |lambda| > epsilon, deduplicated, ordered by |lambda| descending.
std::vector<LocalOperator> interaction_operators(const PartitionedHamiltonian& ph, int i, double epsilon);

/// Basis for subsystem i from its starting vectors (all l_i of them).
SubsystemBasis build_basis(const BasisStrategy& strategy, const std::vector<StartingState>& starts,
                           const PartitionedHamiltonian& ph, int i, const std::vector<std::vector<int>>& edges);

/// Greedy admission of interaction operators by |lambda| until the next one
/// would push K above 2^m. Reports epsilon_adapt as the |lambda| of the first
/// rejected operator (0 when every operator fits).
SubsystemBasis build_basis_fixed_qubits(const std::vector<StartingState>& starts, const PartitionedHamiltonian& ph,
                                        int i, int m, double gs_tolerance = 1e-8);

/// Splits a total qubit budget over subsystems by water-filling: repeatedly
/// give one qubit to the lowest-index subsystem among those with the fewest
/// qubits still below its cap. Starts from the given minimums.
std::vector<int> distribute_qubit_budget(int total, const std::vector<int>& caps, const std::vector<int>& minimums);

/// Plain-text provenance table; vectors go to a separate binary file.
void write_provenance(std::ostream& out, const SubsystemBasis& basis);
void write_basis_vectors(const std::filesystem::path& path, const SubsystemBasis& basis);

}  // namespace deepvqe
