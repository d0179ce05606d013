#pragma once

#include <string>
#include <vector>

#include "deepvqe/lanczos.hpp"
#include "deepvqe/qubit_hamiltonian.hpp"
#include "deepvqe/state_vector.hpp"

namespace deepvqe {

enum class SpinTag { Up, Down, Zero, Mixed };
std::string to_string(SpinTag t);

/// Which local qubits host alpha and beta spin orbitals.
struct SpinLayout {
  std::uint64_t alpha_mask = 0;
  std::uint64_t beta_mask = 0;
  /// Alpha on even local qubits, beta on odd ones.
  static SpinLayout interleaved(int n_qubits);
};

enum class SzOrder { Ascending, Descending };

struct SolverOptions {
  double degeneracy_tolerance = 1e-9;  // relative: |dE| < tol * max(1, |E|)
  int dense_max_qubits = 12;
  SzOrder sz_order = SzOrder::Ascending;
  LanczosOptions lanczos;
};

struct EigenLevel {
  double energy = 0.0;
  std::vector<StateVector> states;
  std::vector<double> sz;
  std::vector<double> electrons;
  std::vector<SpinTag> tags;
  int degeneracy() const noexcept { return static_cast<int>(states.size()); }
};

struct EigenSolution {
  std::vector<EigenLevel> levels;
  int state_count() const;
};

/// Lowest levels of h covering at least k states; the last level is always
/// complete. Degenerate spans are rotated to the S_z eigenbasis.
EigenSolution solve_lowest(const QubitHamiltonian& h, int k, const SpinLayout& spin,
                           const SolverOptions& options = {});

/// Rotates the span of `states` to S_z eigenstates sorted by S_z, then by
/// electron number; remaining freedom is fixed from the span's projector.
/// Returns the rotated states with their S_z values and tags.
void label_by_sz(EigenLevel& level, const SpinLayout& spin, SzOrder order = SzOrder::Ascending);

struct StartingState {
  StateVector state;
  double energy = 0.0;
  int level = 0;
  double sz = 0.0;
  SpinTag tag = SpinTag::Zero;
  std::string label;  // e.g. "L0dn"
};

/// First l states counting degenerate partners separately.
std::vector<StartingState> solve_excited(const QubitHamiltonian& h, int l, const SpinLayout& spin,
                                         const SolverOptions& options = {});
std::vector<StartingState> starting_states(const EigenSolution& sol, int l);

/// Multiplies the vector by a phase so that its largest-magnitude entry
/// (lowest index among near-ties) is real and positive.
void fix_phase(Eigen::VectorXcd& v);

}  // namespace deepvqe
