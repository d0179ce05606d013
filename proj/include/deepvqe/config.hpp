#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "deepvqe/basis_builder.hpp"
#include "deepvqe/effective_hamiltonian.hpp"
#include "deepvqe/fci.hpp"
#include "deepvqe/rhf.hpp"
#include "deepvqe/subsystem_solver.hpp"

namespace deepvqe {

inline const std::vector<double> kDefaultStretchFactors{0.9, 1.0, 1.1, 1.2, 1.3, 1.4, 2.0};

/// Everything a pipeline run needs. Exactly one of `geometry` and `fcidump`
/// is set; FCIDUMP inputs are evaluated at a single point x = 1.
struct RunConfig {
  std::filesystem::path geometry;
  std::filesystem::path fcidump;
  std::vector<double> stretch_factors = kDefaultStretchFactors;
  /// Spatial-orbital groups, one per subsystem; each becomes a block of
  /// 2|group| qubits with alpha and beta of an orbital adjacent.
  std::vector<std::vector<int>> groups;
  std::vector<BasisStrategy> strategies;

  bool reference_fci = true;
  bool reference_rhf = true;
  bool reference_combined = true;
  /// When false only the bases are built (qubit counts, no energies).
  bool solve_effective = true;

  SolverOptions subsystem;
  FciOptions fci;
  RhfOptions rhf;
  EffectiveSolveOptions effective;

  std::filesystem::path output_directory = "results";
  std::string output_stem = "deepvqe";
  int threads = 1;

  /// Throws ValidationError on an inconsistent configuration.
  void validate() const;
};

/// "2444" (one digit per subsystem), "2,2", "(10,10)".
std::vector<int> parse_start_counts(const std::string& text);
/// "Kind(counts)" with optional "; eps=1e-2", "; qubits=12" or "; budgets=3,3,3".
BasisStrategy parse_strategy(const std::string& text);
/// Inverse of parse_strategy.
std::string describe_strategy(const BasisStrategy& strategy);
/// "0 | 1 2 3 | 4 5 6".
std::vector<std::vector<int>> parse_groups(const std::string& text);
std::vector<double> parse_real_list(const std::string& text);

/// INI file with sections [input], [strategies], [references], [subsystem],
/// [fci], [rhf], [effective], [output], [run].
RunConfig parse_config(std::istream& in, const std::filesystem::path& base_directory = {});
RunConfig load_config(const std::filesystem::path& path);

}  // namespace deepvqe
