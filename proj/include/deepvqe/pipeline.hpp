#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "deepvqe/config.hpp"
#include "deepvqe/effective_hamiltonian.hpp"
#include "deepvqe/integral_set.hpp"
#include "deepvqe/partition.hpp"
#include "deepvqe/qubit_hamiltonian.hpp"
#include "deepvqe/subsystem_solver.hpp"

namespace deepvqe {

/// Cache directory from DEEPVQE_CACHE_DIR, if set and non-empty.
std::optional<std::filesystem::path> cache_directory();

/// Löwdin-orthogonalized STO-3G integrals of the stretched geometry, or the
/// FCIDUMP contents (x ignored). Uses the cache directory when available.
IntegralSet load_integrals(const RunConfig& config, double x);

/// Stage output shared by every strategy at one stretch factor.
struct PreparedPoint {
  double x = 1.0;
  IntegralSet integrals{0};
  QubitHamiltonian hamiltonian;
  PartitionedHamiltonian partitioned;
  std::vector<EigenSolution> spectra;                 // per subsystem, low-lying levels
  std::vector<std::vector<StartingState>> starts;     // per subsystem, max l_i over strategies
  std::optional<double> e_fci;
  std::optional<double> e_hf;
  std::optional<double> e_combined;
  std::string fci_note;                               // why e_fci is missing, if it is
  std::string hf_note;                                // why e_hf is missing, if it is
};

PreparedPoint prepare_point(const RunConfig& config, double x);

struct RunRecord {
  double x = 0.0;
  std::string strategy;     // describe_strategy()
  std::string start_label;  // "1111", "(10,10)"
  std::optional<double> e_deepvqe;
  std::optional<double> e_fci;
  std::optional<double> e_subsystems;
  std::optional<double> e_hf;
  int n_tot = 0;
  std::vector<int> dims;
  std::vector<int> qubits;
  std::optional<double> epsilon;       // thresholded interaction kinds
  std::vector<double> epsilon_adapt;   // fixed-qubit kind, per subsystem
  std::size_t n_interactions = 0;
  long matvecs = 0;
  double max_reconstruction_error = 0.0;
  double wall_seconds = 0.0;
};

/// Everything produced for one strategy at one point.
struct StrategyOutcome {
  RunRecord record;
  std::vector<SubsystemBasis> bases;
  std::optional<EffectiveHamiltonian> effective;
  std::optional<EffectiveSolution> solution;
};

/// Basis construction for one strategy (l_i leading starting states per subsystem).
std::vector<SubsystemBasis> build_bases(const BasisStrategy& strategy, const PreparedPoint& point);

StrategyOutcome run_strategy(const RunConfig& config, const PreparedPoint& point, const BasisStrategy& strategy);

struct RunResult {
  std::vector<RunRecord> records;  // sorted by x, then by strategy order in the config
};

/// All points and strategies; points run on config.threads workers.
RunResult run_pipeline(const RunConfig& config);

/// (1/|X|) sum_x (E - E_FCI) / (E_subsystems - E_FCI) over the given records.
double weighted_mean_error(const std::vector<RunRecord>& records);

std::string start_label(const std::vector<int>& counts);

}  // namespace deepvqe
