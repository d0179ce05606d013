#include "deepvqe/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <thread>

#include "deepvqe/errors.hpp"
#include "deepvqe/fci.hpp"
#include "deepvqe/fcidump.hpp"
#include "deepvqe/geometry.hpp"
#include "deepvqe/jordan_wigner.hpp"
#include "deepvqe/lowdin.hpp"
#include "deepvqe/rhf.hpp"
#include "deepvqe/sto3g.hpp"

namespace deepvqe {

namespace {

template <class F>
auto staged(const std::string& stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const NumericalError& e) {
    throw NumericalError(stage + ": " + e.what());
  } catch (const ParseError& e) {
    throw ParseError(stage + ": " + e.what(), e.line());
  } catch (const ValidationError& e) {
    throw ValidationError(stage + ": " + e.what());
  }
}

std::string stretch_tag(double x) {
  std::ostringstream out;
  out << "x=" << x;
  return out.str();
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex(std::uint64_t v) {
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << v;
  return out.str();
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string integral_key(const RunConfig& config, double x) {
  std::ostringstream key;
  key << std::setprecision(17) << "sto3g-lowdin-1|" << read_file(config.geometry) << "|" << x;
  return hex(fnv1a(key.str()));
}

std::optional<double> read_cached_value(const std::filesystem::path& path) {
  std::ifstream in(path);
  double v = 0.0;
  if (in >> v) return v;
  return std::nullopt;
}

void write_cached_value(const std::filesystem::path& path, double v) {
  std::filesystem::create_directories(path.parent_path());
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp);
    out << std::setprecision(17) << v << "\n";
  }
  std::filesystem::rename(tmp, path);
}

std::vector<int> group_sizes(const std::vector<std::vector<int>>& groups) {
  std::vector<int> sizes;
  for (const auto& g : groups) sizes.push_back(2 * static_cast<int>(g.size()));
  return sizes;
}

int max_start_count(const RunConfig& config, int i) {
  int l = 1;
  for (const auto& s : config.strategies) l = std::max(l, s.start_counts.at(i));
  return l;
}

}  // namespace

std::optional<std::filesystem::path> cache_directory() {
  const char* env = std::getenv("DEEPVQE_CACHE_DIR");
  if (env == nullptr || *env == '\0') return std::nullopt;
  return std::filesystem::path(env);
}

IntegralSet load_integrals(const RunConfig& config, double x) {
  if (!config.fcidump.empty()) return read_fcidump(config.fcidump);
  const auto cache = cache_directory();
  std::filesystem::path cached;
  if (cache) {
    cached = *cache / ("integrals_" + integral_key(config, x) + ".fcidump");
    if (std::filesystem::exists(cached)) {
      IntegralSet ints = read_fcidump(cached);
      ints.orbital_basis_label = "lowdin";
      return ints;
    }
  }
  const MoleculeGeometry geometry = apply_stretching(read_xyz(config.geometry), x);
  const AoIntegrals ao = compute_sto3g_integrals(geometry);
  IntegralSet ints = lowdin_orthogonalize(ao.integrals, ao.overlap).integrals;
  if (cache) {
    std::filesystem::create_directories(*cache);
    const auto tmp = cached.string() + ".tmp";
    write_fcidump(std::filesystem::path(tmp), ints);
    std::filesystem::rename(tmp, cached);
    ints = read_fcidump(cached);
    ints.orbital_basis_label = "lowdin";
  }
  return ints;
}

PreparedPoint prepare_point(const RunConfig& config, double x) {
  config.validate();
  const std::string tag = stretch_tag(x);
  PreparedPoint p;
  p.x = x;
  p.integrals = staged("integrals " + tag, [&] { return load_integrals(config, x); });
  const int n = p.integrals.n_spatial();
  std::vector<bool> covered(n, false);
  for (const auto& g : config.groups)
    for (int q : g) {
      if (q >= n) throw ValidationError("orbital group references orbital " + std::to_string(q) + " of " +
                                        std::to_string(n));
      covered[q] = true;
    }
  if (std::find(covered.begin(), covered.end(), false) != covered.end())
    throw ValidationError("orbital groups do not cover every spatial orbital");

  p.hamiltonian = staged("jordan-wigner " + tag, [&] {
    return jordan_wigner(p.integrals, SpinOrbitalOrdering::grouped(n, config.groups));
  });
  p.partitioned = staged("partition " + tag, [&] {
    return partition(p.hamiltonian, SubsystemPartition::contiguous(group_sizes(config.groups)));
  });

  staged("subsystem solve " + tag, [&] {
    for (int i = 0; i < p.partitioned.partition.n_subsystems(); ++i) {
      const int l = max_start_count(config, i);
      const int n_i = p.partitioned.partition.size(i);
      const int k = std::min<long>(std::max(l, 4), (1L << n_i));
      p.spectra.push_back(solve_lowest(p.partitioned.locals[i], k, SpinLayout::interleaved(n_i), config.subsystem));
      p.starts.push_back(starting_states(p.spectra.back(), l));
    }
  });

  if (config.reference_combined) {
    p.e_combined = staged("combined reference " + tag, [&] {
      std::vector<Eigen::VectorXcd> ground;
      for (const auto& s : p.starts) ground.push_back(s.front().state.amplitudes);
      return combined_subsystem_energy(p.partitioned, ground);
    });
  }

  if (config.reference_rhf && p.integrals.n_electrons % 2 == 0) {
    // Optional reference: a non-converged SCF leaves E_HF empty instead of aborting the point.
    try {
      p.e_hf = rhf(p.integrals, Eigen::MatrixXd::Identity(n, n), p.integrals.n_electrons, config.rhf).energy;
    } catch (const NumericalError& e) {
      p.hf_note = e.what();
    }
  }

  if (config.reference_fci) {
    const int na = (p.integrals.n_electrons + p.integrals.ms2) / 2;
    const int nb = (p.integrals.n_electrons - p.integrals.ms2) / 2;
    if (fci_memory_estimate(n, na, nb) > config.fci.memory_budget_bytes) {
      p.fci_note = "FCI over the memory budget";
    } else {
      const auto cache = cache_directory();
      std::filesystem::path cached;
      if (cache && !config.geometry.empty()) {
        std::ostringstream key;
        key << std::setprecision(17) << integral_key(config, x) << "|" << na << "|" << nb << "|"
            << config.fci.lanczos.tolerance;
        cached = *cache / ("fci_" + hex(fnv1a(key.str())) + ".txt");
        p.e_fci = read_cached_value(cached);
      }
      if (!p.e_fci) {
        p.e_fci = staged("fci " + tag, [&] { return fci(p.integrals, na, nb, config.fci).energy; });
        if (!cached.empty()) write_cached_value(cached, *p.e_fci);
      }
    }
  }
  return p;
}

std::vector<SubsystemBasis> build_bases(const BasisStrategy& strategy, const PreparedPoint& point) {
  const auto& ph = point.partitioned;
  const int m = ph.partition.n_subsystems();
  strategy.validate(m);
  std::vector<SubsystemBasis> bases;
  if (strategy.kind == BasisKind::InteractionsFixQubits) {
    std::vector<int> budgets = strategy.qubit_budgets;
    if (budgets.empty()) {
      std::vector<int> caps, minimums;
      for (int i = 0; i < m; ++i) {
        caps.push_back(ph.partition.size(i));
        minimums.push_back(qubits_for_dimension(strategy.start_counts[i]));
      }
      budgets = distribute_qubit_budget(*strategy.total_qubit_budget, caps, minimums);
    }
    for (int i = 0; i < m; ++i) {
      const std::vector<StartingState> starts(point.starts[i].begin(),
                                              point.starts[i].begin() + strategy.start_counts[i]);
      bases.push_back(build_basis_fixed_qubits(starts, ph, i, budgets[i], strategy.gs_tolerance));
    }
    return bases;
  }
  const auto edges = edge_sets(strategy, ph);
  for (int i = 0; i < m; ++i) {
    if (static_cast<int>(point.starts[i].size()) < strategy.start_counts[i])
      throw ValidationError("not enough starting states prepared for subsystem " + std::to_string(i));
    const std::vector<StartingState> starts(point.starts[i].begin(), point.starts[i].begin() + strategy.start_counts[i]);
    bases.push_back(build_basis(strategy, starts, ph, i, edges));
  }
  return bases;
}

std::string start_label(const std::vector<int>& counts) {
  const bool digits = std::all_of(counts.begin(), counts.end(), [](int l) { return l < 10; });
  std::string s = digits ? "" : "(";
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (!digits && i) s += ',';
    s += std::to_string(counts[i]);
  }
  return digits ? s : s + ")";
}

StrategyOutcome run_strategy(const RunConfig& config, const PreparedPoint& point, const BasisStrategy& strategy) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::string tag = describe_strategy(strategy) + " " + stretch_tag(point.x);
  StrategyOutcome out;
  RunRecord& r = out.record;
  r.x = point.x;
  r.strategy = describe_strategy(strategy);
  r.start_label = start_label(strategy.start_counts);
  r.e_fci = point.e_fci;
  r.e_subsystems = point.e_combined;
  r.e_hf = point.e_hf;
  r.epsilon = strategy.epsilon;
  r.n_interactions = point.partitioned.interactions.size();

  out.bases = staged("basis " + tag, [&] { return build_bases(strategy, point); });
  for (const auto& b : out.bases) {
    r.dims.push_back(b.dimension());
    r.qubits.push_back(b.qubits_needed());
    r.n_tot += b.qubits_needed();
    if (b.epsilon_adapt) r.epsilon_adapt.push_back(*b.epsilon_adapt);
  }

  if (config.solve_effective) {
    out.effective = staged("assemble " + tag, [&] { return assemble(point.partitioned, out.bases); });
    out.solution = staged("effective solve " + tag, [&] { return solve_effective(*out.effective, config.effective); });
    r.e_deepvqe = out.solution->energy;
    r.matvecs = out.solution->matvecs;
    r.max_reconstruction_error =
        staged("measurement plan " + tag, [&] { return emit_measurement_plan(*out.effective).max_reconstruction_error; });
  }
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

RunResult run_pipeline(const RunConfig& config) {
  config.validate();
  const std::size_t n_points = config.stretch_factors.size();
  std::vector<std::vector<RunRecord>> per_point(n_points);
  std::vector<std::exception_ptr> errors(n_points);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t j = next++; j < n_points; j = next++) {
      try {
        const PreparedPoint point = prepare_point(config, config.stretch_factors[j]);
        for (const auto& s : config.strategies) per_point[j].push_back(run_strategy(config, point, s).record);
      } catch (...) {
        errors[j] = std::current_exception();
      }
    }
  };
  const int n_threads = static_cast<int>(std::min<std::size_t>(config.threads, n_points));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  // Points in ascending x, strategies in configuration order.
  std::vector<std::size_t> order(n_points);
  for (std::size_t j = 0; j < n_points; ++j) order[j] = j;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return config.stretch_factors[a] < config.stretch_factors[b]; });
  RunResult result;
  for (std::size_t j : order)
    for (auto& r : per_point[j]) result.records.push_back(std::move(r));
  return result;
}

double weighted_mean_error(const std::vector<RunRecord>& records) {
  if (records.empty()) throw ValidationError("weighted mean error needs at least one record");
  double sum = 0.0;
  for (const auto& r : records) {
    if (!r.e_deepvqe || !r.e_fci || !r.e_subsystems)
      throw ValidationError("record at " + stretch_tag(r.x) + " lacks an energy for the weighted mean error");
    const double denom = *r.e_subsystems - *r.e_fci;
    if (std::abs(denom) < 1e-12)
      throw NumericalError("combined-subsystem and FCI energies coincide at " + stretch_tag(r.x));
    sum += (*r.e_deepvqe - *r.e_fci) / denom;
  }
  return sum / static_cast<double>(records.size());
}

}  // namespace deepvqe
