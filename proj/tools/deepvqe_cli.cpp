#include <chrono>
#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "deepvqe/config.hpp"
#include "deepvqe/errors.hpp"
#include "deepvqe/fci.hpp"
#include "deepvqe/fcidump.hpp"
#include "deepvqe/geometry.hpp"
#include "deepvqe/lowdin.hpp"
#include "deepvqe/pipeline.hpp"
#include "deepvqe/results.hpp"
#include "deepvqe/rhf.hpp"
#include "deepvqe/sto3g.hpp"

using namespace deepvqe;

namespace {

struct InputFlags {
  std::string config;
  std::string xyz;
  std::string fcidump;
  std::string groups;
  std::vector<double> stretch;
  std::vector<std::string> strategies;
  std::string output;
  int threads = 0;
  bool no_fci = false;
};

void add_input_flags(CLI::App* app, InputFlags& f, bool with_strategies) {
  app->add_option("-c,--config", f.config, "INI configuration file");
  app->add_option("--xyz", f.xyz, "geometry in XYZ format (angstrom)");
  app->add_option("--fcidump", f.fcidump, "integrals in FCIDUMP format");
  app->add_option("--groups", f.groups, "spatial orbital groups, e.g. \"0 | 1 2 3 | 4 5 6\"");
  app->add_option("-x,--stretch", f.stretch, "stretching factors");
  if (with_strategies) {
    app->add_option("-s,--strategy", f.strategies, "basis strategy, e.g. \"ParticleConservingEdge(1111)\"");
    app->add_option("-o,--output", f.output, "output directory");
    app->add_option("-j,--threads", f.threads, "worker threads for sweep points");
    app->add_flag("--no-fci", f.no_fci, "skip the FCI reference");
  }
}

RunConfig make_config(const InputFlags& f) {
  RunConfig cfg;
  if (!f.config.empty()) cfg = load_config(f.config);
  if (!f.xyz.empty()) {
    cfg.geometry = f.xyz;
    cfg.fcidump.clear();
  }
  if (!f.fcidump.empty()) {
    cfg.fcidump = f.fcidump;
    cfg.geometry.clear();
    if (f.stretch.empty()) cfg.stretch_factors = {1.0};
  }
  if (!f.groups.empty()) cfg.groups = parse_groups(f.groups);
  if (!f.stretch.empty()) cfg.stretch_factors = f.stretch;
  if (!f.strategies.empty()) {
    cfg.strategies.clear();
    for (const auto& s : f.strategies) cfg.strategies.push_back(parse_strategy(s));
  }
  if (!f.output.empty()) cfg.output_directory = f.output;
  if (f.threads > 0) cfg.threads = f.threads;
  if (f.no_fci) cfg.reference_fci = false;
  return cfg;
}

IntegralSet integrals_for(const InputFlags& f, double x) {
  if (!f.fcidump.empty()) return read_fcidump(std::filesystem::path(f.fcidump));
  if (f.xyz.empty()) throw ValidationError("--xyz or --fcidump is required");
  const auto geometry = apply_stretching(read_xyz(std::filesystem::path(f.xyz)), x);
  const auto ao = compute_sto3g_integrals(geometry);
  return lowdin_orthogonalize(ao.integrals, ao.overlap).integrals;
}

void print_record(const RunRecord& r) {
  auto opt = [](const std::optional<double>& v) {
    std::ostringstream s;
    if (v) {
      s << std::fixed << std::setprecision(9) << *v;
    } else {
      s << "-";
    }
    return s.str();
  };
  std::cout << "x=" << r.x << "  " << r.strategy << "  N_tot=" << r.n_tot << "  K=";
  for (std::size_t i = 0; i < r.dims.size(); ++i) std::cout << (i ? "," : "") << r.dims[i];
  std::cout << "  E=" << opt(r.e_deepvqe) << "  E_FCI=" << opt(r.e_fci) << "  E_sub=" << opt(r.e_subsystems)
            << "  (" << std::setprecision(3) << r.wall_seconds << " s)\n";
}

int run_records(const RunConfig& cfg) {
  const auto result = run_pipeline(cfg);
  for (const auto& r : result.records) print_record(r);
  emit_results(cfg.output_directory, cfg.output_stem, result.records);
  std::cout << "wrote " << (cfg.output_directory / (cfg.output_stem + ".csv")).string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Divide-and-conquer ground-state pipeline for molecular Hamiltonians"};
  app.require_subcommand(1);

  InputFlags integrals_flags;
  std::string fcidump_out;
  auto* integrals_cmd = app.add_subcommand("integrals", "STO-3G integrals in the Lowdin basis, written as FCIDUMP");
  add_input_flags(integrals_cmd, integrals_flags, false);
  integrals_cmd->add_option("--out", fcidump_out, "output FCIDUMP path")->required();

  InputFlags info_flags;
  auto* info_cmd = app.add_subcommand("partition-info", "subsystem sizes, term counts and low-lying levels");
  add_input_flags(info_cmd, info_flags, true);

  InputFlags fci_flags;
  auto* fci_cmd = app.add_subcommand("fci", "FCI and RHF reference energies");
  add_input_flags(fci_cmd, fci_flags, false);
  double fci_tolerance = FciOptions{}.lanczos.tolerance;
  fci_cmd->add_option("--tolerance", fci_tolerance, "relative Lanczos residual tolerance")->check(CLI::PositiveNumber);

  InputFlags run_flags;
  auto* run_cmd = app.add_subcommand("run", "full pipeline at a single stretching factor");
  add_input_flags(run_cmd, run_flags, true);

  InputFlags sweep_flags;
  auto* sweep_cmd = app.add_subcommand("sweep", "full pipeline over every stretching factor and strategy");
  add_input_flags(sweep_cmd, sweep_flags, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (integrals_cmd->parsed()) {
      const double x = integrals_flags.stretch.empty() ? 1.0 : integrals_flags.stretch.front();
      write_fcidump(std::filesystem::path(fcidump_out), integrals_for(integrals_flags, x));
      std::cout << "wrote " << fcidump_out << "\n";
      return 0;
    }
    if (fci_cmd->parsed()) {
      const std::vector<double> xs = fci_flags.stretch.empty() ? std::vector<double>{1.0} : fci_flags.stretch;
      for (double x : xs) {
        const IntegralSet ints = integrals_for(fci_flags, x);
        const int n = ints.n_spatial();
        std::cout << std::setprecision(12) << "x=" << x;
        if (ints.n_electrons % 2 == 0 && ints.ms2 == 0) {
          std::ostringstream hf;
          hf << std::setprecision(12);
          try {
            hf << rhf(ints, Eigen::MatrixXd::Identity(n, n), ints.n_electrons).energy;
          } catch (const NumericalError&) {
            hf.str("unconverged");
          }
          std::cout << "  E_RHF=" << hf.str();
        }
        FciOptions fo;
        fo.lanczos.tolerance = fci_tolerance;
        const auto t0 = std::chrono::steady_clock::now();
        const FciResult f = fci(ints, fo);
        const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
        std::cout << "  E_FCI=" << f.energy << "  residual=" << f.residuals.front() << "  dimension=" << f.dimension
                  << "  products=" << f.matvecs << "  seconds=" << std::setprecision(4) << dt.count() << "\n";
      }
      return 0;
    }
    if (info_cmd->parsed()) {
      RunConfig cfg = make_config(info_flags);
      cfg.reference_fci = false;
      cfg.reference_rhf = false;
      cfg.validate();
      for (double x : cfg.stretch_factors) {
        const PreparedPoint p = prepare_point(cfg, x);
        const auto& ph = p.partitioned;
        std::cout << "x=" << x << "  qubits=" << p.hamiltonian.n_qubits() << "  terms=" << p.hamiltonian.size()
                  << "  interactions=" << ph.interactions.size() << "  constant=" << std::setprecision(12)
                  << ph.constant << "\n";
        if (!ph.interactions.empty())
          std::cout << "  strongest |lambda|=" << std::abs(ph.interactions.front().lambda) << "\n";
        for (int i = 0; i < ph.partition.n_subsystems(); ++i) {
          std::cout << "  subsystem " << i << ": " << ph.partition.size(i) << " qubits, " << ph.locals[i].size()
                    << " local terms, levels";
          for (std::size_t l = 0; l < p.spectra[i].levels.size(); ++l)
            std::cout << " " << p.spectra[i].levels[l].energy << " (x" << p.spectra[i].levels[l].degeneracy() << ")";
          std::cout << "\n";
        }
        for (const auto& s : cfg.strategies) {
          const auto bases = build_bases(s, p);
          int n_tot = 0;
          std::cout << "  " << describe_strategy(s) << ": K=";
          for (std::size_t i = 0; i < bases.size(); ++i) {
            std::cout << (i ? "," : "") << bases[i].dimension();
            n_tot += bases[i].qubits_needed();
          }
          std::cout << "  N_tot=" << n_tot << "\n";
        }
      }
      return 0;
    }
    if (run_cmd->parsed()) {
      RunConfig cfg = make_config(run_flags);
      if (cfg.stretch_factors.size() > 1) cfg.stretch_factors.resize(1);
      return run_records(cfg);
    }
    if (sweep_cmd->parsed()) return run_records(make_config(sweep_flags));
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
