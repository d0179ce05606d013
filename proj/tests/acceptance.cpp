// End-to-end acceptance report. Prints one PASS/FAIL/SKIPPED line per
// criterion, followed by indented detail lines, and exits 0 once the report
// is complete. A non-zero exit means the harness itself broke.

#include <Eigen/Eigenvalues>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "deepvqe/config.hpp"
#include "deepvqe/errors.hpp"
#include "deepvqe/fci.hpp"
#include "deepvqe/fcidump.hpp"
#include "deepvqe/geometry.hpp"
#include "deepvqe/jordan_wigner.hpp"
#include "deepvqe/lowdin.hpp"
#include "deepvqe/matrix_representation.hpp"
#include "deepvqe/partition.hpp"
#include "deepvqe/pipeline.hpp"
#include "deepvqe/results.hpp"
#include "deepvqe/rhf.hpp"
#include "deepvqe/sto3g.hpp"
#include "oracles.hpp"

using namespace deepvqe;
namespace fs = std::filesystem;

namespace {

enum class Status { Pass, Fail, Skipped };

struct Report {
  Status status = Status::Pass;
  std::vector<std::string> details;

  void fail(const std::string& why) {
    status = Status::Fail;
    details.push_back("FAIL " + why);
  }
  void note(const std::string& what) { details.push_back(what); }
  void check(bool ok, const std::string& what) {
    if (ok)
      note("ok   " + what);
    else
      fail(what);
  }
};

const char* to_string(Status s) {
  switch (s) {
    case Status::Pass: return "PASS";
    case Status::Fail: return "FAIL";
    case Status::Skipped: return "SKIPPED";
  }
  return "?";
}

std::string fmt(double v, int precision = 10) {
  std::ostringstream out;
  out << std::setprecision(precision) << v;
  return out.str();
}

void print(const std::string& name, const std::string& summary, const Report& r) {
  std::cout << name << ": " << to_string(r.status) << "  " << summary << "\n";
  for (const auto& d : r.details) std::cout << "    " << d << "\n";
  std::cout.flush();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

fs::path data_dir() { return fs::path(DEEPVQE_DATA_DIR); }

fs::path work_dir() {
  const auto dir = fs::current_path() / "acceptance_work";
  fs::create_directories(dir);
  return dir;
}

double lowest_eigenvalue(const Eigen::MatrixXcd& h) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(h, Eigen::EigenvaluesOnly).eigenvalues()[0];
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = 0; c < a.cols(); ++c) out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
  return out;
}

// Isometry onto the product of the subsystem bases in the global register.
// Blocks are contiguous and subsystem 0 holds the lowest qubits.
Eigen::MatrixXcd product_isometry(const std::vector<SubsystemBasis>& bases) {
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Identity(1, 1);
  for (const auto& b : bases) p = kron(b.vectors, p);
  return p;
}

// ---------------------------------------------------------------------------
// 10-H tree sweep, shared by criteria 1, 4, 5d, 5e, 5f and 7.

struct TreeSweep {
  RunConfig config;
  std::vector<RunRecord> records;
  std::map<double, std::vector<int>> ground_degeneracy;       // per x, per subsystem
  std::map<double, std::vector<int>> first_excited_degeneracy;
  std::map<std::string, double> monotone_chain;               // label -> energy at x = 1
  std::vector<std::string> monotone_order;
  double max_reconstruction_error = 0.0;
  std::string error;
};

std::vector<int> degeneracies(const PreparedPoint& p, int level) {
  std::vector<int> d;
  for (const auto& s : p.spectra)
    d.push_back(static_cast<int>(s.levels.size()) > level ? s.levels[level].degeneracy() : 0);
  return d;
}

TreeSweep run_h10_sweep() {
  TreeSweep sw;
  sw.config = load_config(data_dir() / "h10_tree.ini");
  for (double x : sw.config.stretch_factors) {
    const auto t0 = std::chrono::steady_clock::now();
    const PreparedPoint point = prepare_point(sw.config, x);
    sw.ground_degeneracy[x] = degeneracies(point, 0);
    sw.first_excited_degeneracy[x] = degeneracies(point, 1);
    for (const auto& s : sw.config.strategies) {
      auto out = run_strategy(sw.config, point, s);
      sw.max_reconstruction_error = std::max(sw.max_reconstruction_error, out.record.max_reconstruction_error);
      std::cerr << "  10-H x=" << x << " " << out.record.strategy << " E=" << fmt(out.record.e_deepvqe.value_or(0.0), 12)
                << " N_tot=" << out.record.n_tot << " (" << fmt(out.record.wall_seconds, 3) << " s)\n";
      sw.records.push_back(std::move(out.record));
    }
    if (x == 1.0) {
      // l_i -> l_i + 1, one subsystem at a time, for both edge kinds.
      for (const std::string kind : {"ParticleConservingEdge", "SinglePauliEdge"})
        for (const std::string counts : {"1111", "2111", "2211", "2221", "2222"}) {
          const auto s = parse_strategy(kind + "(" + counts + ")");
          auto out = run_strategy(sw.config, point, s);
          sw.max_reconstruction_error = std::max(sw.max_reconstruction_error, out.record.max_reconstruction_error);
          sw.monotone_chain[out.record.strategy] = out.record.e_deepvqe.value();
          sw.monotone_order.push_back(out.record.strategy);
        }
    }
    std::cerr << "10-H x=" << x << " done in " << fmt(seconds_since(t0), 4) << " s\n";
  }
  return sw;
}

// ---------------------------------------------------------------------------

Report criterion1(const TreeSweep& sw) {
  Report r;
  const std::map<std::string, std::vector<int>> expected{
      {"ParticleConserving(1111)", {17, 17, 17, 17, 17, 17, 17}},
      {"ParticleConservingEdge(1111)", {11, 11, 11, 11, 11, 11, 11}},
      {"SinglePauliEdge(1111)", {11, 11, 11, 11, 11, 11, 11}},
      {"ParticleConservingEdge(2222)", {14, 14, 14, 14, 14, 14, 14}},
      {"SinglePauliEdge(2222)", {14, 14, 14, 14, 14, 14, 14}},
      {"Interactions(1111;eps=0.01)", {17, 17, 14, 11, 11, 11, 7}},
  };
  for (const auto& [strategy, counts] : expected) {
    std::ostringstream got;
    bool ok = true;
    for (std::size_t j = 0; j < 7; ++j) {
      const double x = oracle::kH10Stretch[j];
      int n = -1;
      for (const auto& rec : sw.records)
        if (rec.strategy == strategy && rec.x == x) n = rec.n_tot;
      got << (j ? "/" : "") << n;
      ok = ok && n == counts[j];
    }
    std::ostringstream want;
    for (std::size_t j = 0; j < 7; ++j) want << (j ? "/" : "") << counts[j];
    r.check(ok, strategy + " N_tot " + got.str() + " (expected " + want.str() + ")");
  }
  return r;
}

Report criterion2() {
  Report r;
  RunConfig cfg = load_config(data_dir() / "h13_tree.ini");
  const std::map<std::string, int> expected{
      {"SinglePauli(1111)", 17},           {"SinglePauliEdge(1111)", 11},      {"ParticleConservingEdge(1111)", 11},
      {"ParticleConservingEdge(2444)", 17}, {"SinglePauliEdge(2444)", 17},
  };
  std::map<std::string, std::string> got;
  std::map<std::string, bool> ok;
  for (double x : cfg.stretch_factors) {
    const PreparedPoint point = prepare_point(cfg, x);
    for (const auto& s : cfg.strategies) {
      const auto out = run_strategy(cfg, point, s);
      const auto& rec = out.record;
      got[rec.strategy] += (got[rec.strategy].empty() ? "" : "/") + std::to_string(rec.n_tot);
      const auto it = expected.find(rec.strategy);
      if (it == expected.end()) continue;
      if (!ok.count(rec.strategy)) ok[rec.strategy] = true;
      ok[rec.strategy] = ok[rec.strategy] && rec.n_tot == it->second;
    }
  }
  for (const auto& [strategy, n] : expected)
    r.check(ok.count(strategy) && ok[strategy], strategy + " N_tot " + got[strategy] + " (expected " + std::to_string(n) +
                                                    " at every x)");

  // Energy sandwich at x = 1 for the two smallest strategies: combined
  // subsystem energy above, reduced-accuracy FCI bound below.
  RunConfig solve = cfg;
  solve.solve_effective = true;
  solve.reference_combined = true;
  solve.reference_fci = false;
  const PreparedPoint point = prepare_point(solve, 1.0);
  const auto t0 = std::chrono::steady_clock::now();
  // Loose Lanczos run; Ritz value minus residual norm bounds the lowest
  // eigenvalue from below once the Ritz value has settled on it.
  FciOptions fo;
  fo.lanczos.tolerance = 1e-3;
  std::optional<double> lower;
  try {
    const FciResult f = fci(point.integrals, fo);
    lower = f.energy - f.residuals.front();
    r.note("13-H x=1 FCI Ritz value " + fmt(f.energy, 12) + ", residual " + fmt(f.residuals.front(), 3) + ", " +
           std::to_string(f.matvecs) + " products, " + fmt(seconds_since(t0), 4) + " s");
  } catch (const ValidationError& e) {
    r.note(std::string("13-H FCI unavailable: ") + e.what());
  }
  for (const std::string text : {"SinglePauliEdge(1111)", "ParticleConservingEdge(1111)"}) {
    const auto out = run_strategy(solve, point, parse_strategy(text));
    const double e = out.record.e_deepvqe.value();
    const double upper = point.e_combined.value();
    r.check(e <= upper + 1e-9, text + " x=1 E=" + fmt(e, 12) + " <= E_combined=" + fmt(upper, 12));
    if (lower) r.check(e >= *lower, text + " x=1 E >= FCI lower bound " + fmt(*lower, 12));
  }
  return r;
}

Report criterion3() {
  Report r;
  const char* path = std::getenv("DEEPVQE_RETINAL_FCIDUMP");
  if (!path || !*path) {
    r.status = Status::Skipped;
    r.note("set DEEPVQE_RETINAL_FCIDUMP to a 10-orbital, 10-electron active-space FCIDUMP to run this check");
    return r;
  }
  RunConfig cfg;
  cfg.fcidump = path;
  cfg.stretch_factors = {1.0};
  const char* groups = std::getenv("DEEPVQE_RETINAL_GROUPS");
  cfg.groups = parse_groups(groups && *groups ? groups : "0 1 2 3 4 | 5 6 7 8 9");
  const std::vector<std::pair<std::string, double>> expected{
      {"InteractionsFixQubits(1,1;qubits=12)", 42.41}, {"InteractionsFixQubits(1,1;qubits=14)", 9.578},
      {"InteractionsFixQubits(2,2;qubits=12)", 1.759}, {"InteractionsFixQubits(2,2;qubits=14)", 0.362},
      {"ParticleConserving(1,1)", 10.75},              {"ParticleConservingEdge(10,10)", 0.710},
      {"SinglePauliEdge(8,8)", 1.897},
  };
  for (const auto& [s, de] : expected) cfg.strategies.push_back(parse_strategy(s));
  cfg.reference_rhf = false;
  cfg.validate();
  const PreparedPoint point = prepare_point(cfg, 1.0);
  if (!point.e_fci) {
    r.fail("CASCI reference unavailable: " + point.fci_note);
    return r;
  }
  r.check(std::abs(*point.e_fci - -838.2928) <= 0.5e-3, "CASCI " + fmt(*point.e_fci, 12) + " (expected -838.2928 +- 0.5 mH)");
  for (std::size_t k = 0; k < expected.size(); ++k) {
    const auto out = run_strategy(cfg, point, cfg.strategies[k]);
    const double de = 1e3 * (out.record.e_deepvqe.value() - *point.e_fci);
    r.check(std::abs(de - expected[k].second) <= 0.05, out.record.strategy + " dE=" + fmt(de, 6) + " mH (expected " +
                                                           fmt(expected[k].second, 6) + " +- 0.05), N_tot " +
                                                           std::to_string(out.record.n_tot));
  }
  return r;
}

Report criterion4(const TreeSweep& sw, double& value) {
  Report r;
  std::vector<RunRecord> pc;
  for (const auto& rec : sw.records)
    if (rec.strategy == "ParticleConserving(1111)") pc.push_back(rec);
  for (const auto& rec : pc) {
    const double ratio = (*rec.e_deepvqe - *rec.e_fci) / (*rec.e_subsystems - *rec.e_fci);
    r.note("x=" + fmt(rec.x, 3) + " E=" + fmt(*rec.e_deepvqe, 12) + " E_FCI=" + fmt(*rec.e_fci, 12) +
           " E_combined=" + fmt(*rec.e_subsystems, 12) + " ratio=" + fmt(ratio, 5));
  }
  value = weighted_mean_error(pc);
  r.check(value < 0.01, "weighted mean error " + fmt(value, 6) + " < 0.01");
  // Same figure for every other strategy, for context.
  std::map<std::string, std::vector<RunRecord>> by_strategy;
  for (const auto& rec : sw.records) by_strategy[rec.strategy].push_back(rec);
  for (const auto& [s, recs] : by_strategy)
    if (s != "ParticleConserving(1111)") r.note("context: " + s + " weighted mean error " + fmt(weighted_mean_error(recs), 6));
  return r;
}

// 5a: canonical anticommutation relations on 8 spatial orbitals.
Report criterion5a() {
  Report r;
  const int n = 16;
  std::vector<PauliSum> a, ad;
  for (int q = 0; q < n; ++q) {
    a.push_back(jw_annihilation(q, n));
    ad.push_back(jw_creation(q, n));
  }
  const PauliSum zero(n), one = PauliSum::identity(n);
  auto equal = [](PauliSum x, const PauliSum& y) {
    x -= y;
    x.simplify(0.0);
    return x.size() == 0;
  };
  int failures = 0;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      if (!equal(anticommutator(a[p], ad[q]), p == q ? one : zero)) ++failures;
      if (!equal(anticommutator(a[p], a[q]), zero)) ++failures;
      if (!equal(anticommutator(ad[p], ad[q]), zero)) ++failures;
    }
  r.check(failures == 0, "{a_p, a_q^+} = delta_pq, {a_p, a_q} = {a_p^+, a_q^+} = 0 on 16 spin orbitals (" +
                             std::to_string(failures) + " violations of 768)");
  return r;
}

// 5b: partition followed by reassembly is the identity on the term multiset.
Report criterion5b() {
  Report r;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  int mismatches = 0;
  for (int t = 0; t < 200; ++t) {
    const int n = 2 + static_cast<int>(rng() % 9);
    const int n_terms = 1 + static_cast<int>(rng() % 200);
    const std::uint64_t mask = (std::uint64_t{1} << n) - 1;
    std::vector<QubitTerm> terms;
    for (int k = 0; k < n_terms; ++k) terms.push_back({PauliString{rng() & mask, rng() & mask}, coeff(rng)});
    const auto h = QubitHamiltonian::from_terms(n, terms);
    std::vector<int> qubits(n);
    for (int q = 0; q < n; ++q) qubits[q] = q;
    std::shuffle(qubits.begin(), qubits.end(), rng);
    const int m = 1 + static_cast<int>(rng() % std::min(n, 4));
    std::vector<std::vector<int>> blocks(m);
    for (int q = 0; q < n; ++q) blocks[q < m ? q : rng() % m].push_back(qubits[q]);
    for (auto& b : blocks) std::sort(b.begin(), b.end());
    const auto back = reassemble(partition(h, SubsystemPartition(n, blocks)));
    bool same = back.size() == h.size();
    for (std::size_t k = 0; same && k < h.size(); ++k)
      same = back.terms()[k].ops == h.terms()[k].ops && back.terms()[k].coefficient == h.terms()[k].coefficient;
    if (!same) ++mismatches;
  }
  r.check(mismatches == 0, "200 random Hamiltonians (<= 10 qubits, <= 200 terms) reassemble exactly (" +
                               std::to_string(mismatches) + " mismatches)");
  return r;
}

// 5c: solve_effective against dense diagonalization of P^dagger H P.
Report criterion5c(double& max_recon) {
  Report r;
  const std::vector<std::string> strategies{
      "ParticleConserving(11)",          "ParticleConservingEdge(11)",     "SinglePauli(11)",
      "SinglePauliEdge(22)",             "SinglePauliExcited(22)",         "Interactions(11;eps=0.001)",
      "InteractionsExcited(22;eps=0.01)", "InteractionsFixQubits(11;qubits=5)",
  };
  auto check_point = [&](const RunConfig& base, double x, const std::string& name) {
    RunConfig cfg = base;
    cfg.strategies.clear();
    for (const auto& s : strategies) cfg.strategies.push_back(parse_strategy(s));
    cfg.reference_fci = false;
    cfg.reference_rhf = false;
    cfg.validate();
    const PreparedPoint point = prepare_point(cfg, x);
    const Eigen::MatrixXcd h = dense_matrix(point.hamiltonian);
    double worst = 0.0;
    std::string worst_label;
    for (const auto& s : cfg.strategies) {
      const auto out = run_strategy(cfg, point, s);
      max_recon = std::max(max_recon, out.record.max_reconstruction_error);
      const Eigen::MatrixXcd p = product_isometry(out.bases);
      const double oracle = lowest_eigenvalue(p.adjoint() * h * p);
      const double diff = std::abs(out.solution->energy - oracle);
      if (diff > worst) {
        worst = diff;
        worst_label = out.record.strategy;
      }
    }
    r.check(worst <= 1e-9, name + ": max |E_eff - E_oracle| = " + fmt(worst, 3) + " over " +
                               std::to_string(strategies.size()) + " strategies" +
                               (worst_label.empty() ? "" : " (worst " + worst_label + ")"));
  };

  const auto dir = work_dir();
  for (double spacing : {0.8, 1.0, 1.5}) {
    const auto xyz = dir / ("h4_" + fmt(spacing, 3) + ".xyz");
    std::ofstream(xyz) << "4\nH4 chain\nH 0 0 0\nH 0 0 " << spacing << "\nH 0 0 " << 2 * spacing << "\nH 0 0 "
                       << 3 * spacing << "\n";
    RunConfig cfg;
    cfg.geometry = xyz;
    cfg.stretch_factors = {1.0};
    cfg.groups = {{0, 1}, {2, 3}};
    check_point(cfg, 1.0, "H4 chain spacing " + fmt(spacing, 3) + " A");
  }

  // 10-H tree at x = 1 truncated to its first four Lowdin orbitals (8 qubits).
  RunConfig tree = load_config(data_dir() / "h10_tree.ini");
  const IntegralSet full = load_integrals(tree, 1.0);
  const std::vector<int> keep{0, 1, 2, 3};
  IntegralSet small(4);
  small.e_nuc = full.e_nuc;
  small.n_electrons = 4;
  small.ms2 = 0;
  for (int p = 0; p < 4; ++p)
    for (int q = 0; q < 4; ++q) {
      small.h1(p, q) = full.h1(keep[p], keep[q]);
      for (int s = 0; s < 4; ++s)
        for (int t = 0; t < 4; ++t) small.h2(p, q, s, t) = full.h2(keep[p], keep[q], keep[s], keep[t]);
    }
  const auto dump = dir / "h10_truncated.fcidump";
  write_fcidump(dump, small);
  RunConfig cfg;
  cfg.fcidump = dump;
  cfg.stretch_factors = {1.0};
  cfg.groups = {{0}, {1, 2, 3}};
  check_point(cfg, 1.0, "10-H tree truncated to 8 qubits");
  return r;
}

Report criterion5d(const TreeSweep& sw) {
  Report r;
  int violations = 0;
  double worst_low = 0.0, worst_high = 0.0;
  for (const auto& rec : sw.records) {
    if (!rec.e_deepvqe || !rec.e_fci || !rec.e_subsystems) {
      r.fail("record " + rec.strategy + " x=" + fmt(rec.x, 3) + " lacks an energy");
      continue;
    }
    worst_low = std::min(worst_low, *rec.e_deepvqe - *rec.e_fci);
    worst_high = std::max(worst_high, *rec.e_deepvqe - *rec.e_subsystems);
    try {
      check_sandwich(rec, 1e-9);
    } catch (const NumericalError& e) {
      ++violations;
      r.fail(e.what());
    }
  }
  r.check(violations == 0, std::to_string(sw.records.size()) + " records (strategies x stretch): min(E - E_FCI) = " +
                               fmt(worst_low, 3) + ", max(E - E_combined) = " + fmt(worst_high, 3));
  return r;
}

Report criterion5f(const TreeSweep& sw) {
  Report r;
  for (std::size_t k = 1; k < sw.monotone_order.size(); ++k) {
    const auto& prev = sw.monotone_order[k - 1];
    const auto& cur = sw.monotone_order[k];
    if (prev.substr(0, prev.find('(')) != cur.substr(0, cur.find('('))) continue;
    const double e0 = sw.monotone_chain.at(prev), e1 = sw.monotone_chain.at(cur);
    r.check(e1 <= e0 + 1e-9, cur + " E=" + fmt(e1, 12) + " <= " + prev + " E=" + fmt(e0, 12));
  }
  return r;
}

Report criterion6() {
  Report r;
  MoleculeGeometry g;
  g.atoms.push_back({"H", 1, Eigen::Vector3d(0, 0, 0)});
  g.atoms.push_back({"H", 1, Eigen::Vector3d(0, 0, oracle::kH2Bond)});
  const AoIntegrals ao = compute_sto3g_integrals(g);
  const auto orth = lowdin_orthogonalize(ao.integrals, ao.overlap);
  const double e_rhf = rhf(orth.integrals, Eigen::MatrixXd::Identity(2, 2), 2).energy;
  const double e_fci = fci(orth.integrals).energy;
  r.check(std::abs(e_rhf - oracle::kH2Rhf) < 1e-4, "RHF " + fmt(e_rhf, 12) + " vs oracle " + fmt(oracle::kH2Rhf, 12));
  r.check(std::abs(e_fci - oracle::kH2Fci) < 1e-4, "FCI " + fmt(e_fci, 12) + " vs oracle " + fmt(oracle::kH2Fci, 12));
  r.check(std::abs(e_rhf - -1.11675) < 1e-4, "RHF within 0.1 mH of -1.11675");
  r.check(std::abs(e_fci - -1.1373) < 1e-4, "FCI within 0.1 mH of -1.1373");
  return r;
}

Report criterion7(const TreeSweep& sw) {
  Report r;
  for (const auto& [x, d] : sw.ground_degeneracy) {
    std::ostringstream s;
    bool ok = true;
    for (std::size_t i = 0; i < d.size(); ++i) {
      s << (i ? "," : "") << d[i];
      ok = ok && d[i] == 2;
    }
    r.check(ok, "10-H x=" + fmt(x, 3) + " subsystem ground degeneracies " + s.str() + " (expected 2 each)");
  }
  RunConfig cfg = load_config(data_dir() / "h13_tree.ini");
  cfg.reference_combined = false;
  for (double x : cfg.stretch_factors) {
    const PreparedPoint p = prepare_point(cfg, x);
    const auto d = degeneracies(p, 1);
    std::ostringstream s;
    bool ok = true;
    for (std::size_t i = 1; i < d.size(); ++i) {
      s << (i > 1 ? "," : "") << d[i];
      ok = ok && d[i] == 3;
    }
    r.check(ok, "13-H x=" + fmt(x, 3) + " branch first-excited degeneracies " + s.str() + " (expected 3 each)");
  }
  return r;
}

}  // namespace

int main() {
  const auto t_start = std::chrono::steady_clock::now();
  std::cout << std::unitbuf;
  std::vector<std::pair<std::string, Status>> summary;
  auto guarded = [&](const std::string& name, auto&& body) {
    Report r;
    std::string headline;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      r = body(headline);
    } catch (const std::exception& e) {
      r.fail(std::string("harness exception: ") + e.what());
    }
    print(name, headline + " [" + fmt(seconds_since(t0), 4) + " s]", r);
    summary.emplace_back(name, r.status);
  };

  TreeSweep sw;
  try {
    sw = run_h10_sweep();
  } catch (const std::exception& e) {
    sw.error = e.what();
  }
  auto needs_sweep = [&](auto&& body) {
    return [&, body](std::string& headline) {
      if (!sw.error.empty()) throw std::runtime_error("10-H sweep failed: " + sw.error);
      return body(headline);
    };
  };

  if (sw.error.empty()) {
    try {
      emit_results(work_dir(), "h10_tree", sw.records);
    } catch (const std::exception& e) {
      std::cerr << "results not written: " << e.what() << "\n";
    }
  }

  double recon_5c = 0.0, wme = 0.0;
  guarded("criterion 1", needs_sweep([&](std::string& h) {
            h = "10-H qubit counts";
            return criterion1(sw);
          }));
  guarded("criterion 2", [&](std::string& h) {
    h = "13-H qubit counts";
    return criterion2();
  });
  guarded("criterion 3", [&](std::string& h) {
    h = "retinal active space";
    return criterion3();
  });
  guarded("criterion 4", needs_sweep([&](std::string& h) {
            h = "weighted mean error, ParticleConserving(1111), 10-H";
            return criterion4(sw, wme);
          }));

  Report five;
  std::vector<std::pair<std::string, Report>> parts;
  auto part = [&](const std::string& id, auto&& body) {
    Report p;
    try {
      p = body();
    } catch (const std::exception& e) {
      p.fail(std::string("harness exception: ") + e.what());
    }
    parts.emplace_back(id, p);
  };
  const auto t5 = std::chrono::steady_clock::now();
  part("5a", [&] { return criterion5a(); });
  part("5b", [&] { return criterion5b(); });
  part("5c", [&] { return criterion5c(recon_5c); });
  part("5d", [&] {
    if (!sw.error.empty()) throw std::runtime_error("10-H sweep failed: " + sw.error);
    return criterion5d(sw);
  });
  part("5e", [&] {
    if (!sw.error.empty()) throw std::runtime_error("10-H sweep failed: " + sw.error);
    Report r;
    const double worst = std::max(recon_5c, sw.max_reconstruction_error);
    r.check(worst < 1e-12, "max ||U^+ diag(v) U - V||_max over every factor of every run = " + fmt(worst, 3));
    return r;
  });
  part("5f", [&] {
    if (!sw.error.empty()) throw std::runtime_error("10-H sweep failed: " + sw.error);
    return criterion5f(sw);
  });
  std::string five_summary = "property suite:";
  for (const auto& [id, p] : parts) {
    five_summary += " " + id + "=" + to_string(p.status);
    if (p.status == Status::Fail) five.status = Status::Fail;
    for (const auto& d : p.details) five.details.push_back(id + " " + d);
  }
  print("criterion 5", five_summary + " [" + fmt(seconds_since(t5), 4) + " s]", five);
  summary.emplace_back("criterion 5", five.status);

  guarded("criterion 6", [&](std::string& h) {
    h = "H2/STO-3G integral oracle";
    return criterion6();
  });
  guarded("criterion 7", needs_sweep([&](std::string& h) {
            h = "subsystem degeneracies";
            return criterion7(sw);
          }));

  std::sort(summary.begin(), summary.end());
  std::cout << "summary:";
  for (const auto& [name, st] : summary) std::cout << " " << name.substr(name.find(' ') + 1) << "=" << to_string(st);
  std::cout << "\ntotal " << fmt(seconds_since(t_start), 5) << " s\n";
  return 0;
}
