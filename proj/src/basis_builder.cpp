#include "deepvqe/basis_builder.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <unordered_set>

#include "deepvqe/errors.hpp"

namespace deepvqe {

namespace {

struct KindName {
  BasisKind kind;
  const char* name;
};

constexpr KindName kKindNames[] = {
    {BasisKind::Interactions, "Interactions"},
    {BasisKind::InteractionsExcited, "InteractionsExcited"},
    {BasisKind::InteractionsFixQubits, "InteractionsFixQubits"},
    {BasisKind::SinglePauli, "SinglePauli"},
    {BasisKind::SinglePauliExcited, "SinglePauliExcited"},
    {BasisKind::SinglePauliEdge, "SinglePauliEdge"},
    {BasisKind::ParticleConserving, "ParticleConserving"},
    {BasisKind::ParticleConservingEdge, "ParticleConservingEdge"},
};

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

}  // namespace

std::string to_string(BasisKind k) {
  for (const auto& kn : kKindNames)
    if (kn.kind == k) return kn.name;
  return "?";
}

BasisKind parse_basis_kind(const std::string& s) {
  std::string key;
  for (char c : s)
    if (c != '_' && c != '-' && c != ' ') key += c;
  key = lower(key);
  for (const auto& kn : kKindNames)
    if (lower(kn.name) == key) return kn.kind;
  throw ValidationError("unknown basis strategy '" + s + "'");
}

bool is_interaction_kind(BasisKind k) {
  return k == BasisKind::Interactions || k == BasisKind::InteractionsExcited || k == BasisKind::InteractionsFixQubits;
}

bool is_edge_kind(BasisKind k) { return k == BasisKind::SinglePauliEdge || k == BasisKind::ParticleConservingEdge; }

void BasisStrategy::validate(int n_subsystems) const {
  if (static_cast<int>(start_counts.size()) != n_subsystems) {
    throw ValidationError("start counts list " + std::to_string(start_counts.size()) + " entries for " +
                          std::to_string(n_subsystems) + " subsystems");
  }
  for (int l : start_counts)
    if (l < 1) throw ValidationError("start counts must be positive");
  const bool fixed = kind == BasisKind::InteractionsFixQubits;
  const bool thresholded = is_interaction_kind(kind) && !fixed;
  if (thresholded && !epsilon) throw ValidationError(to_string(kind) + " requires an interaction threshold");
  if (!is_interaction_kind(kind) && epsilon) throw ValidationError(to_string(kind) + " takes no interaction threshold");
  if (epsilon && *epsilon < 0.0) throw ValidationError("interaction threshold must be non-negative");
  const bool has_budget = total_qubit_budget.has_value() || !qubit_budgets.empty();
  if (fixed && !has_budget) throw ValidationError("InteractionsFixQubits requires a qubit budget");
  if (!fixed && has_budget) throw ValidationError(to_string(kind) + " takes no qubit budget");
  if (fixed && epsilon) throw ValidationError("InteractionsFixQubits derives its threshold from the budget");
  if (!qubit_budgets.empty() && static_cast<int>(qubit_budgets.size()) != n_subsystems) {
    throw ValidationError("per-subsystem qubit budgets do not match the subsystem count");
  }
  if (gs_tolerance <= 0.0) throw ValidationError("Gram-Schmidt tolerance must be positive");
}

std::string BasisStrategy::label() const {
  std::string s = to_string(kind) + "(";
  const bool digits = std::all_of(start_counts.begin(), start_counts.end(), [](int l) { return l < 10; });
  for (std::size_t i = 0; i < start_counts.size(); ++i) {
    if (!digits && i) s += ',';
    s += std::to_string(start_counts[i]);
  }
  return s + ")";
}

int qubits_for_dimension(int k) {
  if (k < 1) throw ValidationError("basis dimension must be positive");
  return k == 1 ? 0 : std::bit_width(static_cast<unsigned>(k - 1));
}

int SubsystemBasis::qubits_needed() const noexcept { return qubits_for_dimension(std::max(1, dimension())); }

bool SubsystemBasis::is_real(double tol) const {
  return vectors.size() == 0 || vectors.imag().cwiseAbs().maxCoeff() <= tol;
}

Eigen::VectorXcd apply(const LocalOperator& op, const Eigen::VectorXcd& v) {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(v.size());
  const std::uint64_t dim = static_cast<std::uint64_t>(v.size());
  switch (op.type) {
    case LocalOperator::Type::Pauli:
      apply_pauli_add(op.pauli, 1.0, v, out);
      break;
    case LocalOperator::Type::Annihilate:
    case LocalOperator::Type::Create: {
      const std::uint64_t bit = std::uint64_t{1} << op.s;
      const bool create = op.type == LocalOperator::Type::Create;
      for (std::uint64_t b = 0; b < dim; ++b) {
        if (((b & bit) != 0) == create) continue;
        const double sign = (std::popcount(b & (bit - 1)) & 1) ? -1.0 : 1.0;
        out[static_cast<Eigen::Index>(b ^ bit)] += sign * v[static_cast<Eigen::Index>(b)];
      }
      break;
    }
    case LocalOperator::Type::Swap:
      for (std::uint64_t b = 0; b < dim; ++b) {
        const std::uint64_t bs = (b >> op.s) & 1u, bt = (b >> op.t) & 1u;
        const std::uint64_t c = (b & ~((std::uint64_t{1} << op.s) | (std::uint64_t{1} << op.t))) | (bt << op.s) |
                                (bs << op.t);
        out[static_cast<Eigen::Index>(c)] += v[static_cast<Eigen::Index>(b)];
      }
      break;
  }
  return out;
}

namespace {

// Incremental modified Gram-Schmidt with one reorthogonalization pass.
class GramSchmidt {
 public:
  GramSchmidt(Eigen::Index dim, double tol) : dim_(dim), tol_(tol) {}

  // Residual of `v` against the accepted span, without accepting it.
  Eigen::VectorXcd residual(Eigen::VectorXcd v) const {
    fix_phase(v);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& a : basis_) v -= a.dot(v) * a;
    return v;
  }

  // Returns the residual norm; accepts when above tolerance.
  double add(const Eigen::VectorXcd& v) {
    Eigen::VectorXcd r = residual(v);
    const double nr = r.norm();
    if (nr >= tol_) basis_.push_back(r / nr);
    return nr;
  }

  std::size_t size() const { return basis_.size(); }
  Eigen::MatrixXcd matrix() const {
    Eigen::MatrixXcd m(dim_, static_cast<Eigen::Index>(basis_.size()));
    for (std::size_t j = 0; j < basis_.size(); ++j) m.col(static_cast<Eigen::Index>(j)) = basis_[j];
    return m;
  }
  const std::vector<Eigen::VectorXcd>& vectors() const { return basis_; }
  void truncate(std::size_t n) { basis_.resize(n); }

 private:
  Eigen::Index dim_;
  double tol_;
  std::vector<Eigen::VectorXcd> basis_;
};

void check_starts(const std::vector<StartingState>& starts, int n_qubits) {
  if (starts.empty()) throw ValidationError("at least one starting vector is required");
  for (const auto& s : starts)
    if (s.state.n_qubits != n_qubits) throw ValidationError("starting vector does not match the subsystem size");
}

}  // namespace

GramSchmidtResult gram_schmidt(const std::vector<Eigen::VectorXcd>& candidates, double tolerance) {
  GramSchmidtResult r;
  const Eigen::Index dim = candidates.empty() ? 0 : candidates.front().size();
  GramSchmidt gs(dim, tolerance);
  for (const auto& c : candidates) {
    if (c.size() != dim) throw ValidationError("candidate vectors differ in length");
    const std::size_t before = gs.size();
    r.residuals.push_back(gs.add(c));
    r.kept.push_back(gs.size() > before);
  }
  r.basis = gs.matrix();
  return r;
}

std::vector<std::vector<int>> edge_sets(const BasisStrategy& strategy, const PartitionedHamiltonian& ph) {
  return strongest_interaction_qubits(ph, strategy.edge_selection, strategy.edge_tie_tolerance);
}

std::vector<LocalOperator> interaction_operators(const PartitionedHamiltonian& ph, int i, double epsilon) {
  std::vector<LocalOperator> ops;
  std::unordered_set<PauliString, PauliStringHash> seen;
  for (const auto& it : ph.interactions) {
    if (!(std::abs(it.lambda) > epsilon)) continue;
    const PauliString& f = it.factors.at(i);
    if (f.is_identity() || !seen.insert(f).second) continue;
    LocalOperator op;
    op.type = LocalOperator::Type::Pauli;
    op.pauli = f;
    op.weight = std::abs(it.lambda);
    op.label = "V[" + to_word(f) + "]";
    ops.push_back(std::move(op));
  }
  return ops;
}

std::vector<LocalOperator> excitation_operators(const BasisStrategy& st, const PartitionedHamiltonian& ph, int i,
                                                const std::vector<std::vector<int>>& edges) {
  const int n = ph.partition.size(i);
  std::vector<int> sites;
  if (is_edge_kind(st.kind)) {
    sites = edges.at(i);
  } else {
    for (int s = 0; s < n; ++s) sites.push_back(s);
  }

  std::vector<LocalOperator> ops;
  switch (st.kind) {
    case BasisKind::Interactions:
    case BasisKind::InteractionsExcited:
      return interaction_operators(ph, i, st.epsilon.value_or(0.0));
    case BasisKind::InteractionsFixQubits:
      return interaction_operators(ph, i, 0.0);
    case BasisKind::SinglePauli:
    case BasisKind::SinglePauliExcited:
    case BasisKind::SinglePauliEdge:
      for (int s : sites)
        for (PauliLetter l : {PauliLetter::X, PauliLetter::Y, PauliLetter::Z}) {
          LocalOperator op;
          op.pauli = PauliString::single(s, l);
          op.label = to_word(op.pauli);
          ops.push_back(std::move(op));
        }
      return ops;
    case BasisKind::ParticleConserving:
    case BasisKind::ParticleConservingEdge:
      for (std::size_t a = 0; a < sites.size(); ++a)
        for (std::size_t b = a + 1; b < sites.size(); ++b) {
          LocalOperator op;
          op.type = LocalOperator::Type::Swap;
          op.s = sites[a];
          op.t = sites[b];
          op.label = "SWAP" + std::to_string(op.s) + "," + std::to_string(op.t);
          ops.push_back(std::move(op));
        }
      for (int s : sites) {
        LocalOperator op;
        op.type = LocalOperator::Type::Annihilate;
        op.s = s;
        op.label = "a" + std::to_string(s);
        ops.push_back(std::move(op));
      }
      for (int s : sites) {
        LocalOperator op;
        op.type = LocalOperator::Type::Create;
        op.s = s;
        op.label = "a+" + std::to_string(s);
        ops.push_back(std::move(op));
      }
      return ops;
  }
  return ops;
}

SubsystemBasis build_basis(const BasisStrategy& st, const std::vector<StartingState>& starts,
                           const PartitionedHamiltonian& ph, int i, const std::vector<std::vector<int>>& edges) {
  if (st.kind == BasisKind::InteractionsFixQubits) {
    throw ValidationError("InteractionsFixQubits bases are built with build_basis_fixed_qubits");
  }
  const int n = ph.partition.size(i);
  check_starts(starts, n);
  const auto ops = excitation_operators(st, ph, i, edges);

  SubsystemBasis basis;
  basis.subsystem = i;
  basis.n_qubits = n;
  basis.operator_count = static_cast<int>(ops.size());
  GramSchmidt gs(Eigen::Index{1} << n, st.gs_tolerance);
  auto add = [&](const Eigen::VectorXcd& v, const std::string& op, const std::string& start) {
    const std::size_t before = gs.size();
    const double r = gs.add(v);
    basis.provenance.push_back({op, start, gs.size() > before, r});
  };
  for (const auto& s : starts) add(s.state.amplitudes, "start", s.label);
  for (const auto& s : starts)
    for (const auto& op : ops) add(apply(op, s.state.amplitudes), op.label, s.label);
  basis.vectors = gs.matrix();
  return basis;
}

SubsystemBasis build_basis_fixed_qubits(const std::vector<StartingState>& starts, const PartitionedHamiltonian& ph,
                                        int i, int m, double gs_tolerance) {
  const int n = ph.partition.size(i);
  check_starts(starts, n);
  if (m < 0 || m > n) throw ValidationError("qubit budget outside [0, subsystem size]");
  const std::size_t cap = std::size_t{1} << m;
  if (cap < starts.size()) throw ValidationError("qubit budget cannot hold the starting vectors");

  SubsystemBasis basis;
  basis.subsystem = i;
  basis.n_qubits = n;
  GramSchmidt gs(Eigen::Index{1} << n, gs_tolerance);
  for (const auto& s : starts) {
    const std::size_t before = gs.size();
    const double r = gs.add(s.state.amplitudes);
    basis.provenance.push_back({"start", s.label, gs.size() > before, r});
  }
  if (gs.size() > cap) throw ValidationError("qubit budget cannot hold the starting vectors");

  basis.epsilon_adapt = 0.0;
  const auto ops = interaction_operators(ph, i, 0.0);
  for (const auto& op : ops) {
    const std::size_t before = gs.size();
    std::vector<ProvenanceEntry> entries;
    for (const auto& s : starts) {
      const std::size_t k = gs.size();
      const double r = gs.add(apply(op, s.state.amplitudes));
      entries.push_back({op.label, s.label, gs.size() > k, r});
    }
    if (gs.size() > cap) {
      gs.truncate(before);
      for (auto& e : entries) e.kept = false;
      basis.provenance.insert(basis.provenance.end(), entries.begin(), entries.end());
      basis.epsilon_adapt = op.weight;
      break;
    }
    ++basis.operator_count;
    basis.provenance.insert(basis.provenance.end(), entries.begin(), entries.end());
  }
  basis.vectors = gs.matrix();
  return basis;
}

std::vector<int> distribute_qubit_budget(int total, const std::vector<int>& caps, const std::vector<int>& minimums) {
  if (caps.size() != minimums.size()) throw ValidationError("budget caps and minimums differ in length");
  std::vector<int> m = minimums;
  int used = 0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] > caps[i]) throw ValidationError("subsystem minimum exceeds its qubit count");
    used += m[i];
  }
  if (used > total) throw ValidationError("qubit budget is smaller than the starting vectors require");
  while (used < total) {
    int best = -1;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] >= caps[i]) continue;
      if (best < 0 || m[i] < m[best]) best = static_cast<int>(i);
    }
    if (best < 0) break;  // every subsystem already holds its full register
    ++m[best];
    ++used;
  }
  return m;
}

void write_provenance(std::ostream& out, const SubsystemBasis& basis) {
  out << "# subsystem " << basis.subsystem << " n_qubits " << basis.n_qubits << " K " << basis.dimension()
      << " m " << basis.qubits_needed();
  if (basis.epsilon_adapt) out << " epsilon_adapt " << std::setprecision(17) << *basis.epsilon_adapt;
  out << '\n' << "# operator start kept residual\n";
  out << std::setprecision(6) << std::scientific;
  for (const auto& e : basis.provenance) {
    out << e.operator_label << '\t' << e.start_label << '\t' << (e.kept ? "kept" : "discarded") << '\t' << e.residual
        << '\n';
  }
}

void write_basis_vectors(const std::filesystem::path& path, const SubsystemBasis& basis) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  for (int k = 0; k < basis.dimension(); ++k) write_state(out, StateVector(basis.n_qubits, basis.vectors.col(k)));
}

}  // namespace deepvqe
