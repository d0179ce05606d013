#include "deepvqe/partition.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>

#include "deepvqe/errors.hpp"
#include "deepvqe/matrix_representation.hpp"

namespace deepvqe {

SubsystemPartition::SubsystemPartition(int n_qubits, std::vector<std::vector<int>> blocks)
    : n_qubits_(n_qubits), blocks_(std::move(blocks)) {
  if (n_qubits <= 0 || n_qubits > kMaxQubits) throw ValidationError("register size out of range");
  if (blocks_.empty()) throw ValidationError("partition needs at least one subsystem");
  assignment_.assign(n_qubits, -1);
  local_.assign(n_qubits, -1);
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    if (blocks_[i].empty()) throw ValidationError("empty subsystem block");
    std::uint64_t mask = 0;
    for (std::size_t j = 0; j < blocks_[i].size(); ++j) {
      const int q = blocks_[i][j];
      if (q < 0 || q >= n_qubits) throw ValidationError("block qubit outside the register");
      if (assignment_[q] != -1) throw ValidationError("qubit assigned to two subsystems");
      assignment_[q] = static_cast<int>(i);
      local_[q] = static_cast<int>(j);
      mask |= std::uint64_t{1} << q;
    }
    masks_.push_back(mask);
  }
  for (int q = 0; q < n_qubits; ++q)
    if (assignment_[q] == -1) throw ValidationError("qubit " + std::to_string(q) + " is not assigned");
}

SubsystemPartition SubsystemPartition::contiguous(const std::vector<int>& sizes) {
  std::vector<std::vector<int>> blocks;
  int next = 0;
  for (int s : sizes) {
    if (s <= 0) throw ValidationError("subsystem sizes must be positive");
    std::vector<int> b(s);
    for (int& q : b) q = next++;
    blocks.push_back(std::move(b));
  }
  return {next, std::move(blocks)};
}

std::vector<int> SubsystemPartition::sizes() const {
  std::vector<int> s;
  for (const auto& b : blocks_) s.push_back(static_cast<int>(b.size()));
  return s;
}

PauliString embed(const SubsystemPartition& p, int i, const PauliString& local) {
  PauliString out;
  const auto& block = p.blocks().at(i);
  if (local.support() >> block.size()) throw ValidationError("local string exceeds its block");
  for (std::size_t j = 0; j < block.size(); ++j) {
    out.x |= ((local.x >> j) & 1u) << block[j];
    out.z |= ((local.z >> j) & 1u) << block[j];
  }
  return out;
}

namespace {

bool factors_less(const std::vector<PauliString>& a, const std::vector<PauliString>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (pauli_less(a[i], b[i])) return true;
    if (pauli_less(b[i], a[i])) return false;
  }
  return false;
}

struct FactorsLess {
  bool operator()(const std::vector<PauliString>& a, const std::vector<PauliString>& b) const {
    return factors_less(a, b);
  }
};

void sort_interactions(std::vector<InteractionTerm>& v) {
  std::sort(v.begin(), v.end(), [](const InteractionTerm& a, const InteractionTerm& b) {
    const double la = std::abs(a.lambda), lb = std::abs(b.lambda);
    if (la != lb) return la > lb;
    return factors_less(a.factors, b.factors);
  });
}

}  // namespace

PartitionedHamiltonian partition(const QubitHamiltonian& h, const SubsystemPartition& p) {
  if (h.n_qubits() != p.n_qubits()) throw ValidationError("partition and Hamiltonian register sizes differ");
  const int m = p.n_subsystems();
  PartitionedHamiltonian out;
  out.partition = p;

  std::vector<std::vector<QubitTerm>> local_terms(m);
  std::map<std::vector<PauliString>, double, FactorsLess> merged;
  for (const auto& t : h.terms()) {
    if (t.ops.is_identity()) {
      out.constant += t.coefficient;
      continue;
    }
    std::vector<PauliString> factors(m);
    int touched = 0, last = -1;
    for (int i = 0; i < m; ++i) {
      if (!(t.ops.support() & p.block_mask(i))) continue;
      const PauliString part{t.ops.x & p.block_mask(i), t.ops.z & p.block_mask(i)};
      factors[i] = restrict_to(part, p.blocks()[i]);
      ++touched;
      last = i;
    }
    if (touched == 1) {
      local_terms[last].push_back({factors[last], t.coefficient});
    } else {
      merged[factors] += t.coefficient;
    }
  }
  for (int i = 0; i < m; ++i) {
    out.locals.push_back(QubitHamiltonian::from_terms(p.size(i), local_terms[i], 0.0));
  }
  for (auto& [f, c] : merged)
    if (c != 0.0) out.interactions.push_back({c, f});
  sort_interactions(out.interactions);
  return out;
}

QubitHamiltonian reassemble(const PartitionedHamiltonian& ph) {
  const auto& p = ph.partition;
  std::vector<QubitTerm> terms;
  if (ph.constant != 0.0) terms.push_back({{}, ph.constant});
  for (int i = 0; i < p.n_subsystems(); ++i)
    for (const auto& t : ph.locals[i].terms()) terms.push_back({embed(p, i, t.ops), t.coefficient});
  for (const auto& it : ph.interactions) {
    PauliString g;
    for (int i = 0; i < p.n_subsystems(); ++i) {
      const PauliString e = embed(p, i, it.factors[i]);
      g.x |= e.x;
      g.z |= e.z;
    }
    terms.push_back({g, it.lambda});
  }
  return QubitHamiltonian::from_terms(p.n_qubits(), terms, 0.0);
}

std::vector<std::vector<int>> strongest_interaction_qubits(const PartitionedHamiltonian& ph, EdgeSelection mode,
                                                           double tie_tolerance) {
  if (ph.interactions.empty()) {
    throw ValidationError("no interaction terms: the subsystems are fully decoupled");
  }
  const int m = ph.partition.n_subsystems();
  double max_abs = 0.0;
  for (const auto& it : ph.interactions) max_abs = std::max(max_abs, std::abs(it.lambda));

  std::vector<std::uint64_t> masks(m, 0);
  for (const auto& it : ph.interactions) {
    if (std::abs(it.lambda) < max_abs * (1.0 - tie_tolerance)) continue;
    for (int i = 0; i < m; ++i) masks[i] |= it.factors[i].support();
    if (mode == EdgeSelection::SingleStrongest) break;
  }
  std::vector<std::vector<int>> out(m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < ph.partition.size(i); ++j)
      if ((masks[i] >> j) & 1u) out[i].push_back(j);
  return out;
}

PartitionedHamiltonian filter_interactions(const PartitionedHamiltonian& ph, double epsilon) {
  if (epsilon < 0.0) throw ValidationError("interaction threshold must be non-negative");
  PartitionedHamiltonian out;
  out.partition = ph.partition;
  out.locals = ph.locals;
  out.constant = ph.constant;
  for (const auto& it : ph.interactions)
    if (std::abs(it.lambda) > epsilon) out.interactions.push_back(it);
  return out;
}

void write_partitioned(std::ostream& out, const PartitionedHamiltonian& ph) {
  const auto& p = ph.partition;
  out << std::setprecision(17);
  out << "# partitioned n_qubits " << p.n_qubits() << " subsystems " << p.n_subsystems() << '\n';
  out << "constant " << ph.constant << '\n';
  for (int i = 0; i < p.n_subsystems(); ++i) {
    out << "block " << i << " terms " << ph.locals[i].size() << " qubits";
    for (int q : p.blocks()[i]) out << ' ' << q;
    out << '\n';
    for (const auto& t : ph.locals[i].terms()) out << t.coefficient << ' ' << to_word(t.ops) << '\n';
  }
  out << "interactions " << ph.interactions.size() << '\n';
  for (const auto& it : ph.interactions) {
    out << it.lambda;
    for (const auto& f : it.factors) out << " | " << to_word(f);
    out << '\n';
  }
}

namespace {

double parse_number(const std::string& s, std::size_t line) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw ParseError("non-numeric value '" + s + "'", line);
  return v;
}

}  // namespace

PartitionedHamiltonian read_partitioned(std::istream& in) {
  std::string line, tok;
  std::size_t line_no = 0;
  auto next_line = [&]() {
    if (!std::getline(in, line)) throw ParseError("unexpected end of partition file", line_no + 1);
    ++line_no;
    return std::istringstream(line);
  };

  int n_qubits = 0, m = 0;
  {
    auto ss = next_line();
    std::string hash, kind, k1, k2;
    if (!(ss >> hash >> kind >> k1 >> n_qubits >> k2 >> m) || kind != "partitioned") {
      throw ParseError("malformed partition header", line_no);
    }
  }
  double constant = 0.0;
  {
    auto ss = next_line();
    ss >> tok;
    std::string v;
    if (tok != "constant" || !(ss >> v)) throw ParseError("expected constant line", line_no);
    constant = parse_number(v, line_no);
  }
  std::vector<std::vector<int>> blocks(m);
  std::vector<std::vector<QubitTerm>> locals(m);
  for (int i = 0; i < m; ++i) {
    auto ss = next_line();
    std::string kw, kw2, kw3;
    int idx = -1;
    std::size_t count = 0;
    if (!(ss >> kw >> idx >> kw2 >> count >> kw3) || kw != "block" || idx != i) {
      throw ParseError("malformed block header", line_no);
    }
    int q;
    while (ss >> q) blocks[i].push_back(q);
    for (std::size_t t = 0; t < count; ++t) {
      auto ts = next_line();
      std::string c, word;
      ts >> c;
      std::getline(ts, word);
      try {
        locals[i].push_back({parse_word(word, static_cast<int>(blocks[i].size())), parse_number(c, line_no)});
      } catch (const ParseError&) {
        throw;
      } catch (const ValidationError& e) {
        throw ParseError(e.what(), line_no);
      }
    }
  }
  PartitionedHamiltonian ph;
  try {
    ph.partition = SubsystemPartition(n_qubits, blocks);
  } catch (const ValidationError& e) {
    throw ParseError(e.what(), line_no);
  }
  ph.constant = constant;
  for (int i = 0; i < m; ++i) ph.locals.push_back(QubitHamiltonian::from_terms(ph.partition.size(i), locals[i], 0.0));

  auto ss = next_line();
  std::size_t count = 0;
  if (!(ss >> tok >> count) || tok != "interactions") throw ParseError("expected interactions header", line_no);
  for (std::size_t t = 0; t < count; ++t) {
    next_line();
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const auto bar = line.find('|', start);
      fields.push_back(line.substr(start, bar == std::string::npos ? std::string::npos : bar - start));
      if (bar == std::string::npos) break;
      start = bar + 1;
    }
    if (static_cast<int>(fields.size()) != m + 1) throw ParseError("interaction row has wrong factor count", line_no);
    InteractionTerm it;
    std::istringstream cs(fields[0]);
    std::string c;
    cs >> c;
    it.lambda = parse_number(c, line_no);
    for (int i = 0; i < m; ++i) {
      try {
        it.factors.push_back(parse_word(fields[i + 1], ph.partition.size(i)));
      } catch (const ValidationError& e) {
        throw ParseError(e.what(), line_no);
      }
    }
    ph.interactions.push_back(std::move(it));
  }
  sort_interactions(ph.interactions);
  return ph;
}

}  // namespace deepvqe
