#include "deepvqe/qubit_hamiltonian.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <unordered_map>

#include "deepvqe/errors.hpp"

namespace deepvqe {

QubitHamiltonian::QubitHamiltonian(int n_qubits) : n_(n_qubits) {
  if (n_qubits < 0 || n_qubits > kMaxQubits) throw ValidationError("register size out of range");
}

QubitHamiltonian QubitHamiltonian::from_sum(const PauliSum& sum, double drop_tol) {
  std::vector<QubitTerm> terms;
  terms.reserve(sum.size());
  for (const auto& [p, c] : sum.terms()) {
    if (std::abs(c.imag()) > 1e-12) {
      throw NumericalError("operator is not Hermitian: term " + to_word(p) + " has imaginary coefficient");
    }
    terms.push_back({p, c.real()});
  }
  return from_terms(sum.n_qubits(), terms, drop_tol);
}

QubitHamiltonian QubitHamiltonian::from_terms(int n_qubits, const std::vector<QubitTerm>& terms, double drop_tol) {
  QubitHamiltonian h(n_qubits);
  const std::uint64_t allowed = n_qubits == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n_qubits) - 1;
  std::unordered_map<PauliString, double, PauliStringHash> merged;
  for (const auto& t : terms) {
    if (t.ops.support() & ~allowed) throw ValidationError("term acts outside the register");
    merged[t.ops] += t.coefficient;
  }
  for (const auto& [p, c] : merged)
    if (std::abs(c) > drop_tol) h.terms_.push_back({p, c});
  std::sort(h.terms_.begin(), h.terms_.end(),
            [](const QubitTerm& a, const QubitTerm& b) { return pauli_less(a.ops, b.ops); });
  return h;
}

double QubitHamiltonian::constant() const {
  // The identity is the smallest string under pauli_less.
  return !terms_.empty() && terms_.front().ops.is_identity() ? terms_.front().coefficient : 0.0;
}

PauliSum QubitHamiltonian::to_sum() const {
  PauliSum s(n_);
  for (const auto& t : terms_) s.add(t.ops, t.coefficient);
  return s;
}

void write_qubit_hamiltonian(std::ostream& out, const QubitHamiltonian& h) {
  out << "# n_qubits " << h.n_qubits() << '\n';
  out << std::setprecision(17);
  for (const auto& t : h.terms()) out << t.coefficient << ' ' << to_word(t.ops) << '\n';
}

QubitHamiltonian read_qubit_hamiltonian(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  int n = -1;
  std::vector<QubitTerm> terms;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (line[line.find_first_not_of(" \t")] == '#') {
      std::istringstream ss(line);
      std::string hash, key;
      ss >> hash >> key;
      if (key == "n_qubits" && !(ss >> n)) throw ParseError("malformed n_qubits header", line_no);
      continue;
    }
    if (n < 0) throw ParseError("missing '# n_qubits' header", line_no);
    std::istringstream ss(line);
    std::string coeff;
    ss >> coeff;
    double c = 0.0;
    auto [ptr, ec] = std::from_chars(coeff.data(), coeff.data() + coeff.size(), c);
    if (ec != std::errc() || ptr != coeff.data() + coeff.size()) throw ParseError("non-numeric coefficient", line_no);
    std::string word;
    std::getline(ss, word);
    try {
      terms.push_back({parse_word(word, n), c});
    } catch (const ValidationError& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  if (n < 0) throw ParseError("missing '# n_qubits' header", line_no);
  return QubitHamiltonian::from_terms(n, terms, 0.0);
}

void write_qubit_hamiltonian(const std::filesystem::path& path, const QubitHamiltonian& h) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path.string());
  write_qubit_hamiltonian(out, h);
}

QubitHamiltonian read_qubit_hamiltonian(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  return read_qubit_hamiltonian(in);
}

}  // namespace deepvqe
