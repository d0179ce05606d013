#include "deepvqe/pauli.hpp"

#include <algorithm>
#include <sstream>

#include "deepvqe/errors.hpp"

namespace deepvqe {

PauliString PauliString::single(int qubit, PauliLetter letter) {
  if (qubit < 0 || qubit >= kMaxQubits) throw ValidationError("qubit index out of range");
  const std::uint64_t bit = std::uint64_t{1} << qubit;
  switch (letter) {
    case PauliLetter::I: return {};
    case PauliLetter::X: return {bit, 0};
    case PauliLetter::Y: return {bit, bit};
    case PauliLetter::Z: return {0, bit};
  }
  return {};
}

bool pauli_less(const PauliString& a, const PauliString& b) noexcept {
  const std::uint64_t diff = (a.x ^ b.x) | (a.z ^ b.z);
  if (diff == 0) return false;
  const int q = std::countr_zero(diff);
  return static_cast<int>(a.letter(q)) < static_cast<int>(b.letter(q));
}

cplx i_power(int k) noexcept {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

std::pair<int, PauliString> multiply_strings(const PauliString& a, const PauliString& b) noexcept {
  const PauliString r{a.x ^ b.x, a.z ^ b.z};
  const int phase = std::popcount(a.x & a.z) + std::popcount(b.x & b.z) + 2 * std::popcount(a.z & b.x) -
                    std::popcount(r.x & r.z);
  return {((phase % 4) + 4) % 4, r};
}

PauliTerm multiply(const PauliTerm& a, const PauliTerm& b) {
  if (a.n_qubits != b.n_qubits) throw ValidationError("Pauli terms act on different register sizes");
  const auto [k, p] = multiply_strings(a.ops, b.ops);
  return {a.n_qubits, p, a.coefficient * b.coefficient * i_power(k)};
}

std::string to_word(const PauliString& p) {
  if (p.is_identity()) return "I";
  std::string out;
  std::uint64_t s = p.support();
  while (s) {
    const int q = std::countr_zero(s);
    s &= s - 1;
    if (!out.empty()) out += ' ';
    out += "IXYZ"[static_cast<int>(p.letter(q))];
    out += std::to_string(q);
  }
  return out;
}

PauliString parse_word(const std::string& word, int n_qubits) {
  std::istringstream ss(word);
  std::string tok;
  PauliString p;
  while (ss >> tok) {
    if (tok == "I") continue;
    if (tok.size() < 2) throw ValidationError("malformed Pauli token '" + tok + "'");
    PauliLetter letter;
    switch (tok[0]) {
      case 'X': letter = PauliLetter::X; break;
      case 'Y': letter = PauliLetter::Y; break;
      case 'Z': letter = PauliLetter::Z; break;
      default: throw ValidationError("unknown Pauli letter in '" + tok + "'");
    }
    int q = 0;
    try {
      std::size_t used = 0;
      q = std::stoi(tok.substr(1), &used);
      if (used != tok.size() - 1) throw ValidationError("");
    } catch (const std::exception&) {
      throw ValidationError("malformed qubit index in '" + tok + "'");
    }
    if (q < 0 || q >= n_qubits) throw ValidationError("qubit index out of range in '" + tok + "'");
    const PauliString s = PauliString::single(q, letter);
    if (p.support() & s.support()) throw ValidationError("qubit repeated in Pauli word '" + word + "'");
    p.x |= s.x;
    p.z |= s.z;
  }
  return p;
}

PauliSum::PauliSum(int n_qubits) : n_(n_qubits) {
  if (n_qubits < 0 || n_qubits > kMaxQubits) throw ValidationError("register size out of range");
}

PauliSum PauliSum::identity(int n_qubits, cplx c) {
  PauliSum s(n_qubits);
  s.add({}, c);
  return s;
}

PauliSum PauliSum::from_term(const PauliTerm& t) {
  PauliSum s(t.n_qubits);
  s.add(t.ops, t.coefficient);
  return s;
}

void PauliSum::add(const PauliString& p, cplx c) { terms_[p] += c; }

cplx PauliSum::coefficient(const PauliString& p) const {
  const auto it = terms_.find(p);
  return it == terms_.end() ? cplx{} : it->second;
}

PauliSum& PauliSum::operator+=(const PauliSum& o) {
  if (o.n_ != n_) throw ValidationError("Pauli sums act on different register sizes");
  for (const auto& [p, c] : o.terms_) terms_[p] += c;
  return *this;
}

PauliSum& PauliSum::operator-=(const PauliSum& o) {
  if (o.n_ != n_) throw ValidationError("Pauli sums act on different register sizes");
  for (const auto& [p, c] : o.terms_) terms_[p] -= c;
  return *this;
}

PauliSum& PauliSum::operator*=(cplx c) {
  for (auto& kv : terms_) kv.second *= c;
  return *this;
}

PauliSum operator*(const PauliSum& a, const PauliSum& b) {
  if (a.n_ != b.n_) throw ValidationError("Pauli sums act on different register sizes");
  PauliSum r(a.n_);
  for (const auto& [pa, ca] : a.terms_)
    for (const auto& [pb, cb] : b.terms_) {
      const auto [k, p] = multiply_strings(pa, pb);
      r.terms_[p] += ca * cb * i_power(k);
    }
  return r;
}

PauliSum PauliSum::adjoint() const {
  PauliSum r(n_);
  for (const auto& [p, c] : terms_) r.terms_[p] = std::conj(c);
  return r;
}

void PauliSum::simplify(double tol) {
  std::erase_if(terms_, [tol](const auto& kv) { return std::abs(kv.second) <= tol; });
}

std::vector<PauliTerm> PauliSum::sorted_terms() const {
  std::vector<PauliTerm> out;
  out.reserve(terms_.size());
  for (const auto& [p, c] : terms_) out.push_back({n_, p, c});
  std::sort(out.begin(), out.end(), [](const PauliTerm& a, const PauliTerm& b) { return pauli_less(a.ops, b.ops); });
  return out;
}

PauliSum anticommutator(const PauliSum& a, const PauliSum& b, double tol) {
  PauliSum r = a * b + b * a;
  r.simplify(tol);
  return r;
}

PauliSum commutator(const PauliSum& a, const PauliSum& b, double tol) {
  PauliSum r = a * b - b * a;
  r.simplify(tol);
  return r;
}

}  // namespace deepvqe
