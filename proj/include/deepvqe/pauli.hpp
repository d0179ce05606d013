#pragma once

#include <bit>
#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace deepvqe {

using cplx = std::complex<double>;

/// Largest register a bit-packed Pauli string can address.
inline constexpr int kMaxQubits = 64;

enum class PauliLetter : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

/// Bit-packed Pauli string in symplectic form. The operator represented is
///   P = i^{|x & z|} X^x Z^z,
/// so qubit q carries I/X/Y/Z for (x_q, z_q) = (0,0)/(1,0)/(1,1)/(0,1).
struct PauliString {
  std::uint64_t x = 0;
  std::uint64_t z = 0;

  static PauliString single(int qubit, PauliLetter letter);

  PauliLetter letter(int qubit) const noexcept {
    const int xb = (x >> qubit) & 1u, zb = (z >> qubit) & 1u;
    return xb ? (zb ? PauliLetter::Y : PauliLetter::X) : (zb ? PauliLetter::Z : PauliLetter::I);
  }
  std::uint64_t support() const noexcept { return x | z; }
  int weight() const noexcept { return std::popcount(support()); }
  bool is_identity() const noexcept { return (x | z) == 0; }
  int y_count() const noexcept { return std::popcount(x & z); }

  friend bool operator==(const PauliString&, const PauliString&) = default;
};

/// Lexicographic order over letters, qubit 0 first, with I < X < Y < Z.
bool pauli_less(const PauliString& a, const PauliString& b) noexcept;

struct PauliStringHash {
  std::size_t operator()(const PauliString& p) const noexcept {
    std::uint64_t h = p.x * 0x9E3779B97F4A7C15ull;
    h ^= p.z + 0x7F4A7C159E3779B9ull + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

/// Product a*b = i^phase * (result string). Phase is returned modulo 4.
std::pair<int, PauliString> multiply_strings(const PauliString& a, const PauliString& b) noexcept;

/// i^k for k modulo 4.
cplx i_power(int k) noexcept;

/// Whether two strings commute.
inline bool commutes(const PauliString& a, const PauliString& b) noexcept {
  return (std::popcount(a.x & b.z) + std::popcount(a.z & b.x)) % 2 == 0;
}

/// Pauli string with a complex coefficient on a fixed register size.
struct PauliTerm {
  int n_qubits = 0;
  PauliString ops;
  cplx coefficient{1.0, 0.0};

  std::uint64_t x_mask() const noexcept { return ops.x; }
  std::uint64_t z_mask() const noexcept { return ops.z; }
};

/// Throws ValidationError on mismatched register sizes.
PauliTerm multiply(const PauliTerm& a, const PauliTerm& b);

/// Word such as "X0 Z3 Y5"; "I" for the identity.
std::string to_word(const PauliString& p);
/// Inverse of to_word. Qubits must be below n_qubits; throws ValidationError.
PauliString parse_word(const std::string& word, int n_qubits);

/// Mutable sum of Pauli strings with complex coefficients, used while
/// building operators. Terms are merged by string.
class PauliSum {
 public:
  explicit PauliSum(int n_qubits = 0);

  static PauliSum identity(int n_qubits, cplx c = 1.0);
  static PauliSum from_term(const PauliTerm& t);

  int n_qubits() const noexcept { return n_; }
  std::size_t size() const noexcept { return terms_.size(); }
  const std::unordered_map<PauliString, cplx, PauliStringHash>& terms() const noexcept { return terms_; }

  void add(const PauliString& p, cplx c);
  cplx coefficient(const PauliString& p) const;

  PauliSum& operator+=(const PauliSum& o);
  PauliSum& operator-=(const PauliSum& o);
  PauliSum& operator*=(cplx c);
  friend PauliSum operator+(PauliSum a, const PauliSum& b) { return a += b; }
  friend PauliSum operator-(PauliSum a, const PauliSum& b) { return a -= b; }
  friend PauliSum operator*(PauliSum a, cplx c) { return a *= c; }
  friend PauliSum operator*(const PauliSum& a, const PauliSum& b);

  PauliSum adjoint() const;
  /// Removes terms with |c| <= tol.
  void simplify(double tol = 1e-12);
  /// Terms sorted by pauli_less, for deterministic iteration.
  std::vector<PauliTerm> sorted_terms() const;

 private:
  int n_;
  std::unordered_map<PauliString, cplx, PauliStringHash> terms_;
};

/// a*b + b*a and a*b - b*a, simplified with the given tolerance.
PauliSum anticommutator(const PauliSum& a, const PauliSum& b, double tol = 0.0);
PauliSum commutator(const PauliSum& a, const PauliSum& b, double tol = 0.0);

}  // namespace deepvqe
