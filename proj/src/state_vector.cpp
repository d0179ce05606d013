#include "deepvqe/state_vector.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "deepvqe/errors.hpp"

namespace deepvqe {

static_assert(std::endian::native == std::endian::little, "binary state format assumes a little-endian host");

StateVector::StateVector(int n, Eigen::VectorXcd amps) : n_qubits(n), amplitudes(std::move(amps)) {
  if (n < 0 || n > 40) throw ValidationError("state register size out of range");
  if (amplitudes.size() != (Eigen::Index{1} << n)) throw ValidationError("state length is not 2^n_qubits");
}

StateVector StateVector::basis_state(int n, std::uint64_t index) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(Eigen::Index{1} << n);
  if (index >= static_cast<std::uint64_t>(v.size())) throw ValidationError("basis index out of range");
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return {n, std::move(v)};
}

void StateVector::check_normalized(double tol) const {
  if (std::abs(norm() - 1.0) > tol) throw ValidationError("state vector is not normalized");
}

void apply_pauli_add(const PauliString& p, cplx c, const Eigen::VectorXcd& in, Eigen::VectorXcd& out) {
  const cplx base = c * i_power(p.y_count());
  const std::uint64_t dim = static_cast<std::uint64_t>(in.size());
  for (std::uint64_t b = 0; b < dim; ++b) {
    const cplx amp = in[static_cast<Eigen::Index>(b)];
    if (amp == cplx{}) continue;
    const cplx v = (std::popcount(p.z & b) & 1) ? -base : base;
    out[static_cast<Eigen::Index>(b ^ p.x)] += v * amp;
  }
}

Eigen::VectorXcd apply(const PauliString& p, const Eigen::VectorXcd& v) {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(v.size());
  apply_pauli_add(p, 1.0, v, out);
  return out;
}

Eigen::VectorXcd apply(const QubitHamiltonian& h, const Eigen::VectorXcd& v) {
  if (v.size() != (Eigen::Index{1} << h.n_qubits())) throw ValidationError("vector length does not match register");
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(v.size());
  for (const auto& t : h.terms()) apply_pauli_add(t.ops, t.coefficient, v, out);
  return out;
}

Eigen::VectorXcd apply(const PauliSum& h, const Eigen::VectorXcd& v) {
  if (v.size() != (Eigen::Index{1} << h.n_qubits())) throw ValidationError("vector length does not match register");
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(v.size());
  for (const auto& t : h.sorted_terms()) apply_pauli_add(t.ops, t.coefficient, v, out);
  return out;
}

double expectation(const QubitHamiltonian& h, const Eigen::VectorXcd& v) {
  return v.dot(apply(h, v)).real();
}

void write_state(std::ostream& out, const StateVector& s) {
  const std::int32_t n = s.n_qubits;
  out.write(reinterpret_cast<const char*>(&n), sizeof n);
  for (Eigen::Index i = 0; i < s.amplitudes.size(); ++i) {
    const double re = s.amplitudes[i].real(), im = s.amplitudes[i].imag();
    out.write(reinterpret_cast<const char*>(&re), sizeof re);
    out.write(reinterpret_cast<const char*>(&im), sizeof im);
  }
}

StateVector read_state(std::istream& in) {
  std::int32_t n = 0;
  if (!in.read(reinterpret_cast<char*>(&n), sizeof n)) throw ValidationError("truncated state file");
  if (n < 0 || n > 40) throw ValidationError("state file has invalid register size");
  Eigen::VectorXcd v(Eigen::Index{1} << n);
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    double re = 0.0, im = 0.0;
    if (!in.read(reinterpret_cast<char*>(&re), sizeof re) || !in.read(reinterpret_cast<char*>(&im), sizeof im)) {
      throw ValidationError("truncated state file");
    }
    v[i] = {re, im};
  }
  return {n, std::move(v)};
}

void write_state(const std::filesystem::path& path, const StateVector& s) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  write_state(out, s);
}

StateVector read_state(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  return read_state(in);
}

}  // namespace deepvqe
