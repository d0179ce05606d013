#include "deepvqe/jordan_wigner.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "deepvqe/errors.hpp"

namespace deepvqe {

SpinOrbitalOrdering::SpinOrbitalOrdering(int n_spatial, std::vector<int> qubit_of)
    : n_spatial_(n_spatial), qubit_of_(std::move(qubit_of)) {
  const int n = 2 * n_spatial;
  if (n_spatial < 0 || n > kMaxQubits) throw ValidationError("spin-orbital count out of range");
  if (static_cast<int>(qubit_of_.size()) != n) throw ValidationError("ordering has the wrong length");
  orbital_of_.assign(n, -1);
  for (int so = 0; so < n; ++so) {
    const int q = qubit_of_[so];
    if (q < 0 || q >= n || orbital_of_[q] != -1) throw ValidationError("spin-orbital ordering is not a bijection");
    orbital_of_[q] = so;
  }
}

SpinOrbitalOrdering SpinOrbitalOrdering::interleaved(int n_spatial) {
  std::vector<int> q(2 * n_spatial);
  for (int i = 0; i < 2 * n_spatial; ++i) q[i] = i;
  return {n_spatial, std::move(q)};
}

SpinOrbitalOrdering SpinOrbitalOrdering::grouped(int n_spatial, const std::vector<std::vector<int>>& groups) {
  std::vector<int> q(2 * n_spatial, -1);
  int next = 0;
  for (const auto& g : groups)
    for (int p : g) {
      if (p < 0 || p >= n_spatial || q[2 * p] != -1) throw ValidationError("orbital groups must partition the orbitals");
      q[2 * p] = next++;
      q[2 * p + 1] = next++;
    }
  if (next != 2 * n_spatial) throw ValidationError("orbital groups must partition the orbitals");
  return {n_spatial, std::move(q)};
}

std::uint64_t SpinOrbitalOrdering::spin_mask(int spin) const {
  std::uint64_t m = 0;
  for (int p = 0; p < n_spatial_; ++p) m |= std::uint64_t{1} << qubit(p, spin);
  return m;
}

std::string SpinOrbitalOrdering::describe() const {
  std::ostringstream ss;
  for (int q = 0; q < n_qubits(); ++q) {
    if (q) ss << ' ';
    ss << 'q' << q << '=' << spatial_of(q) << (spin_of(q) ? 'b' : 'a');
  }
  return ss.str();
}

namespace {

// a_q = Z_{<q} (X_q + i Y_q)/2 ; a_q^dagger = Z_{<q} (X_q - i Y_q)/2.
struct Ladder {
  std::array<PauliString, 2> ops;
  std::array<cplx, 2> coeff;
};

Ladder ladder(int qubit, bool creation) {
  const std::uint64_t bit = std::uint64_t{1} << qubit;
  const std::uint64_t string = bit - 1;
  return {{PauliString{bit, string}, PauliString{bit, string | bit}},
          {cplx{0.5, 0.0}, cplx{0.0, creation ? -0.5 : 0.5}}};
}

PauliSum to_sum(const Ladder& l, int n) {
  PauliSum s(n);
  for (int k = 0; k < 2; ++k) s.add(l.ops[k], l.coeff[k]);
  return s;
}

}  // namespace

PauliSum jw_annihilation(int qubit, int n_qubits) {
  if (qubit < 0 || qubit >= n_qubits) throw ValidationError("qubit index out of range");
  return to_sum(ladder(qubit, false), n_qubits);
}

PauliSum jw_creation(int qubit, int n_qubits) {
  if (qubit < 0 || qubit >= n_qubits) throw ValidationError("qubit index out of range");
  return to_sum(ladder(qubit, true), n_qubits);
}

PauliSum number_operator(int n_qubits, std::uint64_t mask) {
  PauliSum s(n_qubits);
  for (int q = 0; q < n_qubits; ++q)
    if ((mask >> q) & 1u) {
      s.add({}, 0.5);
      s.add(PauliString::single(q, PauliLetter::Z), -0.5);
    }
  return s;
}

PauliSum sz_operator(const SpinOrbitalOrdering& ordering) {
  const int n = ordering.n_qubits();
  PauliSum s = number_operator(n, ordering.spin_mask(0)) - number_operator(n, ordering.spin_mask(1));
  s *= 0.5;
  s.simplify(0.0);
  return s;
}

QubitHamiltonian jordan_wigner(const IntegralSet& ints, const SpinOrbitalOrdering& ord, double drop_tol) {
  const int n = ints.n_spatial();
  if (ord.n_spatial() != n) throw ValidationError("ordering and integrals disagree on the orbital count");
  const int nq = ord.n_qubits();

  std::vector<Ladder> cre(nq), ann(nq);
  for (int q = 0; q < nq; ++q) {
    cre[q] = ladder(q, true);
    ann[q] = ladder(q, false);
  }

  std::unordered_map<PauliString, cplx, PauliStringHash> acc;
  acc[{}] += ints.e_nuc;

  for (int p = 0; p < n; ++p)
    for (int r = 0; r < n; ++r) {
      const double v = ints.h1(p, r);
      if (v == 0.0) continue;
      for (int s = 0; s < 2; ++s) {
        const Ladder& a = cre[ord.qubit(p, s)];
        const Ladder& b = ann[ord.qubit(r, s)];
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) {
            const auto [k, str] = multiply_strings(a.ops[i], b.ops[j]);
            acc[str] += v * a.coeff[i] * b.coeff[j] * i_power(k);
          }
      }
    }

  // 1/2 <pq|rs> a+_{p s} a+_{q t} a_{s' t} a_{r s} with s' the orbital index s.
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) {
          const double v = 0.5 * ints.h2(p, q, r, s);
          if (v == 0.0) continue;
          for (int sg = 0; sg < 2; ++sg)
            for (int tau = 0; tau < 2; ++tau) {
              const int qp = ord.qubit(p, sg), qq = ord.qubit(q, tau);
              const int qs = ord.qubit(s, tau), qr = ord.qubit(r, sg);
              if (qp == qq || qr == qs) continue;
              const Ladder& l0 = cre[qp];
              const Ladder& l1 = cre[qq];
              const Ladder& l2 = ann[qs];
              const Ladder& l3 = ann[qr];
              for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) {
                  const auto [k01, s01] = multiply_strings(l0.ops[i], l1.ops[j]);
                  const cplx c01 = l0.coeff[i] * l1.coeff[j] * i_power(k01);
                  for (int k = 0; k < 2; ++k) {
                    const auto [k012, s012] = multiply_strings(s01, l2.ops[k]);
                    const cplx c012 = c01 * l2.coeff[k] * i_power(k012);
                    for (int l = 0; l < 2; ++l) {
                      const auto [kk, str] = multiply_strings(s012, l3.ops[l]);
                      acc[str] += v * c012 * l3.coeff[l] * i_power(kk);
                    }
                  }
                }
            }
        }

  PauliSum sum(nq);
  for (const auto& [p, c] : acc) sum.add(p, c);
  sum.simplify(drop_tol);
  return QubitHamiltonian::from_sum(sum, drop_tol);
}

}  // namespace deepvqe
