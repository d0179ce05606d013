#include "deepvqe/matrix_representation.hpp"

#include <bit>
#include <numeric>

#include "deepvqe/errors.hpp"

namespace deepvqe {

PauliString restrict_to(const PauliString& p, const std::vector<int>& subset) {
  PauliString out;
  std::uint64_t covered = 0;
  for (std::size_t j = 0; j < subset.size(); ++j) {
    const int q = subset[j];
    if (q < 0 || q >= kMaxQubits) throw ValidationError("qubit index out of range in subset");
    covered |= std::uint64_t{1} << q;
    out.x |= ((p.x >> q) & 1u) << j;
    out.z |= ((p.z >> q) & 1u) << j;
  }
  if (p.support() & ~covered) throw ValidationError("term " + to_word(p) + " acts outside the qubit subset");
  return out;
}

namespace {

std::vector<int> resolve_subset(const QubitHamiltonian& h, const std::vector<int>& subset) {
  if (!subset.empty()) return subset;
  std::vector<int> all(h.n_qubits());
  std::iota(all.begin(), all.end(), 0);
  return all;
}

}  // namespace

Eigen::MatrixXcd dense_matrix(const QubitHamiltonian& h, const std::vector<int>& subset) {
  const auto sub = resolve_subset(h, subset);
  if (sub.size() > 14) throw ValidationError("dense matrix requested for more than 14 qubits");
  const Eigen::Index dim = Eigen::Index{1} << sub.size();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& t : h.terms()) {
    const PauliString p = restrict_to(t.ops, sub);
    const cplx base = t.coefficient * i_power(p.y_count());
    for (std::uint64_t b = 0; b < static_cast<std::uint64_t>(dim); ++b) {
      m(static_cast<Eigen::Index>(b ^ p.x), static_cast<Eigen::Index>(b)) +=
          (std::popcount(p.z & b) & 1) ? -base : base;
    }
  }
  return m;
}

Eigen::SparseMatrix<cplx> sparse_matrix(const QubitHamiltonian& h, const std::vector<int>& subset) {
  const auto sub = resolve_subset(h, subset);
  if (sub.size() > 30) throw ValidationError("sparse matrix requested for more than 30 qubits");
  const Eigen::Index dim = Eigen::Index{1} << sub.size();
  std::vector<Eigen::Triplet<cplx>> trip;
  trip.reserve(h.size() * static_cast<std::size_t>(dim));
  for (const auto& t : h.terms()) {
    const PauliString p = restrict_to(t.ops, sub);
    const cplx base = t.coefficient * i_power(p.y_count());
    for (std::uint64_t b = 0; b < static_cast<std::uint64_t>(dim); ++b) {
      trip.emplace_back(static_cast<Eigen::Index>(b ^ p.x), static_cast<Eigen::Index>(b),
                        (std::popcount(p.z & b) & 1) ? -base : base);
    }
  }
  Eigen::SparseMatrix<cplx> m(dim, dim);
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

Eigen::MatrixXcd dense_matrix(const PauliString& p, int n_qubits) {
  return dense_matrix(QubitHamiltonian::from_terms(n_qubits, {{p, 1.0}}, 0.0));
}

}  // namespace deepvqe
