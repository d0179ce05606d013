#include "deepvqe/subsystem_solver.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCore>
#include <algorithm>
#include <cmath>
#include <bit>
#include <numeric>

#include "deepvqe/errors.hpp"
#include "deepvqe/matrix_representation.hpp"

namespace deepvqe {

std::string to_string(SpinTag t) {
  switch (t) {
    case SpinTag::Up: return "up";
    case SpinTag::Down: return "dn";
    case SpinTag::Zero: return "z";
    case SpinTag::Mixed: return "mixed";
  }
  return "?";
}

SpinLayout SpinLayout::interleaved(int n_qubits) {
  SpinLayout s;
  for (int q = 0; q < n_qubits; ++q) (q % 2 ? s.beta_mask : s.alpha_mask) |= std::uint64_t{1} << q;
  return s;
}

int EigenSolution::state_count() const {
  int n = 0;
  for (const auto& l : levels) n += l.degeneracy();
  return n;
}

void fix_phase(Eigen::VectorXcd& v) {
  if (v.size() == 0) return;
  const double mx = v.cwiseAbs().maxCoeff();
  if (mx == 0.0) return;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) >= mx * (1.0 - 1e-8)) {
      v *= std::conj(v[i]) / std::abs(v[i]);
      v[i] = std::abs(v[i]);
      return;
    }
  }
}

namespace {

Eigen::VectorXd diagonal_of(std::uint64_t dim, const SpinLayout& spin, bool sz) {
  Eigen::VectorXd d(dim);
  for (std::uint64_t b = 0; b < dim; ++b) {
    const int na = std::popcount(b & spin.alpha_mask), nb = std::popcount(b & spin.beta_mask);
    d[static_cast<Eigen::Index>(b)] = sz ? 0.5 * (na - nb) : double(na + nb);
  }
  return d;
}

// Canonical orthonormal basis of span(G): project computational basis states
// in order of decreasing projector weight and Gram-Schmidt them.
Eigen::MatrixXcd canonical_span_basis(const Eigen::MatrixXcd& g) {
  const Eigen::Index d = g.cols(), dim = g.rows();
  if (d == 1) {
    Eigen::VectorXcd v = g.col(0);
    fix_phase(v);
    return v;
  }
  const Eigen::VectorXd weight = g.rowwise().squaredNorm();
  std::vector<Eigen::Index> order(dim);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    if (std::abs(weight[a] - weight[b]) > 1e-10) return weight[a] > weight[b];
    return a < b;
  });
  Eigen::MatrixXcd out(dim, d);
  Eigen::Index found = 0;
  for (Eigen::Index b : order) {
    if (found == d) break;
    Eigen::VectorXcd v = g * g.row(b).adjoint();  // P e_b
    for (int pass = 0; pass < 2; ++pass)
      if (found > 0) v -= out.leftCols(found) * (out.leftCols(found).adjoint() * v);
    const double nv = v.norm();
    if (nv < 1e-6) continue;
    v /= nv;
    fix_phase(v);
    out.col(found++) = v;
  }
  if (found != d) throw NumericalError("could not canonicalize a degenerate eigenspace");
  return out;
}

// Splits columns of g by distinct eigenvalues of the Hermitian diagonal
// operator `diag`, returning groups in ascending eigenvalue order.
std::vector<std::pair<double, Eigen::MatrixXcd>> split_by(const Eigen::MatrixXcd& g, const Eigen::VectorXd& diag) {
  const Eigen::MatrixXcd proj = g.adjoint() * diag.asDiagonal() * g;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (proj + proj.adjoint()));
  const Eigen::MatrixXcd rotated = g * es.eigenvectors();
  std::vector<std::pair<double, Eigen::MatrixXcd>> out;
  Eigen::Index start = 0;
  const Eigen::Index d = g.cols();
  for (Eigen::Index j = 1; j <= d; ++j) {
    if (j == d || es.eigenvalues()[j] - es.eigenvalues()[start] > 1e-8) {
      const double value = es.eigenvalues().segment(start, j - start).mean();
      out.emplace_back(value, rotated.middleCols(start, j - start));
      start = j;
    }
  }
  return out;
}

}  // namespace

void label_by_sz(EigenLevel& level, const SpinLayout& spin, SzOrder order) {
  const int d = level.degeneracy();
  if (d == 0) return;
  const int n = level.states.front().n_qubits;
  const std::uint64_t dim = std::uint64_t{1} << n;
  Eigen::MatrixXcd g(static_cast<Eigen::Index>(dim), d);
  for (int j = 0; j < d; ++j) g.col(j) = level.states[j].amplitudes;

  const Eigen::VectorXd sz_diag = diagonal_of(dim, spin, true);
  const Eigen::VectorXd n_diag = diagonal_of(dim, spin, false);

  auto groups = split_by(g, sz_diag);
  if (order == SzOrder::Descending) std::reverse(groups.begin(), groups.end());

  level.states.clear();
  level.sz.clear();
  level.electrons.clear();
  level.tags.clear();
  for (const auto& sz_group : groups) {
    for (const auto& n_group : split_by(sz_group.second, n_diag)) {
      const Eigen::MatrixXcd basis = canonical_span_basis(n_group.second);
      for (Eigen::Index j = 0; j < basis.cols(); ++j) {
        const Eigen::VectorXcd v = basis.col(j);
        const double s = v.dot(sz_diag.cwiseProduct(v)).real();
        const double spread = (sz_diag.cwiseProduct(v) - s * v).norm();
        SpinTag tag = spread > 1e-8 ? SpinTag::Mixed
                      : s > 1e-8    ? SpinTag::Up
                      : s < -1e-8   ? SpinTag::Down
                                    : SpinTag::Zero;
        // Sharp quantum numbers are reported exactly.
        const double ne = v.dot(n_diag.cwiseProduct(v)).real();
        const double ne_spread = (n_diag.cwiseProduct(v) - ne * v).norm();
        level.states.emplace_back(n, v);
        level.sz.push_back(spread > 1e-8 ? s : 0.5 * std::round(2.0 * s));
        level.electrons.push_back(ne_spread > 1e-8 ? ne : std::round(ne));
        level.tags.push_back(tag);
      }
    }
  }
}

EigenSolution solve_lowest(const QubitHamiltonian& h, int k, const SpinLayout& spin, const SolverOptions& opt) {
  if (k < 1) throw ValidationError("requested state count must be positive");
  const int n = h.n_qubits();
  const Eigen::Index dim = Eigen::Index{1} << n;
  if (k > dim) throw ValidationError("requested more states than the Hilbert space holds");

  Eigen::VectorXd values;
  Eigen::MatrixXcd vectors;
  if (n <= opt.dense_max_qubits) {
    const Eigen::MatrixXcd m = dense_matrix(h);
    if (m.imag().cwiseAbs().maxCoeff() == 0.0) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.real());
      values = es.eigenvalues();
      vectors = es.eigenvectors().cast<cplx>();
    } else {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
      values = es.eigenvalues();
      vectors = es.eigenvectors();
    }
  } else {
    const Eigen::SparseMatrix<cplx> m = sparse_matrix(h);
    auto op = [&m](const Eigen::VectorXcd& in, Eigen::VectorXcd& out) { out.noalias() = m * in; };
    int want = std::min<Eigen::Index>(k + 4, dim);
    while (true) {
      const auto r = lanczos_lowest<cplx>(op, dim, want, Eigen::VectorXcd(), opt.lanczos);
      values = Eigen::Map<const Eigen::VectorXd>(r.values.data(), want);
      vectors = r.vectors;
      const double e_last = values[want - 1];
      const double e_k = values[k - 1];
      if (want == dim || std::abs(e_last - e_k) >= opt.degeneracy_tolerance * std::max(1.0, std::abs(e_k))) break;
      want = std::min<Eigen::Index>(want + 4, dim);
    }
  }

  EigenSolution sol;
  const Eigen::Index total = values.size();
  Eigen::Index i = 0;
  while (i < total && sol.state_count() < k) {
    EigenLevel level;
    level.energy = values[i];
    Eigen::Index j = i;
    while (j < total && std::abs(values[j] - values[i]) < opt.degeneracy_tolerance * std::max(1.0, std::abs(values[i]))) {
      level.states.emplace_back(n, vectors.col(j));
      ++j;
    }
    if (j == total && total < dim) throw NumericalError("degenerate level extends past the computed eigenpairs");
    level.energy = values.segment(i, j - i).mean();
    label_by_sz(level, spin, opt.sz_order);
    sol.levels.push_back(std::move(level));
    i = j;
  }
  return sol;
}

std::vector<StartingState> starting_states(const EigenSolution& sol, int l) {
  std::vector<StartingState> out;
  for (std::size_t li = 0; li < sol.levels.size() && static_cast<int>(out.size()) < l; ++li) {
    const auto& level = sol.levels[li];
    for (int j = 0; j < level.degeneracy() && static_cast<int>(out.size()) < l; ++j) {
      StartingState s;
      s.state = level.states[j];
      s.energy = level.energy;
      s.level = static_cast<int>(li);
      s.sz = level.sz[j];
      s.tag = level.tags[j];
      s.label = "L" + std::to_string(li) + to_string(level.tags[j]);
      out.push_back(std::move(s));
    }
  }
  if (static_cast<int>(out.size()) < l) throw ValidationError("eigensolution holds fewer states than requested");
  return out;
}

std::vector<StartingState> solve_excited(const QubitHamiltonian& h, int l, const SpinLayout& spin,
                                         const SolverOptions& options) {
  return starting_states(solve_lowest(h, l, spin, options), l);
}

}  // namespace deepvqe
