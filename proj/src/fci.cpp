#include "deepvqe/fci.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>

#include "deepvqe/errors.hpp"

namespace deepvqe {

namespace {

std::size_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::size_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::size_t>(n - k + i) / static_cast<std::size_t>(i);
  return r;
}

struct Excitation {
  int pq;         // p * n + q for E_pq = a+_p a_q
  int target;     // index of E_pq |J>
  double sign;
};

struct StringSpace {
  std::vector<std::uint32_t> strings;
  std::vector<std::vector<Excitation>> excitations;  // per source string J

  StringSpace(int n, int k) {
    std::vector<int> index(std::size_t{1} << n, -1);
    for (std::uint32_t s = 0; s < (1u << n); ++s)
      if (std::popcount(s) == k) {
        index[s] = static_cast<int>(strings.size());
        strings.push_back(s);
      }
    excitations.resize(strings.size());
    for (std::size_t j = 0; j < strings.size(); ++j) {
      const std::uint32_t s = strings[j];
      for (int q = 0; q < n; ++q) {
        if (!((s >> q) & 1u)) continue;
        const std::uint32_t s1 = s & ~(1u << q);
        const int sign_q = std::popcount(s & ((1u << q) - 1u)) & 1;
        for (int p = 0; p < n; ++p) {
          if ((s1 >> p) & 1u) continue;
          const std::uint32_t t = s1 | (1u << p);
          const int sign_p = std::popcount(s1 & ((1u << p) - 1u)) & 1;
          excitations[j].push_back({p * n + q, index[t], (sign_p ^ sign_q) ? -1.0 : 1.0});
        }
      }
    }
  }
};

constexpr std::size_t kKrylovVectors = 64;
constexpr std::size_t kBatchBytes = std::size_t{256} << 20;

}  // namespace

std::size_t fci_memory_estimate(int n, int na, int nb) {
  const std::size_t dim = binomial(n, na) * binomial(n, nb);
  // Krylov basis, restart workspace and sigma scratch plus the batched work arrays.
  return sizeof(double) * dim * kKrylovVectors + kBatchBytes;
}

FciResult fci(const IntegralSet& ints, int na, int nb, const FciOptions& opt) {
  const int n = ints.n_spatial();
  if (n > 24) throw ValidationError("determinant CI supports at most 24 orbitals");
  if (na < 0 || nb < 0 || na > n || nb > n) throw ValidationError("electron counts outside the orbital space");
  const std::size_t need = fci_memory_estimate(n, na, nb);
  if (need > opt.memory_budget_bytes) {
    throw ValidationError("FCI sector needs about " + std::to_string(need >> 20) + " MiB, over the memory budget");
  }

  const StringSpace alpha(n, na), beta(n, nb);
  const Eigen::Index n_a = static_cast<Eigen::Index>(alpha.strings.size());
  const Eigen::Index n_b = static_cast<Eigen::Index>(beta.strings.size());
  const Eigen::Index dim = n_a * n_b;
  const int n2 = n * n;

  // ERI as an n^2 x n^2 matrix (pq|rs) and the modified one-body part.
  Eigen::MatrixXd eri(n2, n2);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) eri(p * n + q, r * n + s) = 0.5 * ints.chem(p, q, r, s);
  Eigen::MatrixXd hmod = ints.h1;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r) hmod(p, q) -= 0.5 * ints.chem(p, r, r, q);

  // Work arrays for a batch of alpha strings: rows ia * n_b + ib, columns pq.
  const Eigen::Index batch_a = std::clamp<Eigen::Index>(
      static_cast<Eigen::Index>(kBatchBytes / (2 * sizeof(double) * static_cast<std::size_t>(n2 * n_b))), 1, n_a);
  Eigen::MatrixXd d(batch_a * n_b, n2), g(batch_a * n_b, n2);

  auto sigma = [&](const Eigen::VectorXd& c, Eigen::VectorXd& out) {
    out.setZero(dim);
    for (Eigen::Index a0 = 0; a0 < n_a; a0 += batch_a) {
      const Eigen::Index na_b = std::min(batch_a, n_a - a0), rows = na_b * n_b;
      auto db = d.topRows(rows);
      auto gb = g.topRows(rows);
      db.setZero();
      // D(I, pq) = <I|E_pq|c>; E_pq|J> = s|I> iff E_qp|I> = s|J>.
      for (Eigen::Index ia = a0; ia < a0 + na_b; ++ia)
        for (const auto& e : alpha.excitations[ia]) {
          const int pq = (e.pq % n) * n + e.pq / n;
          db.col(pq).segment((ia - a0) * n_b, n_b) += e.sign * c.segment(static_cast<Eigen::Index>(e.target) * n_b, n_b);
        }
      for (Eigen::Index ia = a0; ia < a0 + na_b; ++ia)
        for (Eigen::Index ib = 0; ib < n_b; ++ib)
          for (const auto& e : beta.excitations[ib]) {
            const int pq = (e.pq % n) * n + e.pq / n;
            db((ia - a0) * n_b + ib, pq) += e.sign * c[ia * n_b + e.target];
          }
      gb.noalias() = db * eri.transpose();
      const auto cb = c.segment(a0 * n_b, rows);
      for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) gb.col(p * n + q) += hmod(p, q) * cb;

      // sigma(K) += <K|E_pq|I> G(I, pq).
      for (Eigen::Index ia = a0; ia < a0 + na_b; ++ia)
        for (const auto& e : alpha.excitations[ia])
          out.segment(static_cast<Eigen::Index>(e.target) * n_b, n_b) +=
              e.sign * gb.col(e.pq).segment((ia - a0) * n_b, n_b);
      for (Eigen::Index ia = a0; ia < a0 + na_b; ++ia)
        for (Eigen::Index ib = 0; ib < n_b; ++ib) {
          const Eigen::Index row = (ia - a0) * n_b + ib;
          for (const auto& e : beta.excitations[ib]) out[ia * n_b + e.target] += e.sign * gb(row, e.pq);
        }
    }
    out.array() += ints.e_nuc * c.array();
  };

  FciResult r;
  r.dimension = static_cast<std::size_t>(dim);
  r.n_alpha = na;
  r.n_beta = nb;
  const int roots = std::min<Eigen::Index>(opt.n_roots, dim);
  const auto lr = lanczos_lowest<double>(sigma, dim, roots, Eigen::VectorXd(), opt.lanczos);
  r.energies = lr.values;
  r.residuals = lr.residuals;
  r.matvecs = lr.matvecs;
  r.energy = lr.values.front();
  r.ground_state = lr.vectors.col(0);
  return r;
}

FciResult fci(const IntegralSet& ints, const FciOptions& opt) {
  const int ne = ints.n_electrons, ms2 = ints.ms2;
  if ((ne + ms2) % 2 != 0 || std::abs(ms2) > ne) throw ValidationError("MS2 inconsistent with electron count");
  return fci(ints, (ne + ms2) / 2, (ne - ms2) / 2, opt);
}

}  // namespace deepvqe
