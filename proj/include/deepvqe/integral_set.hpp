#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

namespace deepvqe {

enum class TwoElectronConvention { Physicist, Chemist };

/// Second-quantized molecular integrals over real spatial orbitals.
///
/// The electronic Hamiltonian is
///   H = e_nuc + sum_{pq,s} h1(p,q) a+_{ps} a_{qs}
///     + 1/2 sum_{pqrs,s,t} <pq|rs> a+_{ps} a+_{qt} a_{st} a_{rs}
/// with the two-electron tensor stored in physicist order <pq|rs> = (pr|qs).
class IntegralSet {
 public:
  static constexpr TwoElectronConvention convention = TwoElectronConvention::Physicist;

  IntegralSet() = default;
  explicit IntegralSet(int n_spatial);

  int n_spatial() const noexcept { return n_; }
  int n_spin() const noexcept { return 2 * n_; }

  Eigen::MatrixXd h1;
  double e_nuc = 0.0;
  int n_electrons = 0;
  int ms2 = 0;  // 2 * S_z of the target state
  std::string orbital_basis_label;

  /// Physicist-order element <pq|rs>.
  double& h2(int p, int q, int r, int s) { return h2_[index(p, q, r, s)]; }
  double h2(int p, int q, int r, int s) const { return h2_[index(p, q, r, s)]; }
  /// Chemist-order element (pq|rs) = <pr|qs>.
  double chem(int p, int q, int r, int s) const { return h2(p, r, q, s); }
  void set_chem(int p, int q, int r, int s, double v) { h2(p, r, q, s) = v; }

  const std::vector<double>& h2_data() const noexcept { return h2_; }

  /// Checks h1 symmetry, 8-fold h2 permutation symmetry and the electron count.
  /// Throws ValidationError on violation.
  void validate(double tol = 1e-12) const;

  /// Largest absolute element-wise difference in h1, h2 and e_nuc.
  double max_difference(const IntegralSet& other) const;

 private:
  std::size_t index(int p, int q, int r, int s) const noexcept {
    const std::size_t n = static_cast<std::size_t>(n_);
    return ((static_cast<std::size_t>(p) * n + q) * n + r) * n + s;
  }

  int n_ = 0;
  std::vector<double> h2_;
};

}  // namespace deepvqe
