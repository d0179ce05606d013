#include "deepvqe/integral_set.hpp"

#include <algorithm>
#include <cmath>

#include "deepvqe/errors.hpp"

namespace deepvqe {

IntegralSet::IntegralSet(int n_spatial)
    : h1(Eigen::MatrixXd::Zero(n_spatial, n_spatial)),
      n_(n_spatial),
      h2_(static_cast<std::size_t>(n_spatial) * n_spatial * n_spatial * n_spatial, 0.0) {
  if (n_spatial < 0) throw ValidationError("negative orbital count");
}

void IntegralSet::validate(double tol) const {
  if (h1.rows() != n_ || h1.cols() != n_) throw ValidationError("h1 has wrong shape");
  if ((h1 - h1.transpose()).cwiseAbs().maxCoeff() > tol && n_ > 0) {
    throw ValidationError("h1 is not symmetric");
  }
  for (int p = 0; p < n_; ++p)
    for (int q = 0; q < n_; ++q)
      for (int r = 0; r < n_; ++r)
        for (int s = 0; s < n_; ++s) {
          const double v = chem(p, q, r, s);
          const double partners[] = {chem(q, p, r, s), chem(p, q, s, r), chem(r, s, p, q)};
          for (double w : partners) {
            if (std::abs(v - w) > tol) {
              throw ValidationError("two-electron integrals violate permutation symmetry");
            }
          }
        }
  if (n_electrons < 0 || n_electrons > n_spin()) {
    throw ValidationError("electron count outside [0, n_spin]");
  }
  if (std::abs(ms2) > n_electrons || (n_electrons - ms2) % 2 != 0) {
    throw ValidationError("MS2 inconsistent with electron count");
  }
}

double IntegralSet::max_difference(const IntegralSet& other) const {
  if (other.n_ != n_) return INFINITY;
  double d = std::abs(e_nuc - other.e_nuc);
  if (n_ > 0) d = std::max(d, (h1 - other.h1).cwiseAbs().maxCoeff());
  for (std::size_t i = 0; i < h2_.size(); ++i) d = std::max(d, std::abs(h2_[i] - other.h2_[i]));
  return d;
}

}  // namespace deepvqe
