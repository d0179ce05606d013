#pragma once

#include <Eigen/Core>
#include <utility>
#include <vector>

#include "deepvqe/geometry.hpp"
#include "deepvqe/integral_set.hpp"

namespace deepvqe {

struct GaussianPrimitive {
  double exponent;
  double coefficient;  // contraction coefficient including primitive normalization
};

/// Contracted s-type Gaussian shell. The center is stored in bohr.
struct GaussianShell {
  Eigen::Vector3d center;
  std::vector<GaussianPrimitive> primitives;
};

/// Boys function F0(t).
double boys_f0(double t);

/// STO-3G 1s shell for a hydrogen atom (positions converted from ångström).
GaussianShell sto3g_shell(const Atom& atom);

double overlap(const GaussianShell& a, const GaussianShell& b);
double kinetic(const GaussianShell& a, const GaussianShell& b);
/// Attraction to a point charge `charge` at `center` (bohr); negative for Z > 0.
double nuclear_attraction(const GaussianShell& a, const GaussianShell& b,
                          const Eigen::Vector3d& center, double charge);
/// Chemist-order repulsion integral (ab|cd).
double electron_repulsion(const GaussianShell& a, const GaussianShell& b,
                          const GaussianShell& c, const GaussianShell& d);

struct AoIntegrals {
  IntegralSet integrals;  // AO basis, label "ao"
  Eigen::MatrixXd overlap;
};

/// AO-basis integrals for a hydrogen cluster. Electron count is the sum of
/// nuclear charges (neutral molecule), MS2 = parity of that count.
/// Throws ValidationError for any element other than hydrogen.
AoIntegrals compute_sto3g_integrals(const MoleculeGeometry& geometry);

}  // namespace deepvqe
