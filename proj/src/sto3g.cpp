#include "deepvqe/sto3g.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "deepvqe/errors.hpp"

namespace deepvqe {

namespace {

constexpr std::array<double, 3> kExponents = {3.42525091, 0.62391373, 0.16885540};
constexpr std::array<double, 3> kCoefficients = {0.15432897, 0.53532814, 0.44463454};
constexpr double kPi = std::numbers::pi;

struct PrimitivePair {
  double p;
  double prefactor;  // c_a c_b exp(-mu R^2)
  Eigen::Vector3d center;
};

PrimitivePair combine(const GaussianPrimitive& a, const Eigen::Vector3d& ra,
                      const GaussianPrimitive& b, const Eigen::Vector3d& rb) {
  const double p = a.exponent + b.exponent;
  const double mu = a.exponent * b.exponent / p;
  const double r2 = (ra - rb).squaredNorm();
  return {p, a.coefficient * b.coefficient * std::exp(-mu * r2),
          (a.exponent * ra + b.exponent * rb) / p};
}

}  // namespace

double boys_f0(double t) {
  if (t < 1e-8) return 1.0 - t / 3.0;
  if (t < 1e-3) {
    // Taylor series sum_k (-t)^k / (k! (2k+1))
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 8; ++k) {
      term *= -t / k;
      sum += term / (2 * k + 1);
    }
    return sum;
  }
  const double st = std::sqrt(t);
  return 0.5 * std::sqrt(kPi / t) * std::erf(st);
}

GaussianShell sto3g_shell(const Atom& atom) {
  if (atom.charge != 1) {
    throw ValidationError("STO-3G integrals are only built in for hydrogen; element '" + atom.symbol +
                          "' must be supplied through an FCIDUMP file");
  }
  GaussianShell shell;
  shell.center = atom.position * kBohrPerAngstrom;
  for (std::size_t k = 0; k < kExponents.size(); ++k) {
    const double a = kExponents[k];
    shell.primitives.push_back({a, kCoefficients[k] * std::pow(2.0 * a / kPi, 0.75)});
  }
  return shell;
}

double overlap(const GaussianShell& a, const GaussianShell& b) {
  double s = 0.0;
  for (const auto& pa : a.primitives)
    for (const auto& pb : b.primitives) {
      const auto pp = combine(pa, a.center, pb, b.center);
      s += pp.prefactor * std::pow(kPi / pp.p, 1.5);
    }
  return s;
}

double kinetic(const GaussianShell& a, const GaussianShell& b) {
  const double r2 = (a.center - b.center).squaredNorm();
  double t = 0.0;
  for (const auto& pa : a.primitives)
    for (const auto& pb : b.primitives) {
      const auto pp = combine(pa, a.center, pb, b.center);
      const double mu = pa.exponent * pb.exponent / pp.p;
      t += pp.prefactor * mu * (3.0 - 2.0 * mu * r2) * std::pow(kPi / pp.p, 1.5);
    }
  return t;
}

double nuclear_attraction(const GaussianShell& a, const GaussianShell& b,
                          const Eigen::Vector3d& center, double charge) {
  double v = 0.0;
  for (const auto& pa : a.primitives)
    for (const auto& pb : b.primitives) {
      const auto pp = combine(pa, a.center, pb, b.center);
      v -= charge * pp.prefactor * (2.0 * kPi / pp.p) *
           boys_f0(pp.p * (pp.center - center).squaredNorm());
    }
  return v;
}

double electron_repulsion(const GaussianShell& a, const GaussianShell& b,
                          const GaussianShell& c, const GaussianShell& d) {
  double g = 0.0;
  for (const auto& pa : a.primitives)
    for (const auto& pb : b.primitives) {
      const auto ab = combine(pa, a.center, pb, b.center);
      for (const auto& pc : c.primitives)
        for (const auto& pd : d.primitives) {
          const auto cd = combine(pc, c.center, pd, d.center);
          const double pq = ab.p + cd.p;
          const double rho = ab.p * cd.p / pq;
          g += ab.prefactor * cd.prefactor * 2.0 * std::pow(kPi, 2.5) /
               (ab.p * cd.p * std::sqrt(pq)) * boys_f0(rho * (ab.center - cd.center).squaredNorm());
        }
    }
  return g;
}

AoIntegrals compute_sto3g_integrals(const MoleculeGeometry& geometry) {
  geometry.validate();
  const int n = static_cast<int>(geometry.size());
  std::vector<GaussianShell> shells;
  shells.reserve(n);
  for (const auto& atom : geometry.atoms) shells.push_back(sto3g_shell(atom));

  AoIntegrals out{IntegralSet(n), Eigen::MatrixXd::Zero(n, n)};
  IntegralSet& ints = out.integrals;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      const double s = overlap(shells[i], shells[j]);
      double h = kinetic(shells[i], shells[j]);
      for (const auto& atom : geometry.atoms) {
        h += nuclear_attraction(shells[i], shells[j], atom.position * kBohrPerAngstrom, atom.charge);
      }
      out.overlap(i, j) = out.overlap(j, i) = s;
      ints.h1(i, j) = ints.h1(j, i) = h;
    }

  // Unique quartets i>=j, k>=l, ij>=kl, scattered to all eight permutations.
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j)
      for (int k = 0; k <= i; ++k)
        for (int l = 0; l <= k; ++l) {
          if (i * (i + 1) / 2 + j < k * (k + 1) / 2 + l) continue;
          const double g = electron_repulsion(shells[i], shells[j], shells[k], shells[l]);
          const int perm[8][4] = {{i, j, k, l}, {j, i, k, l}, {i, j, l, k}, {j, i, l, k},
                                  {k, l, i, j}, {l, k, i, j}, {k, l, j, i}, {l, k, j, i}};
          for (const auto& q : perm) ints.set_chem(q[0], q[1], q[2], q[3], g);
        }

  ints.e_nuc = nuclear_repulsion(geometry);
  ints.n_electrons = geometry.total_charge();
  ints.ms2 = ints.n_electrons % 2;
  ints.orbital_basis_label = "ao";
  return out;
}

}  // namespace deepvqe
