#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <random>

#include "deepvqe/errors.hpp"
#include "deepvqe/geometry.hpp"
#include "deepvqe/jordan_wigner.hpp"
#include "deepvqe/lanczos.hpp"
#include "deepvqe/lowdin.hpp"
#include "deepvqe/matrix_representation.hpp"
#include "deepvqe/partition.hpp"
#include "deepvqe/sto3g.hpp"
#include "deepvqe/subsystem_solver.hpp"

using namespace deepvqe;

namespace {

// One Hubbard site: eps (n_up + n_dn) + U n_up n_dn on qubits (alpha 0, beta 1).
QubitHamiltonian hubbard_site(double eps, double u) {
  const int n = 2;
  return QubitHamiltonian::from_terms(n, {{PauliString{}, eps + u / 4.0},
                                          {parse_word("Z0", n), -eps / 2.0 - u / 4.0},
                                          {parse_word("Z1", n), -eps / 2.0 - u / 4.0},
                                          {parse_word("Z0 Z1", n), u / 4.0}});
}

QubitHamiltonian chain_hamiltonian(int atoms, double spacing) {
  MoleculeGeometry g;
  for (int i = 0; i < atoms; ++i) g.atoms.push_back({"H", 1, Eigen::Vector3d(0, 0, i * spacing)});
  const auto ao = compute_sto3g_integrals(g);
  const auto ints = lowdin_orthogonalize(ao.integrals, ao.overlap).integrals;
  return jordan_wigner(ints, SpinOrbitalOrdering::interleaved(atoms));
}

}  // namespace

TEST(SubsystemSolver, HubbardSiteDoublet) {
  const auto sol = solve_lowest(hubbard_site(-1.0, 3.0), 2, SpinLayout::interleaved(2));
  ASSERT_GE(sol.levels.size(), 1u);
  const auto& g = sol.levels[0];
  EXPECT_NEAR(g.energy, -1.0, 1e-12);
  ASSERT_EQ(g.degeneracy(), 2);
  EXPECT_DOUBLE_EQ(g.sz[0], -0.5);
  EXPECT_DOUBLE_EQ(g.sz[1], 0.5);
  EXPECT_EQ(g.tags[0], SpinTag::Down);
  EXPECT_EQ(g.tags[1], SpinTag::Up);
  // |dn> is bit 1 set, |up> is bit 0 set.
  EXPECT_NEAR(std::abs(g.states[0].amplitudes[2]), 1.0, 1e-12);
  EXPECT_NEAR(std::abs(g.states[1].amplitudes[1]), 1.0, 1e-12);

  const auto starts = starting_states(sol, 2);
  ASSERT_EQ(starts.size(), 2u);
  EXPECT_EQ(starts[0].label, "L0dn");
  EXPECT_EQ(starts[1].label, "L0up");

  SolverOptions desc;
  desc.sz_order = SzOrder::Descending;
  const auto sol2 = solve_lowest(hubbard_site(-1.0, 3.0), 2, SpinLayout::interleaved(2), desc);
  EXPECT_EQ(sol2.levels[0].tags[0], SpinTag::Up);
}

TEST(SubsystemSolver, LastLevelIsComplete) {
  const auto sol = solve_lowest(hubbard_site(-1.0, 3.0), 1, SpinLayout::interleaved(2));
  ASSERT_EQ(sol.levels.size(), 1u);
  EXPECT_EQ(sol.levels[0].degeneracy(), 2);
  EXPECT_EQ(sol.state_count(), 2);
  const auto excited = solve_excited(hubbard_site(-1.0, 3.0), 3, SpinLayout::interleaved(2));
  ASSERT_EQ(excited.size(), 3u);
  EXPECT_EQ(excited[2].level, 1);
  EXPECT_NEAR(excited[2].energy, 0.0, 1e-12);
  EXPECT_EQ(excited[2].tag, SpinTag::Zero);
}

TEST(SubsystemSolver, LanczosPathMatchesDense) {
  const auto h = chain_hamiltonian(4, 1.2);
  SolverOptions dense_opt, sparse_opt;
  sparse_opt.dense_max_qubits = 0;
  sparse_opt.lanczos.tolerance = 1e-12;
  const auto a = solve_lowest(h, 6, SpinLayout::interleaved(8), dense_opt);
  const auto b = solve_lowest(h, 6, SpinLayout::interleaved(8), sparse_opt);
  ASSERT_EQ(a.levels.size(), b.levels.size());
  for (std::size_t l = 0; l < a.levels.size(); ++l) {
    EXPECT_NEAR(a.levels[l].energy, b.levels[l].energy, 1e-9);
    EXPECT_EQ(a.levels[l].degeneracy(), b.levels[l].degeneracy());
    for (int j = 0; j < a.levels[l].degeneracy(); ++j) {
      EXPECT_DOUBLE_EQ(a.levels[l].sz[j], b.levels[l].sz[j]);
      const cplx overlap = a.levels[l].states[j].amplitudes.dot(b.levels[l].states[j].amplitudes);
      EXPECT_NEAR(std::abs(overlap), 1.0, 1e-6);
    }
  }
  const Eigen::MatrixXcd m = dense_matrix(h);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
  EXPECT_NEAR(a.levels[0].energy, es.eigenvalues()[0], 1e-10);
}

TEST(SubsystemSolver, StatesAreDeterministicAndPhaseFixed) {
  const auto h = chain_hamiltonian(3, 1.0);
  const auto a = solve_lowest(h, 4, SpinLayout::interleaved(6));
  const auto b = solve_lowest(h, 4, SpinLayout::interleaved(6));
  for (std::size_t l = 0; l < a.levels.size(); ++l)
    for (int j = 0; j < a.levels[l].degeneracy(); ++j) {
      const auto& v = a.levels[l].states[j].amplitudes;
      EXPECT_EQ((v - b.levels[l].states[j].amplitudes).cwiseAbs().maxCoeff(), 0.0);
      // Lowest index among the near-largest entries.
      const double mx = v.cwiseAbs().maxCoeff();
      Eigen::Index k = 0;
      while (std::abs(v[k]) < mx * (1.0 - 1e-8)) ++k;
      EXPECT_NEAR(v[k].imag(), 0.0, 1e-12);
      EXPECT_GT(v[k].real(), 0.0);
    }
}

TEST(SubsystemSolver, FixPhase) {
  Eigen::VectorXcd v(3);
  v << cplx(0, 0.1), cplx(0, -0.7), cplx(0.7, 0);
  fix_phase(v);
  // Lowest index among entries within 1e-8 of the maximum magnitude.
  EXPECT_NEAR(v[1].real(), 0.7, 1e-15);
  EXPECT_NEAR(v[1].imag(), 0.0, 1e-15);
}

TEST(Lanczos, FindsDegeneratePairs) {
  // diag(1, 1, 2, 3, ...) rotated by a random orthogonal matrix.
  const int n = 60;
  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd;
  Eigen::MatrixXd r(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r(i, j) = nd(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(r);
  const Eigen::MatrixXd q = qr.householderQ();
  Eigen::VectorXd d(n);
  for (int i = 0; i < n; ++i) d[i] = i < 2 ? 1.0 : static_cast<double>(i);
  const Eigen::MatrixXd a = q * d.asDiagonal() * q.transpose();
  auto op = [&](const Eigen::VectorXd& in, Eigen::VectorXd& out) { out = a * in; };
  LanczosOptions opt;
  opt.max_basis = 20;
  opt.keep = 6;
  opt.tolerance = 1e-11;
  const auto res = lanczos_lowest<double>(op, n, 3, Eigen::VectorXd::Ones(n), opt);
  ASSERT_EQ(res.values.size(), 3u);
  EXPECT_NEAR(res.values[0], 1.0, 1e-9);
  EXPECT_NEAR(res.values[1], 1.0, 1e-9);
  EXPECT_NEAR(res.values[2], 2.0, 1e-9);
  EXPECT_THROW(lanczos_lowest<double>(op, n, 0, Eigen::VectorXd::Ones(n), opt), ValidationError);
}
