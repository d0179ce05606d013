#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <filesystem>
#include <random>
#include <sstream>

#include "deepvqe/effective_hamiltonian.hpp"
#include "deepvqe/errors.hpp"
#include "deepvqe/matrix_representation.hpp"
#include "deepvqe/product_operator.hpp"
#include "deepvqe/state_vector.hpp"

using namespace deepvqe;

namespace {

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = 0; c < a.cols(); ++c) out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
  return out;
}

// Full matrix of an effective Hamiltonian with subsystem 0 as the most significant index.
Eigen::MatrixXcd dense_oracle(const EffectiveHamiltonian& eff) {
  const int m = eff.n_subsystems();
  const auto dim = static_cast<Eigen::Index>(eff.product_dimension());
  Eigen::MatrixXcd h = eff.constant * Eigen::MatrixXcd::Identity(dim, dim);
  auto product = [&](const std::vector<Eigen::MatrixXcd>& ops) {
    Eigen::MatrixXcd p = Eigen::MatrixXcd::Identity(1, 1);
    for (const auto& o : ops) p = kron(p, o);
    return p;
  };
  for (int i = 0; i < m; ++i) {
    std::vector<Eigen::MatrixXcd> ops;
    for (int j = 0; j < m; ++j) ops.push_back(j == i ? eff.local[i] : Eigen::MatrixXcd::Identity(eff.dims[j], eff.dims[j]));
    h += product(ops);
  }
  for (const auto& t : eff.interactions) {
    std::vector<Eigen::MatrixXcd> ops;
    for (int j = 0; j < m; ++j) ops.push_back(eff.factor(j, t.factors[j]));
    h += t.lambda * product(ops);
  }
  return h;
}

Eigen::MatrixXd random_symmetric(std::mt19937_64& rng, int k) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd a(k, k);
  for (int r = 0; r < k; ++r)
    for (int c = 0; c < k; ++c) a(r, c) = g(rng);
  return 0.5 * (a + a.transpose());
}

Eigen::MatrixXd random_antisymmetric(std::mt19937_64& rng, int k) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd a(k, k);
  for (int r = 0; r < k; ++r)
    for (int c = 0; c < k; ++c) a(r, c) = g(rng);
  return 0.5 * (a - a.transpose());
}

Eigen::MatrixXcd random_hermitian(std::mt19937_64& rng, int k) {
  return random_symmetric(rng, k).cast<cplx>() + cplx(0, 1) * random_antisymmetric(rng, k).cast<cplx>();
}

// Sparsifies a matrix by zeroing most off-diagonal entries while staying Hermitian.
Eigen::MatrixXcd sparsify(std::mt19937_64& rng, Eigen::MatrixXcd a) {
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = r + 1; c < a.cols(); ++c)
      if (rng() % 4 != 0) a(r, c) = a(c, r) = 0.0;
  return a;
}

// Random effective Hamiltonian. In real mode each factor string carries zero
// or one Y and its matrix is real symmetric or i times real antisymmetric;
// only terms with an even Y count are generated.
EffectiveHamiltonian random_effective(std::mt19937_64& rng, const std::vector<int>& dims, int n_terms, bool real) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  EffectiveHamiltonian eff;
  eff.dims = dims;
  const int m = static_cast<int>(dims.size());
  eff.factor_strings.resize(m);
  eff.factor_matrices.resize(m);
  eff.constant = u(rng);
  for (int i = 0; i < m; ++i) {
    eff.local.push_back(real ? Eigen::MatrixXcd(random_symmetric(rng, dims[i]).cast<cplx>())
                             : random_hermitian(rng, dims[i]));
    for (int f = 0; f < 4; ++f) {
      const bool y = f % 2 == 1;
      eff.factor_strings[i].push_back(y ? PauliString::single(f, PauliLetter::Y) : PauliString::single(f, PauliLetter::X));
      Eigen::MatrixXcd v;
      if (real)
        v = y ? Eigen::MatrixXcd(cplx(0, 1) * random_antisymmetric(rng, dims[i]).cast<cplx>())
              : Eigen::MatrixXcd(random_symmetric(rng, dims[i]).cast<cplx>());
      else
        v = random_hermitian(rng, dims[i]);
      if (f == 2) v = sparsify(rng, v);
      eff.factor_matrices[i].push_back(v);
    }
  }
  while (static_cast<int>(eff.interactions.size()) < n_terms) {
    EffectiveHamiltonian::Term t;
    t.lambda = u(rng);
    int active = 0, ys = 0;
    for (int i = 0; i < m; ++i) {
      const int f = static_cast<int>(rng() % 7) - 2;  // identity for f < 0
      t.factors.push_back(f < 0 ? -1 : f % 4);
      if (f >= 0) {
        ++active;
        ys += (f % 4) % 2;
      }
    }
    if (active < 1 || (real && ys % 2 != 0)) continue;
    eff.interactions.push_back(t);
  }
  return eff;
}

template <class Scalar>
void expect_matches_oracle(const EffectiveHamiltonian& eff, std::mt19937_64& rng) {
  using Op = ProductOperator<Scalar>;
  const Op op(eff);
  const Eigen::MatrixXcd h = dense_oracle(eff);
  ASSERT_EQ(op.dimension(), h.rows());
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 3; ++trial) {
    typename Op::Vec x(op.dimension()), y;
    for (Eigen::Index k = 0; k < x.size(); ++k) {
      if constexpr (std::is_same_v<Scalar, double>)
        x[k] = g(rng);
      else
        x[k] = cplx(g(rng), g(rng));
    }
    op.apply(x, y);
    const Eigen::VectorXcd expected = h * x.template cast<cplx>();
    EXPECT_LT((y.template cast<cplx>() - expected).cwiseAbs().maxCoeff(), 1e-11 * (1.0 + expected.norm()));
  }
}

QubitHamiltonian random_qubit_hamiltonian(std::mt19937_64& rng, int n, int n_terms) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const std::uint64_t mask = (std::uint64_t{1} << n) - 1;
  std::vector<QubitTerm> terms;
  for (int t = 0; t < n_terms; ++t) terms.push_back({PauliString{rng() & mask, rng() & mask}, u(rng)});
  return QubitHamiltonian::from_terms(n, terms);
}

Eigen::MatrixXcd random_isometry(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd a(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) a(r, c) = cplx(g(rng), g(rng));
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
  return qr.householderQ() * Eigen::MatrixXcd::Identity(rows, cols);
}

SubsystemBasis complete_basis(int i, int n) {
  SubsystemBasis b;
  b.subsystem = i;
  b.n_qubits = n;
  b.vectors = Eigen::MatrixXcd::Identity(Eigen::Index{1} << n, Eigen::Index{1} << n);
  return b;
}

double lowest_eigenvalue(const Eigen::MatrixXcd& h) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(h, Eigen::EigenvaluesOnly).eigenvalues()[0];
}

}  // namespace

TEST(EffectiveHamiltonian, ProjectionMatchesDenseOracle) {
  std::mt19937_64 rng(11);
  const auto h = random_qubit_hamiltonian(rng, 3, 20);
  const auto b = random_isometry(rng, 8, 4);
  const Eigen::MatrixXcd expected = b.adjoint() * dense_matrix(h) * b;
  EXPECT_LT((project_operator(h, b) - expected).cwiseAbs().maxCoeff(), 1e-12);
  const PauliString p = parse_word("X0 Y1 Z2", 3);
  const Eigen::MatrixXcd ep = b.adjoint() * dense_matrix(p, 3) * b;
  EXPECT_LT((project_operator(p, b) - ep).cwiseAbs().maxCoeff(), 1e-12);
  // Identity projects to the identity on an orthonormal basis.
  EXPECT_LT((project_operator(PauliString{}, b) - Eigen::MatrixXcd::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(EffectiveHamiltonian, CompleteBasesReproduceTheSpectrum) {
  std::mt19937_64 rng(12);
  const auto h = random_qubit_hamiltonian(rng, 6, 60);
  const auto ph = partition(h, SubsystemPartition::contiguous({2, 3, 1}));
  const auto eff = assemble(ph, {complete_basis(0, 2), complete_basis(1, 3), complete_basis(2, 1)});
  EXPECT_EQ(eff.dims, (std::vector<int>{4, 8, 2}));
  EXPECT_EQ(eff.qubits(), (std::vector<int>{2, 3, 1}));
  EXPECT_EQ(eff.total_qubits(), 6);

  // Subsystem 0 occupies the lowest qubits, so the effective index order is a
  // permutation of the computational one; spectra agree exactly.
  Eigen::VectorXd full = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(dense_matrix(h), Eigen::EigenvaluesOnly).eigenvalues();
  Eigen::VectorXd proj =
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(dense_oracle(eff), Eigen::EigenvaluesOnly).eigenvalues();
  EXPECT_LT((full - proj).cwiseAbs().maxCoeff(), 1e-10);

  const auto sol = solve_effective(eff);
  EXPECT_NEAR(sol.energy, full[0], 1e-10);
  EXPECT_NEAR(sol.coefficients.norm(), 1.0, 1e-10);
}

TEST(EffectiveHamiltonian, LanczosPathMatchesDense) {
  std::mt19937_64 rng(13);
  const auto eff = random_effective(rng, {3, 7, 5, 4}, 40, true);
  EffectiveSolveOptions options;
  options.dense_max_dimension = 16;
  options.lanczos.tolerance = 1e-11;
  const auto sol = solve_effective(eff, options);
  EXPECT_TRUE(sol.real_arithmetic);
  EXPECT_GT(sol.matvecs, 0);
  EXPECT_NEAR(sol.energy, lowest_eigenvalue(dense_oracle(eff)), 1e-9);

  const auto ceff = random_effective(rng, {3, 5, 4, 4}, 30, false);
  const auto csol = solve_effective(ceff, options);
  EXPECT_FALSE(csol.real_arithmetic);
  EXPECT_NEAR(csol.energy, lowest_eigenvalue(dense_oracle(ceff)), 1e-9);
}

TEST(EffectiveHamiltonian, DecoupledSubsystems) {
  std::mt19937_64 rng(14);
  auto eff = random_effective(rng, {3, 4, 2}, 1, true);
  eff.interactions.clear();
  double expected = eff.constant;
  for (const auto& h : eff.local) expected += lowest_eigenvalue(h);
  EXPECT_NEAR(solve_effective(eff).energy, expected, 1e-12);
}

TEST(EffectiveHamiltonian, DimensionLimit) {
  std::mt19937_64 rng(15);
  const auto eff = random_effective(rng, {4, 4, 4}, 5, true);
  EffectiveSolveOptions options;
  options.max_dimension = 63;
  EXPECT_THROW(solve_effective(eff, options), ValidationError);
}

TEST(ProductOperator, RealPathMatchesKroneckerOracle) {
  std::mt19937_64 rng(21);
  for (const auto& dims : std::vector<std::vector<int>>{{2, 3}, {3, 1, 4}, {2, 3, 4, 3, 2}, {5, 6, 5, 6}}) {
    const auto eff = random_effective(rng, dims, 25, true);
    ASSERT_TRUE(ProductOperator<double>::real_compatible(eff));
    expect_matches_oracle<double>(eff, rng);
  }
}

TEST(ProductOperator, ComplexPathMatchesKroneckerOracle) {
  std::mt19937_64 rng(22);
  for (const auto& dims : std::vector<std::vector<int>>{{2, 3}, {3, 2, 4}, {2, 3, 4, 3, 2}, {4, 6, 5, 6}}) {
    const auto eff = random_effective(rng, dims, 25, false);
    EXPECT_FALSE(ProductOperator<double>::real_compatible(eff));
    EXPECT_THROW(ProductOperator<double>{eff}, ValidationError);
    expect_matches_oracle<cplx>(eff, rng);
  }
}

TEST(ProductOperator, NonAdjacentPairs) {
  // Only terms coupling subsystems 0 and 3, or 1 and 4, so pair leaves span
  // non-adjacent modes.
  std::mt19937_64 rng(23);
  auto eff = random_effective(rng, {3, 4, 2, 5, 3}, 1, true);
  eff.interactions.clear();
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int f = 0; f < 4; f += 2)
    for (int g = 0; g < 4; g += 2) {
      eff.interactions.push_back({u(rng), {f, -1, -1, g, -1}});
      eff.interactions.push_back({u(rng), {-1, f, -1, -1, g}});
    }
  expect_matches_oracle<double>(eff, rng);
  expect_matches_oracle<cplx>(eff, rng);
}

TEST(DiagonalizeFactor, PauliExamples) {
  const auto z = diagonalize_factor(dense_matrix(parse_word("Z0", 1), 1));
  EXPECT_NEAR(z.eigenvalues[0].real(), 1.0, 1e-14);
  EXPECT_NEAR(z.eigenvalues[1].real(), -1.0, 1e-14);
  EXPECT_LT(z.reconstruction_error(dense_matrix(parse_word("Z0", 1), 1)), 1e-14);

  const Eigen::MatrixXcd x = dense_matrix(parse_word("X0", 1), 1);
  const auto dx = diagonalize_factor(x);
  EXPECT_NEAR(dx.eigenvalues[0].real(), 1.0, 1e-14);
  // Eigenvector rows of U have a real positive largest entry: (1, 1)/sqrt2 for +1.
  EXPECT_NEAR(dx.unitary(0, 0).real(), std::sqrt(0.5), 1e-14);
  EXPECT_NEAR(dx.unitary(0, 1).real(), std::sqrt(0.5), 1e-14);
  EXPECT_LT(dx.reconstruction_error(x), 1e-14);
}

TEST(DiagonalizeFactor, ReconstructsHermitianAndUnitary) {
  std::mt19937_64 rng(31);
  const Eigen::MatrixXcd h = random_hermitian(rng, 9);
  const auto dh = diagonalize_factor(h);
  EXPECT_LT(dh.reconstruction_error(h), 1e-12);
  EXPECT_LT((dh.unitary * dh.unitary.adjoint() - Eigen::MatrixXcd::Identity(9, 9)).cwiseAbs().maxCoeff(), 1e-12);
  for (Eigen::Index k = 1; k < 9; ++k) EXPECT_GE(dh.eigenvalues[k - 1].real(), dh.eigenvalues[k].real());

  // Projected Pauli strings on a partial basis are normal but not unitary.
  const Eigen::MatrixXcd b = random_isometry(rng, 16, 6);
  const Eigen::MatrixXcd v = project_operator(parse_word("Y0 X2 Z3", 4), b);
  EXPECT_LT(diagonalize_factor(v).reconstruction_error(v), 1e-12);

  const Eigen::MatrixXcd u = random_isometry(rng, 5, 5);
  EXPECT_LT(diagonalize_factor(u).reconstruction_error(u), 1e-12);
}

TEST(DiagonalizeFactor, RejectsNonNormal) {
  Eigen::MatrixXcd j = Eigen::MatrixXcd::Zero(2, 2);
  j(0, 1) = 1.0;
  EXPECT_THROW(diagonalize_factor(j), NumericalError);
}

TEST(EffectiveHamiltonian, MeasurementPlanCoversEveryFactor) {
  std::mt19937_64 rng(32);
  const auto eff = random_effective(rng, {3, 4, 2}, 10, false);
  const auto plan = emit_measurement_plan(eff);
  ASSERT_EQ(plan.tables.size(), 3u);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(plan.tables[i].size(), eff.factor_matrices[i].size());
  EXPECT_EQ(plan.entries.size(), eff.interactions.size());
  EXPECT_LT(plan.max_reconstruction_error, 1e-12);
  std::ostringstream out;
  write_measurement_plan(out, plan);
  EXPECT_NE(out.str().find("factor 2 3"), std::string::npos);
}

TEST(EffectiveHamiltonian, SerializationRoundTrip) {
  std::mt19937_64 rng(33);
  const auto eff = random_effective(rng, {3, 4, 2}, 10, false);
  const auto dir = std::filesystem::temp_directory_path() / "deepvqe_eff_roundtrip";
  std::filesystem::remove_all(dir);
  write_effective_hamiltonian(dir, eff);
  EXPECT_TRUE(std::filesystem::exists(dir / "header.txt"));
  const auto back = read_effective_hamiltonian(dir);
  EXPECT_EQ(back.dims, eff.dims);
  EXPECT_EQ(back.constant, eff.constant);
  ASSERT_EQ(back.interactions.size(), eff.interactions.size());
  for (std::size_t t = 0; t < eff.interactions.size(); ++t) {
    EXPECT_EQ(back.interactions[t].lambda, eff.interactions[t].lambda);
    EXPECT_EQ(back.interactions[t].factors, eff.interactions[t].factors);
  }
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(back.local[i], eff.local[i]);
    EXPECT_EQ(back.factor_strings[i], eff.factor_strings[i]);
    for (std::size_t f = 0; f < eff.factor_matrices[i].size(); ++f)
      EXPECT_EQ(back.factor_matrices[i][f], eff.factor_matrices[i][f]);
  }
  std::filesystem::remove_all(dir);
}

TEST(EffectiveHamiltonian, PaddedExport) {
  std::mt19937_64 rng(34);
  const auto eff = random_effective(rng, {3, 4, 5}, 4, true);
  const auto p0 = padded_local(eff, 0, 50.0);
  ASSERT_EQ(p0.rows(), 4);
  EXPECT_EQ(p0.topLeftCorner(3, 3), eff.local[0]);
  EXPECT_EQ(p0(3, 3), cplx(50.0));
  EXPECT_EQ(p0(3, 0), cplx(0.0));
  EXPECT_EQ(padded_local(eff, 1).rows(), 4);
  const auto f2 = padded_factor(eff, 2, 1);
  ASSERT_EQ(f2.rows(), 8);
  EXPECT_EQ(f2.topLeftCorner(5, 5), eff.factor_matrices[2][1]);
  EXPECT_EQ(f2.bottomRightCorner(3, 3).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(padded_factor(eff, 2, -1).topLeftCorner(5, 5), Eigen::MatrixXcd::Identity(5, 5));
}
